#include "oracles.hpp"
#include "sena/batch.hpp"
#include "sena/io.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace sena;
namespace fs = std::filesystem;

namespace {

/// Smooth synthetic photo-like image, large enough for every metric.
RgbImage<float> synthetic(Index w, Index h, std::uint32_t seed) {
  auto img = oracle::random_image<float>(w, h, seed, 0.0, 0.15);
  for (Index y = 0; y < h; ++y) {
    for (Index x = 0; x < w; ++x) {
      const float base = 0.1f + 0.5f * static_cast<float>(x) / static_cast<float>(w) *
                                    (0.5f + 0.5f * std::sin(0.1f * static_cast<float>(y + seed)));
      img.r(x, y) = std::round((img.r(x, y) + base) * 255) / 255;
      img.g(x, y) = std::round((img.g(x, y) + 0.8f * base) * 255) / 255;
      img.b(x, y) = std::round((img.b(x, y) + 0.6f * base) * 255) / 255;
    }
  }
  return img;
}

struct Fixture {
  fs::path root;
  fs::path in;

  explicit Fixture(const std::string& name) : root(fs::temp_directory_path() / ("sena_batch_" + name)) {
    fs::remove_all(root);
    in = root / "in";
    write_rgb(in / "a.png", synthetic(120, 100, 1));
    write_rgb(in / "sub/b.png", synthetic(110, 100, 2));
    write_rgb(in / "sub/c.png", synthetic(100, 130, 3));
  }

  RunManifest manifest(const std::string& tag, std::vector<Method> methods, int workers) const {
    RunManifest m;
    m.input_dir = in;
    m.output_dir = root / ("out_" + tag);
    m.report_path = root / ("report_" + tag + ".csv");
    m.methods = std::move(methods);
    m.worker_count = workers;
    return m;
  }
};

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// CSV with the trailing timing column removed.
std::string without_timing(const std::string& csv) {
  std::istringstream in(csv);
  std::string line, out;
  while (std::getline(in, line)) out += line.substr(0, line.rfind(',')) + "\n";
  return out;
}

}  // namespace

TEST_CASE("method names") {
  for (auto m : {Method::none, Method::sena, Method::clahe}) CHECK(parse_method(method_name(m)) == m);
  CHECK_THROWS_AS(parse_method("retinex"), ConfigError);
}

TEST_CASE("manifest parsing") {
  const auto m = parse_manifest(
      "# nightly run\ninput_dir = images\noutput_dir=/tmp/out\nmethods = sena, clahe\n"
      "report = reports/r.csv\nworkers = 3\nconfig = tuned.cfg\nniqe_model = m.nss\n",
      "/data/run");
  CHECK(m.input_dir == fs::path("/data/run/images"));
  CHECK(m.output_dir == fs::path("/tmp/out"));
  CHECK(m.methods == std::vector<Method>{Method::sena, Method::clahe});
  CHECK(m.report_path == fs::path("/data/run/reports/r.csv"));
  CHECK(m.worker_count == 3);
  CHECK(*m.config_path == fs::path("/data/run/tuned.cfg"));
  CHECK(*m.niqe_model == fs::path("/data/run/m.nss"));
  CHECK_THROWS_AS(parse_manifest("workers = 0\n", "."), ConfigError);
  CHECK_THROWS_AS(parse_manifest("speed = 3\n", "."), ConfigError);
  CHECK_THROWS_AS(parse_manifest("methods = sena, magic\n", "."), ConfigError);

  RunManifest bad;
  bad.input_dir = "/nonexistent";
  bad.output_dir = "/tmp/x";
  bad.report_path = "/tmp/x.csv";
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad.input_dir = fs::temp_directory_path();
  bad.methods.clear();
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad.methods = {Method::sena, Method::sena};
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("worker count environment override") {
  ::unsetenv(kWorkersEnv);
  CHECK(effective_worker_count(3) == 3);
  ::setenv(kWorkersEnv, "5", 1);
  CHECK(effective_worker_count(3) == 5);
  ::setenv(kWorkersEnv, "zero", 1);
  CHECK(effective_worker_count(3) == 3);
  ::unsetenv(kWorkersEnv);
}

TEST_CASE("output paths mirror the input tree") {
  CHECK(output_relative_path("sub/dir/x.jpg", Method::sena) == fs::path("sub/dir/x_sena.png"));
  CHECK(output_relative_path("y.png", Method::none) == fs::path("y_none.png"));
}

TEST_CASE("percentile helper") {
  CHECK(sample_percentile({3, 1, 2}, 50) == 2);
  CHECK(sample_percentile({1, 2, 3, 4}, 50) == 2);
  CHECK(sample_percentile({5, 1, 9, 7}, 95) == 9);
  CHECK_THROWS_AS(sample_percentile({}, 50), ParameterError);
}

TEST_CASE("aggregation and CSV schema") {
  std::vector<ReportRow> rows;
  auto row = [](std::string file, Method m, double piqe, double ms) {
    ReportRow r;
    r.file = std::move(file);
    r.method = m;
    r.ok = true;
    r.quality.piqe = piqe;
    r.quality.mean_brightness = piqe * 2;
    r.quality.std_dev = 1.0;
    r.quality.entropy = 7.0;
    r.quality.enhance_millis = ms;
    return r;
  };
  rows.push_back(row("b.png", Method::sena, 20.0, 3.0));
  rows.push_back(row("a.png", Method::sena, 10.0, 1.0));
  rows.push_back(row("a.png", Method::clahe, 30.0, 2.0));
  ReportRow failed;
  failed.file = "b.png";
  failed.method = Method::clahe;
  failed.error = "cannot decode";
  rows.push_back(failed);

  const auto rep = aggregate(rows, {Method::sena, Method::clahe});
  CHECK(rep.rows.size() == 4);
  CHECK(rep.failures() == 1);
  CHECK(rep.rows[0].file == "a.png");
  CHECK(rep.rows[0].method == Method::clahe);
  REQUIRE(rep.summaries.size() == 2);
  CHECK(rep.summaries[0].rows == 2);
  CHECK(rep.summaries[0].piqe == 15.0);
  CHECK(rep.summaries[0].mean_brightness == 30.0);
  CHECK(*rep.summaries[0].median_ms == 1.0);
  CHECK(*rep.summaries[0].p95_ms == 3.0);
  CHECK(rep.summaries[1].rows == 1);
  CHECK(rep.tests.size() == report_metrics().size());
  for (const auto& t : rep.tests) {
    CHECK_FALSE(t.result.has_value());
    CHECK_FALSE(t.error.empty());
  }

  const std::string golden =
      "file,method,status,brisque,niqe,piqe,piqe_degenerate,mean_brightness,std_dev,entropy,enhance_ms\n"
      "a.png,clahe,ok,,,30.0000,0,60.0000,1.0000,7.0000,2.0000\n"
      "a.png,sena,ok,,,10.0000,0,20.0000,1.0000,7.0000,1.0000\n"
      "b.png,clahe,error,,,,,,,,\n"
      "b.png,sena,ok,,,20.0000,0,40.0000,1.0000,7.0000,3.0000\n";
  CHECK(format_csv(rep) == golden);

  const auto json = format_json(rep);
  CHECK(json.find("\"failures\": 1") != std::string::npos);
  CHECK(json.find("\"error\": \"cannot decode\"") != std::string::npos);
}

TEST_CASE("Wilcoxon across methods with enough pairs") {
  std::vector<ReportRow> rows;
  for (int i = 0; i < 8; ++i) {
    for (auto m : {Method::none, Method::sena}) {
      ReportRow r;
      r.file = "f" + std::to_string(i) + ".png";
      r.method = m;
      r.ok = true;
      r.quality.mean_brightness = m == Method::sena ? 100.0 + i : 50.0 + 2 * i;
      r.quality.entropy = 6.0;
      rows.push_back(r);
    }
  }
  const auto rep = aggregate(rows, {Method::none, Method::sena});
  bool found = false;
  for (const auto& t : rep.tests) {
    if (t.metric != "mean_brightness") continue;
    found = true;
    REQUIRE(t.result.has_value());
    CHECK(t.result->statistic == 0.0);
    CHECK(t.result->p_two_sided == doctest::Approx(2.0 / 256));
  }
  CHECK(found);
}

TEST_CASE("run_batch end to end") {
  const Fixture fx("e2e");
  write_rgb(fx.in / "sub/deeper/d.png", synthetic(20, 20, 4));  // too small for NIQE/PIQE paths? still scored
  {
    std::ofstream junk(fx.in / "broken.png");
    junk << "garbage";
  }
  auto m = fx.manifest("serial", {Method::none, Method::sena}, 1);
  m.niqe_model = fs::path(SENA_TEST_MODEL_DIR) / "niqe_default.nss";
  const auto rep = run_batch(m);
  CHECK(rep.rows.size() == 5 * 2);
  CHECK(rep.failures() == 2);  // the broken file, once per method
  for (const auto& r : rep.rows) {
    if (r.file == "broken.png") {
      CHECK_FALSE(r.ok);
    } else {
      CHECK(r.ok);
    }
  }
  CHECK(fs::exists(m.output_dir / "a_sena.png"));
  CHECK(fs::exists(m.output_dir / "sub/b_none.png"));
  CHECK(fs::exists(m.output_dir / "sub/deeper/d_sena.png"));
  CHECK(fs::exists(m.report_path));
  CHECK(fs::exists(fs::path(m.report_path).replace_extension(".json")));

  // the pass-through method reproduces the decoded input exactly
  CHECK(read_rgb<float>(m.output_dir / "sub/c_none.png") == read_rgb<float>(fx.in / "sub/c.png"));

  // per-method means equal the mean of the rows
  for (const auto& s : rep.summaries) {
    double sum = 0;
    int n = 0;
    for (const auto& r : rep.rows) {
      if (r.method == s.method && r.ok) {
        sum += r.quality.entropy;
        ++n;
      }
    }
    CHECK(s.rows == static_cast<std::size_t>(n));
    CHECK(s.entropy == doctest::Approx(sum / n).epsilon(1e-12));
  }
  const auto a_none = std::find_if(rep.rows.begin(), rep.rows.end(),
                                   [](const ReportRow& r) { return r.file == "a.png" && r.method == Method::none; });
  REQUIRE(a_none != rep.rows.end());
  CHECK(a_none->quality.niqe.has_value());
  CHECK_FALSE(a_none->quality.enhance_millis.has_value());
}

TEST_CASE("parallel and repeated runs give identical reports") {
  const Fixture fx("repro");
  const auto serial = run_batch(fx.manifest("s", {Method::sena, Method::clahe, Method::none}, 1));
  const auto parallel = run_batch(fx.manifest("p", {Method::sena, Method::clahe, Method::none}, 3));
  const auto again = run_batch(fx.manifest("s2", {Method::sena, Method::clahe, Method::none}, 1));
  const auto a = read_text(fx.root / "report_s.csv");
  CHECK(without_timing(a) == without_timing(read_text(fx.root / "report_p.csv")));
  CHECK(without_timing(a) == without_timing(read_text(fx.root / "report_s2.csv")));
  CHECK(serial.rows.size() == 9);
  CHECK(parallel.failures() == 0);
  CHECK(again.rows.size() == 9);
}

TEST_CASE("unwritable output aborts the run") {
  const Fixture fx("abort");
  auto m = fx.manifest("x", {Method::sena}, 1);
  // a regular file where the output directory should be
  {
    std::ofstream block(fx.root / "blocked");
    block << "x";
  }
  m.output_dir = fx.root / "blocked" / "out";
  CHECK_THROWS_AS(run_batch(m), IoError);
}

TEST_CASE("latency benchmark") {
  const auto img = synthetic(64, 48, 9);
  const auto s = bench_latency(img, Method::sena, 10);
  CHECK(s.iterations == 10);
  CHECK(s.median_ms > 0.0);
  CHECK(s.p95_ms >= s.median_ms);
  CHECK(s.ms_per_megapixel == doctest::Approx(s.median_ms / (64.0 * 48 / 1e6)));
  CHECK_THROWS_AS(bench_latency(img, Method::clahe, 5), ParameterError);
  CHECK_THROWS_AS(bench_latency(fs::path("/nonexistent.png"), Method::sena, 10), IoError);
}
