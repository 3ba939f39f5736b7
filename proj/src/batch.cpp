#include "sena/batch.hpp"

#include "sena/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

namespace sena {

namespace fs = std::filesystem;

std::string_view method_name(Method m) {
  switch (m) {
    case Method::none: return "none";
    case Method::sena: return "sena";
    case Method::clahe: return "clahe";
  }
  return "none";
}

Method parse_method(std::string_view name) {
  if (name == "none") return Method::none;
  if (name == "sena") return Method::sena;
  if (name == "clahe") return Method::clahe;
  throw ConfigError("unknown method '" + std::string(name) + "' (expected none, sena or clahe)");
}

void RunManifest::validate() const {
  if (methods.empty()) throw ConfigError("manifest: methods must not be empty");
  for (std::size_t i = 0; i < methods.size(); ++i) {
    for (std::size_t j = i + 1; j < methods.size(); ++j) {
      if (methods[i] == methods[j]) throw ConfigError("manifest: duplicate method");
    }
  }
  if (worker_count < 1) throw ConfigError("manifest: workers must be positive");
  if (input_dir.empty() || !fs::is_directory(input_dir)) {
    throw ConfigError("manifest: input_dir '" + input_dir.string() + "' is not a directory");
  }
  if (output_dir.empty()) throw ConfigError("manifest: output_dir is required");
  if (report_path.empty()) throw ConfigError("manifest: report is required");
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::optional<int> parse_positive(std::string_view v) {
  int out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size() || out < 1) return std::nullopt;
  return out;
}

std::vector<Method> parse_methods(const std::string& list) {
  std::vector<Method> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(parse_method(item));
  }
  return out;
}

}  // namespace

RunManifest parse_manifest(const std::string& text, const fs::path& base_dir) {
  RunManifest m;
  auto resolve = [&](const std::string& v) { return fs::path(v).is_absolute() ? fs::path(v) : base_dir / v; };
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("manifest line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string val = trim(std::string_view(line).substr(eq + 1));
    if (key == "input_dir") {
      m.input_dir = resolve(val);
    } else if (key == "output_dir") {
      m.output_dir = resolve(val);
    } else if (key == "methods") {
      m.methods = parse_methods(val);
    } else if (key == "config") {
      m.config_path = resolve(val);
    } else if (key == "report") {
      m.report_path = resolve(val);
    } else if (key == "workers") {
      const auto n = parse_positive(val);
      if (!n) throw ConfigError("manifest: workers must be a positive integer");
      m.worker_count = *n;
    } else if (key == "niqe_model") {
      m.niqe_model = resolve(val);
    } else {
      throw ConfigError("manifest line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  return m;
}

RunManifest load_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open manifest " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_manifest(ss.str(), path.parent_path());
}

int effective_worker_count(int requested) {
  if (const char* env = std::getenv(kWorkersEnv); env != nullptr) {
    if (const auto n = parse_positive(env)) return *n;
  }
  return requested;
}

std::vector<fs::path> list_images(const fs::path& dir) {
  std::vector<fs::path> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file() && is_image_path(e.path())) out.push_back(e.path().lexically_relative(dir));
  }
  std::sort(out.begin(), out.end());
  return out;
}

fs::path output_relative_path(const fs::path& rel, Method m) {
  return rel.parent_path() / (rel.stem().string() + "_" + std::string(method_name(m)) + ".png");
}

std::size_t AggregateReport::failures() const {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const ReportRow& r) { return !r.ok; }));
}

const std::vector<std::string>& report_metrics() {
  static const std::vector<std::string> names{"brisque", "niqe", "piqe", "mean_brightness", "std_dev", "entropy"};
  return names;
}

namespace {

std::optional<double> metric_of(const QualityReport& q, const std::string& name) {
  if (name == "brisque") return q.brisque;
  if (name == "niqe") return q.niqe;
  if (name == "piqe") return q.piqe;
  if (name == "mean_brightness") return q.mean_brightness;
  if (name == "std_dev") return q.std_dev;
  if (name == "entropy") return q.entropy;
  return std::nullopt;
}

std::optional<double> mean_of(const std::vector<double>& v) {
  if (v.empty()) return std::nullopt;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

double sample_percentile(std::vector<double> v, double percent) {
  if (v.empty()) throw ParameterError("percentile of an empty sample");
  std::sort(v.begin(), v.end());
  const auto n = static_cast<double>(v.size());
  const auto rank = std::clamp(static_cast<std::size_t>(std::ceil(percent / 100.0 * n)), std::size_t{1}, v.size());
  return v[rank - 1];
}

AggregateReport aggregate(std::vector<ReportRow> rows, const std::vector<Method>& methods) {
  std::sort(rows.begin(), rows.end(), [](const ReportRow& a, const ReportRow& b) {
    if (a.file != b.file) return a.file < b.file;
    return method_name(a.method) < method_name(b.method);
  });
  AggregateReport rep;
  rep.rows = std::move(rows);

  for (Method m : methods) {
    MethodSummary s;
    s.method = m;
    std::vector<double> brisque, niqe, piqe, bright, sd, ent, ms;
    for (const auto& r : rep.rows) {
      if (r.method != m || !r.ok) continue;
      ++s.rows;
      if (r.quality.brisque) brisque.push_back(*r.quality.brisque);
      if (r.quality.niqe) niqe.push_back(*r.quality.niqe);
      piqe.push_back(r.quality.piqe);
      bright.push_back(r.quality.mean_brightness);
      sd.push_back(r.quality.std_dev);
      ent.push_back(r.quality.entropy);
      if (r.quality.enhance_millis) ms.push_back(*r.quality.enhance_millis);
    }
    s.brisque = mean_of(brisque);
    s.niqe = mean_of(niqe);
    s.piqe = mean_of(piqe).value_or(0.0);
    s.mean_brightness = mean_of(bright).value_or(0.0);
    s.std_dev = mean_of(sd).value_or(0.0);
    s.entropy = mean_of(ent).value_or(0.0);
    if (!ms.empty()) {
      s.median_ms = sample_percentile(ms, 50.0);
      s.p95_ms = sample_percentile(ms, 95.0);
    }
    rep.summaries.push_back(s);
  }

  for (std::size_t i = 0; i < methods.size(); ++i) {
    for (std::size_t j = i + 1; j < methods.size(); ++j) {
      for (const auto& metric : report_metrics()) {
        PairwiseTest t;
        t.metric = metric;
        t.a = methods[i];
        t.b = methods[j];
        // pair rows of the same file where both methods produced the metric
        std::vector<double> xa, xb;
        for (const auto& ra : rep.rows) {
          if (ra.method != t.a || !ra.ok) continue;
          const auto va = metric_of(ra.quality, metric);
          if (!va) continue;
          for (const auto& rb : rep.rows) {
            if (rb.file != ra.file || rb.method != t.b || !rb.ok) continue;
            if (const auto vb = metric_of(rb.quality, metric)) {
              xa.push_back(*va);
              xb.push_back(*vb);
            }
          }
        }
        try {
          t.result = wilcoxon_signed_rank(xa, xb);
        } catch (const InsufficientDataError& e) {
          t.error = e.what();
        }
        rep.tests.push_back(std::move(t));
      }
    }
  }
  return rep;
}

namespace {

std::string fixed4(std::optional<double> v) {
  if (!v) return {};
  std::ostringstream os;
  os << std::fixed << std::setprecision(4) << *v;
  return os.str();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

nlohmann::json opt_json(std::optional<double> v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); }

}  // namespace

std::string format_csv(const AggregateReport& report) {
  std::ostringstream os;
  os << "file,method,status,brisque,niqe,piqe,piqe_degenerate,mean_brightness,std_dev,entropy,enhance_ms\n";
  for (const auto& r : report.rows) {
    os << csv_field(r.file) << ',' << method_name(r.method) << ',' << (r.ok ? "ok" : "error");
    if (r.ok) {
      const auto& q = r.quality;
      os << ',' << fixed4(q.brisque) << ',' << fixed4(q.niqe) << ',' << fixed4(q.piqe) << ','
         << (q.piqe_degenerate ? 1 : 0) << ',' << fixed4(q.mean_brightness) << ',' << fixed4(q.std_dev)
         << ',' << fixed4(q.entropy) << ',' << fixed4(q.enhance_millis);
    } else {
      os << ",,,,,,,,";
    }
    os << '\n';
  }
  return os.str();
}

std::string format_json(const AggregateReport& report) {
  using nlohmann::json;
  json rows = json::array();
  for (const auto& r : report.rows) {
    json j{{"file", r.file}, {"method", method_name(r.method)}, {"ok", r.ok}};
    if (r.ok) {
      const auto& q = r.quality;
      j["metrics"] = {{"brisque", opt_json(q.brisque)},
                      {"niqe", opt_json(q.niqe)},
                      {"piqe", q.piqe},
                      {"piqe_degenerate", q.piqe_degenerate},
                      {"mean_brightness", q.mean_brightness},
                      {"std_dev", q.std_dev},
                      {"entropy", q.entropy}};
      j["enhance_ms"] = opt_json(q.enhance_millis);
    } else {
      j["error"] = r.error;
    }
    rows.push_back(std::move(j));
  }
  json summaries = json::array();
  for (const auto& s : report.summaries) {
    summaries.push_back({{"method", method_name(s.method)},
                         {"rows", s.rows},
                         {"means",
                          {{"brisque", opt_json(s.brisque)},
                           {"niqe", opt_json(s.niqe)},
                           {"piqe", s.piqe},
                           {"mean_brightness", s.mean_brightness},
                           {"std_dev", s.std_dev},
                           {"entropy", s.entropy}}},
                         {"timing_ms", {{"median", opt_json(s.median_ms)}, {"p95", opt_json(s.p95_ms)}}}});
  }
  json tests = json::array();
  for (const auto& t : report.tests) {
    json j{{"metric", t.metric}, {"a", method_name(t.a)}, {"b", method_name(t.b)}};
    if (t.result) {
      j["statistic"] = t.result->statistic;
      j["p_two_sided"] = t.result->p_two_sided;
      j["n"] = t.result->n;
      j["exact"] = t.result->exact;
    } else {
      j["error"] = t.error;
    }
    tests.push_back(std::move(j));
  }
  return json{{"rows", rows}, {"summaries", summaries}, {"wilcoxon", tests}, {"failures", report.failures()}}
             .dump(2) +
         "\n";
}

void write_reports(const AggregateReport& report, const fs::path& csv_path) {
  auto write = [](const fs::path& p, const std::string& text) {
    std::error_code ec;
    if (p.has_parent_path()) fs::create_directories(p.parent_path(), ec);
    std::ofstream out(p, std::ios::binary);
    out << text;
    if (!out) throw IoError("cannot write report " + p.string());
  };
  write(csv_path, format_csv(report));
  auto json_path = csv_path;
  json_path.replace_extension(".json");
  write(json_path, format_json(report));
}

RgbImage<float> apply_method(const RgbImage<float>& img, Method method, const PipelineConfig& cfg) {
  switch (method) {
    case Method::sena: return sena_enhance(img, cfg.sena);
    case Method::clahe: return clahe_rgb(img, cfg.clahe);
    case Method::none: break;
  }
  return img;
}

AggregateReport run_batch(const RunManifest& manifest) {
  manifest.validate();
  const PipelineConfig cfg = manifest.config_path ? load_config(*manifest.config_path) : PipelineConfig{};
  std::optional<NssModel> niqe_model;
  if (manifest.niqe_model) niqe_model = NssModel::load(*manifest.niqe_model);
  QualityModels models;
  if (niqe_model) models.niqe = &*niqe_model;

  const auto images = list_images(manifest.input_dir);
  if (images.empty()) throw ConfigError("no images under " + manifest.input_dir.string());

  std::error_code ec;
  fs::create_directories(manifest.output_dir, ec);
  if (!fs::is_directory(manifest.output_dir)) {
    throw IoError("cannot create output directory " + manifest.output_dir.string());
  }

  const auto& methods = manifest.methods;
  std::vector<ReportRow> rows(images.size() * methods.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> abort{false};
  std::exception_ptr fatal;
  std::mutex fatal_mutex;

  // each worker owns one image at a time, end to end, and only touches the
  // rows of that image
  auto worker = [&] {
    while (!abort.load()) {
      const std::size_t i = next.fetch_add(1);
      if (i >= images.size()) return;
      const auto& rel = images[i];
      std::optional<RgbImage<float>> input;
      std::string read_error;
      try {
        input = read_rgb<float>(manifest.input_dir / rel);
      } catch (const std::exception& e) {
        read_error = e.what();
      }
      for (std::size_t k = 0; k < methods.size(); ++k) {
        auto& row = rows[i * methods.size() + k];
        row.file = rel.generic_string();
        row.method = methods[k];
        if (!input) {
          row.error = read_error;
          continue;
        }
        const auto out_path = manifest.output_dir / output_relative_path(rel, methods[k]);
        try {
          const auto t0 = std::chrono::steady_clock::now();
          const auto out = apply_method(*input, methods[k], cfg);
          const auto t1 = std::chrono::steady_clock::now();
          write_rgb(out_path, out);
          row.quality = evaluate_quality(read_rgb<double>(out_path), models);
          if (methods[k] != Method::none) {
            row.quality.enhance_millis = std::chrono::duration<double, std::milli>(t1 - t0).count();
          }
          row.ok = true;
        } catch (const IoError& e) {
          if (!fs::exists(out_path)) {
            const std::lock_guard lock(fatal_mutex);
            if (!fatal) fatal = std::current_exception();
            abort = true;
            return;
          }
          row.error = e.what();
        } catch (const std::exception& e) {
          row.error = e.what();
        }
      }
    }
  };

  const int workers = std::clamp<int>(effective_worker_count(manifest.worker_count), 1,
                                      static_cast<int>(images.size()));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (fatal) std::rethrow_exception(fatal);

  auto report = aggregate(std::move(rows), methods);
  write_reports(report, manifest.report_path);
  return report;
}

LatencyStats bench_latency(const RgbImage<float>& img, Method method, int iterations, const PipelineConfig& cfg) {
  if (iterations < 10) throw ParameterError("bench needs at least 10 iterations");
  const int warmup = std::max(2, iterations / 10);
  for (int i = 0; i < warmup; ++i) (void)apply_method(img, method, cfg);
  std::vector<double> ms;
  ms.reserve(static_cast<std::size_t>(iterations));
  for (int i = 0; i < iterations; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto out = apply_method(img, method, cfg);
    const auto t1 = std::chrono::steady_clock::now();
    ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  LatencyStats s;
  s.iterations = iterations;
  s.width = img.width();
  s.height = img.height();
  s.median_ms = sample_percentile(ms, 50.0);
  s.p95_ms = sample_percentile(ms, 95.0);
  s.mean_ms = *mean_of(ms);
  s.ms_per_megapixel = s.median_ms / (static_cast<double>(img.width() * img.height()) / 1e6);
  return s;
}

LatencyStats bench_latency(const fs::path& image, Method method, int iterations, const PipelineConfig& cfg) {
  return bench_latency(read_rgb<float>(image), method, iterations, cfg);
}

}  // namespace sena
