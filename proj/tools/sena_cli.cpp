// Command-line front end: enhance, batch, metrics, fit-niqe-model, bench.
#include "sena/batch.hpp"
#include "sena/io.hpp"

#include <CLI11.hpp>

#include <cstdio>

#if defined(__GLIBC__)
#include <malloc.h>
#endif
#include <sstream>

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPartial = 1;
constexpr int kExitUsage = 2;

sena::PipelineConfig config_or_default(const std::string& path) {
  return path.empty() ? sena::PipelineConfig{} : sena::load_config(path);
}

fs::path sibling(const fs::path& out, const std::string& suffix) {
  return out.parent_path() / (out.stem().string() + suffix);
}

int cmd_enhance(const std::string& in, const std::string& out, const std::string& method_name,
                const std::string& config, bool dump) {
  const auto method = sena::parse_method(method_name);
  const auto cfg = config_or_default(config);
  const auto img = sena::read_rgb<float>(in);
  if (method == sena::Method::sena && dump) {
    const auto trace = sena::sena_enhance_traced(img, cfg.sena);
    sena::write_rgb(out, trace.output);
    const fs::path o(out);
    sena::write_mask(sibling(o, "_mask.png"), trace.mask);
    sena::write_plane(sibling(o, "_mc.png"), trace.m_c);
    sena::write_plane(sibling(o, "_laplacian.png"), trace.laplacian_stretched);
    return kExitOk;
  }
  sena::write_rgb(out, sena::apply_method(img, method, cfg));
  return kExitOk;
}

void print_metric(const char* name, std::optional<double> v) {
  if (v) {
    std::printf("%-16s %.4f\n", name, *v);
  } else {
    std::printf("%-16s n/a\n", name);
  }
}

int cmd_metrics(const std::string& in, const std::string& model_path) {
  std::optional<sena::NssModel> model;
  if (!model_path.empty()) model = sena::NssModel::load(model_path);
  sena::QualityModels models;
  if (model) models.niqe = &*model;
  const auto q = sena::evaluate_quality(sena::read_rgb<double>(in), models);
  print_metric("brisque", q.brisque);
  print_metric("niqe", q.niqe);
  print_metric("piqe", q.piqe);
  std::printf("%-16s %d\n", "piqe_degenerate", q.piqe_degenerate ? 1 : 0);
  print_metric("mean_brightness", q.mean_brightness);
  print_metric("std_dev", q.std_dev);
  print_metric("entropy", q.entropy);
  return kExitOk;
}

int cmd_fit(const std::string& dir, const std::string& out) {
  std::vector<sena::LumaArray> images;
  for (const auto& rel : sena::list_images(dir)) {
    images.push_back(sena::luma_of(sena::read_rgb<double>(fs::path(dir) / rel)));
  }
  if (images.empty()) throw sena::ConfigError("no images under " + dir);
  sena::fit_niqe_model(images).save(out);
  std::printf("fitted NIQE model from %zu images -> %s\n", images.size(), out.c_str());
  return kExitOk;
}

int cmd_bench(const std::string& image, const std::string& method_name, int iterations,
              const std::string& config) {
  const auto s = sena::bench_latency(fs::path(image), sena::parse_method(method_name), iterations,
                                     config_or_default(config));
  std::printf("image        %lldx%lld\n", static_cast<long long>(s.width), static_cast<long long>(s.height));
  std::printf("method       %s\n", method_name.c_str());
  std::printf("iterations   %d\n", s.iterations);
  std::printf("median_ms    %.3f\n", s.median_ms);
  std::printf("p95_ms       %.3f\n", s.p95_ms);
  std::printf("mean_ms      %.3f\n", s.mean_ms);
  std::printf("ms_per_mpix  %.3f\n", s.ms_per_megapixel);
  return kExitOk;
}

int cmd_batch(sena::RunManifest m) {
  const auto rep = sena::run_batch(m);
  for (const auto& s : rep.summaries) {
    std::printf("%-6s rows=%zu piqe=%.4f brightness=%.4f entropy=%.4f", std::string(sena::method_name(s.method)).c_str(),
                s.rows, s.piqe, s.mean_brightness, s.entropy);
    if (s.median_ms) std::printf(" median_ms=%.3f p95_ms=%.3f", *s.median_ms, *s.p95_ms);
    std::printf("\n");
  }
  const auto failed = rep.failures();
  for (const auto& r : rep.rows) {
    if (!r.ok) std::fprintf(stderr, "error: %s [%s]: %s\n", r.file.c_str(), std::string(sena::method_name(r.method)).c_str(), r.error.c_str());
  }
  std::printf("%zu rows, %zu failed; report %s\n", rep.rows.size(), failed, m.report_path.string().c_str());
  return failed == 0 ? kExitOk : kExitPartial;
}

}  // namespace

int main(int argc, char** argv) {
#if defined(__GLIBC__)
  // image planes are ~1 MB; keep freed ones in the heap instead of unmapping
  // and faulting them back in on every frame
  mallopt(M_MMAP_THRESHOLD, 256 << 20);
  mallopt(M_TRIM_THRESHOLD, 512 << 20);
#endif
  CLI::App app{"SENA image enhancement, CLAHE baseline and no-reference quality metrics"};
  app.require_subcommand(1);

  std::string in, out, method = "sena", config, model;
  bool dump = false;
  auto* enhance = app.add_subcommand("enhance", "Enhance one image");
  enhance->add_option("input", in, "Input image")->required();
  enhance->add_option("output", out, "Output PNG")->required();
  enhance->add_option("--method", method, "sena or clahe")->check(CLI::IsMember({"sena", "clahe"}));
  enhance->add_option("--config", config, "key = value config file");
  enhance->add_flag("--dump-intermediates", dump, "Also write <out>_mask.png, <out>_mc.png and <out>_laplacian.png");

  std::string manifest_path, input_dir, output_dir, methods = "sena", report;
  int workers = 1;
  auto* batch = app.add_subcommand("batch", "Enhance and score a directory of images");
  batch->add_option("--manifest", manifest_path, "Manifest file (key = value)");
  batch->add_option("--input", input_dir, "Input directory");
  batch->add_option("--output", output_dir, "Output directory");
  batch->add_option("--methods", methods, "Comma-separated subset of none,sena,clahe");
  batch->add_option("--config", config, "key = value config file");
  batch->add_option("--report", report, "CSV report path (JSON written alongside)");
  batch->add_option("--workers", workers, "Worker threads (overridden by SENA_WORKERS)")->check(CLI::PositiveNumber);
  batch->add_option("--niqe-model", model, "NIQE model file");

  auto* metrics = app.add_subcommand("metrics", "No-reference quality metrics of one image");
  metrics->add_option("input", in, "Image")->required();
  metrics->add_option("--niqe-model", model, "NIQE model file");

  std::string fit_dir;
  auto* fit = app.add_subcommand("fit-niqe-model", "Fit a NIQE model from pristine images");
  fit->add_option("dir", fit_dir, "Directory of pristine images")->required();
  fit->add_option("-o,--output", out, "Model file")->required();

  int iterations = 100;
  auto* bench = app.add_subcommand("bench", "Time the enhancement step");
  bench->add_option("image", in, "Image")->required();
  bench->add_option("--method", method, "sena or clahe")->check(CLI::IsMember({"sena", "clahe"}));
  bench->add_option("-n,--iterations", iterations, "Timed iterations (>= 10)");
  bench->add_option("--config", config, "key = value config file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*enhance) return cmd_enhance(in, out, method, config, dump);
    if (*metrics) return cmd_metrics(in, model);
    if (*fit) return cmd_fit(fit_dir, out);
    if (*bench) return cmd_bench(in, method, iterations, config);
    if (*batch) {
      sena::RunManifest m;
      if (!manifest_path.empty()) {
        m = sena::load_manifest(manifest_path);
      } else {
        m.input_dir = input_dir;
        m.output_dir = output_dir;
        m.report_path = report;
        if (!config.empty()) m.config_path = config;
      }
      if (batch->count("--methods") > 0 || manifest_path.empty()) {
        m.methods.clear();
        std::string item;
        std::stringstream ss(methods);
        while (std::getline(ss, item, ',')) m.methods.push_back(sena::parse_method(item));
      }
      if (batch->count("--workers") > 0) m.worker_count = workers;
      if (!model.empty()) m.niqe_model = model;
      return cmd_batch(m);
    }
  } catch (const sena::ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const sena::ParameterError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitPartial;
  }
  return kExitUsage;
}
