// Dataset runs: enhance every image under a directory with each requested
// method, score the written outputs and aggregate the scores per method.
#pragma once

#include "sena/config_file.hpp"
#include "sena/iqa.hpp"
#include "sena/wilcoxon.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sena {

enum class Method { none, sena, clahe };

std::string_view method_name(Method m);
/// Throws ConfigError for anything but none / sena / clahe.
Method parse_method(std::string_view name);

/// Environment variable that overrides RunManifest::worker_count.
inline constexpr const char* kWorkersEnv = "SENA_WORKERS";

struct RunManifest {
  std::filesystem::path input_dir;
  std::filesystem::path output_dir;
  std::vector<Method> methods{Method::sena};
  std::optional<std::filesystem::path> config_path;
  /// CSV path; the JSON report goes next to it with a .json extension.
  std::filesystem::path report_path;
  int worker_count = 1;
  std::optional<std::filesystem::path> niqe_model;

  void validate() const;
};

/// key = value lines (input_dir, output_dir, methods, config, report,
/// workers, niqe_model). Relative paths resolve against `base_dir`.
RunManifest parse_manifest(const std::string& text, const std::filesystem::path& base_dir);
RunManifest load_manifest(const std::filesystem::path& path);

/// `requested`, unless SENA_WORKERS holds a positive integer.
int effective_worker_count(int requested);

/// Images under `dir` (recursively), as sorted relative paths.
std::vector<std::filesystem::path> list_images(const std::filesystem::path& dir);

/// `<rel_dir>/<stem>_<method>.png`
std::filesystem::path output_relative_path(const std::filesystem::path& rel, Method m);

struct ReportRow {
  std::string file;  ///< input path relative to input_dir, '/'-separated
  Method method = Method::none;
  bool ok = false;
  std::string error;
  QualityReport quality;
};

struct MethodSummary {
  Method method = Method::none;
  std::size_t rows = 0;  ///< successful rows the means are taken over
  std::optional<double> brisque;
  std::optional<double> niqe;
  double piqe = 0.0;
  double mean_brightness = 0.0;
  double std_dev = 0.0;
  double entropy = 0.0;
  std::optional<double> median_ms;
  std::optional<double> p95_ms;
};

struct PairwiseTest {
  std::string metric;
  Method a = Method::none;
  Method b = Method::none;
  std::optional<WilcoxonResult> result;
  std::string error;  ///< set when result is empty
};

struct AggregateReport {
  std::vector<ReportRow> rows;  ///< sorted by (file, method name)
  std::vector<MethodSummary> summaries;
  std::vector<PairwiseTest> tests;

  std::size_t failures() const;
};

/// Metric names in report column order.
const std::vector<std::string>& report_metrics();

/// Sorts rows and fills in summaries and pairwise tests for `methods`.
AggregateReport aggregate(std::vector<ReportRow> rows, const std::vector<Method>& methods);

/// file,method,status,brisque,niqe,piqe,piqe_degenerate,mean_brightness,
/// std_dev,entropy,enhance_ms with 4 decimals; missing values are empty.
std::string format_csv(const AggregateReport& report);
std::string format_json(const AggregateReport& report);

/// Writes both report files. Throws IoError.
void write_reports(const AggregateReport& report, const std::filesystem::path& csv_path);

/// Per-image failures end up in rows; an output that cannot be written
/// throws IoError once the workers have stopped.
AggregateReport run_batch(const RunManifest& manifest);

struct LatencyStats {
  int iterations = 0;
  Index width = 0;
  Index height = 0;
  double median_ms = 0.0;
  double p95_ms = 0.0;
  double mean_ms = 0.0;
  double ms_per_megapixel = 0.0;  ///< median / megapixels
};

/// Times `method` on an already decoded image, after a short warm-up.
LatencyStats bench_latency(const RgbImage<float>& img, Method method, int iterations,
                           const PipelineConfig& cfg = {});
/// Decodes `image` (excluded from timing) and benchmarks it.
LatencyStats bench_latency(const std::filesystem::path& image, Method method, int iterations,
                           const PipelineConfig& cfg = {});

/// Applies one method to an image; `none` returns the input.
RgbImage<float> apply_method(const RgbImage<float>& img, Method method, const PipelineConfig& cfg);

/// Nearest-rank percentile of a non-empty sample.
double sample_percentile(std::vector<double> v, double percent);

}  // namespace sena
