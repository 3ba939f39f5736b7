// Human-editable `key = value` configuration covering SenaConfig and
// ClaheConfig. Every key is optional; '#' starts a comment.
//
//   gamma               positive real            (2.2)
//   y_shadow_threshold  unit-interval real       (165/255)
//   stretch_lo          percentile               (1.25)
//   stretch_hi          percentile               (98.75)
//   chroma_constant_c   real                     (1.0)
//   epsilon             positive real            (1e-6)
//   kernel              sobel_sum | four_neighbor
//   luminance_scaling   multiply | divide
//   clahe_clip_limit    positive real or inf     (2.0)
//   clahe_tiles_x       positive integer         (8)
//   clahe_tiles_y       positive integer         (8)
//   clahe_bins          integer >= 2             (256)
#pragma once

#include "sena/clahe.hpp"
#include "sena/correction.hpp"

#include <filesystem>
#include <string>

namespace sena {

struct PipelineConfig {
  SenaConfig sena;
  ClaheConfig clahe;

  bool operator==(const PipelineConfig&) const = default;
};

/// Throws ConfigError on unknown keys, malformed values or invalid ranges.
PipelineConfig parse_config(const std::string& text);
PipelineConfig load_config(const std::filesystem::path& path);
std::string format_config(const PipelineConfig& cfg);

}  // namespace sena
