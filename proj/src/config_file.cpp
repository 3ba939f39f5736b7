#include "sena/config_file.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace sena {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_real(const std::string& key, const std::string& v) {
  if (v == "inf" || v == "infinity") return std::numeric_limits<double>::infinity();
  double out = 0.0;
  const auto* end = v.data() + v.size();
  const auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end) throw ConfigError("config: '" + key + "' expects a number, got '" + v + "'");
  return out;
}

int parse_int(const std::string& key, const std::string& v) {
  int out = 0;
  const auto* end = v.data() + v.size();
  const auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end) throw ConfigError("config: '" + key + "' expects an integer, got '" + v + "'");
  return out;
}

}  // namespace

PipelineConfig parse_config(const std::string& text) {
  PipelineConfig cfg;
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
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    auto& s = cfg.sena;
    auto& c = cfg.clahe;
    if (key == "gamma") {
      s.gamma = parse_real(key, val);
    } else if (key == "y_shadow_threshold") {
      s.y_shadow_threshold = parse_real(key, val);
    } else if (key == "stretch_lo") {
      s.stretch_lo = parse_real(key, val);
    } else if (key == "stretch_hi") {
      s.stretch_hi = parse_real(key, val);
    } else if (key == "chroma_constant_c") {
      s.chroma_constant_c = parse_real(key, val);
    } else if (key == "epsilon") {
      s.epsilon = parse_real(key, val);
    } else if (key == "kernel") {
      if (val == "sobel_sum") {
        s.kernel_choice = LaplacianKernel::sobel_sum;
      } else if (val == "four_neighbor") {
        s.kernel_choice = LaplacianKernel::four_neighbor;
      } else {
        throw ConfigError("config: kernel must be sobel_sum or four_neighbor");
      }
    } else if (key == "luminance_scaling") {
      if (val == "multiply") {
        s.luminance_scaling = LuminanceScaling::multiply;
      } else if (val == "divide") {
        s.luminance_scaling = LuminanceScaling::divide;
      } else {
        throw ConfigError("config: luminance_scaling must be multiply or divide");
      }
    } else if (key == "clahe_clip_limit") {
      c.clip_limit = parse_real(key, val);
    } else if (key == "clahe_tiles_x") {
      c.tiles_x = parse_int(key, val);
    } else if (key == "clahe_tiles_y") {
      c.tiles_y = parse_int(key, val);
    } else if (key == "clahe_bins") {
      c.bins = parse_int(key, val);
    } else {
      throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  try {
    cfg.sena.validate();
    cfg.clahe.validate();
  } catch (const ParameterError& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string format_config(const PipelineConfig& cfg) {
  std::ostringstream os;
  os << std::setprecision(17);
  const auto& s = cfg.sena;
  const auto& c = cfg.clahe;
  os << "gamma = " << s.gamma << "\n"
     << "y_shadow_threshold = " << s.y_shadow_threshold << "\n"
     << "stretch_lo = " << s.stretch_lo << "\n"
     << "stretch_hi = " << s.stretch_hi << "\n"
     << "chroma_constant_c = " << s.chroma_constant_c << "\n"
     << "epsilon = " << s.epsilon << "\n"
     << "kernel = " << (s.kernel_choice == LaplacianKernel::sobel_sum ? "sobel_sum" : "four_neighbor") << "\n"
     << "luminance_scaling = "
     << (s.luminance_scaling == LuminanceScaling::multiply ? "multiply" : "divide") << "\n"
     << "clahe_clip_limit = ";
  if (std::isinf(c.clip_limit)) {
    os << "inf";
  } else {
    os << c.clip_limit;
  }
  os << "\n"
     << "clahe_tiles_x = " << c.tiles_x << "\n"
     << "clahe_tiles_y = " << c.tiles_y << "\n"
     << "clahe_bins = " << c.bins << "\n";
  return os.str();
}

}  // namespace sena
