#include "oracles.hpp"
#include "sena/config_file.hpp"
#include "sena/io.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <limits>

using namespace sena;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "sena_io_tests";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("config defaults and overrides") {
  CHECK(parse_config("") == PipelineConfig{});
  const auto c = parse_config(
      "# tuned\n gamma = 1.8\nkernel = four_neighbor  # ablation\nluminance_scaling=divide\n"
      "clahe_clip_limit = inf\nclahe_tiles_x = 4\n");
  CHECK(c.sena.gamma == 1.8);
  CHECK(c.sena.kernel_choice == LaplacianKernel::four_neighbor);
  CHECK(c.sena.luminance_scaling == LuminanceScaling::divide);
  CHECK(std::isinf(c.clahe.clip_limit));
  CHECK(c.clahe.tiles_x == 4);
  CHECK(c.clahe.tiles_y == 8);
}

TEST_CASE("config round trip") {
  PipelineConfig c;
  c.sena.gamma = 2.4;
  c.sena.y_shadow_threshold = 0.6;
  c.sena.stretch_lo = 2.0;
  c.sena.stretch_hi = 97.5;
  c.sena.chroma_constant_c = 0.75;
  c.sena.epsilon = 1e-5;
  c.sena.kernel_choice = LaplacianKernel::four_neighbor;
  c.clahe.clip_limit = std::numeric_limits<double>::infinity();
  c.clahe.bins = 128;
  CHECK(parse_config(format_config(c)) == c);
  CHECK(parse_config(format_config(PipelineConfig{})) == PipelineConfig{});
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(parse_config("gamma 2.2\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("colour = red\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("gamma = fast\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("gamma = -1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("clahe_bins = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("clahe_tiles_x = 2.5\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("kernel = sobel\n"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/sena.cfg"), ConfigError);
}

TEST_CASE("8-bit quantization") {
  CHECK(quantize8(0.0) == 0);
  CHECK(quantize8(1.0) == 255);
  CHECK(quantize8(-0.2) == 0);
  CHECK(quantize8(7.0) == 255);
  CHECK(quantize8(std::nan("")) == 0);
  CHECK(quantize8(128.0 / 255) == 128);
  CHECK(quantize8(127.5 / 255) == 128);
}

TEST_CASE("PNG round trip is lossless for 8-bit values") {
  const auto img = oracle::random_image<float>(37, 21, 12);
  const auto path = scratch("nested/dir/roundtrip.png");
  write_rgb(path, img);
  const auto back = read_rgb<float>(path);
  CHECK(back == img);
  CHECK(to_rgb8(back) == to_rgb8(img));
  const auto asd = read_rgb<double>(path);
  CHECK(asd.r(3, 4) == doctest::Approx(static_cast<double>(img.r(3, 4))).epsilon(1e-6));
}

TEST_CASE("plane and mask outputs") {
  ImagePlane<double> p(4, 2);
  p(1, 0) = 1.0;
  p(2, 1) = 0.5;
  write_plane(scratch("plane.png"), p);
  const auto back = read_rgb<double>(scratch("plane.png"));
  CHECK(back.r(1, 0) == 1.0);
  CHECK(back.g(2, 1) == 128.0 / 255);

  ShadowMask m(5, 3);
  m.bits()(1, 2) = true;
  write_mask(scratch("mask.png"), m);
  const auto mb = read_rgb<float>(scratch("mask.png"));
  CHECK(mb.r(2, 1) == 1.0f);
  CHECK(mb.r(0, 0) == 0.0f);
}

TEST_CASE("io errors") {
  CHECK_THROWS_AS(read_rgb<float>("/nonexistent/x.png"), IoError);
  const auto junk = scratch("junk.png");
  {
    std::ofstream out(junk);
    out << "not an image";
  }
  CHECK_THROWS_AS(read_rgb<float>(junk), IoError);
  CHECK_THROWS_AS(write_rgb(fs::path("/proc/sena_cannot_write/x.png"), RgbImage<float>(2, 2)), IoError);
  CHECK(is_image_path("a/b.PNG"));
  CHECK(is_image_path("x.jpeg"));
  CHECK_FALSE(is_image_path("x.txt"));
}
