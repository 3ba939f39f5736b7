#include "oracles.hpp"
#include "sena/color.hpp"

#include <doctest.h>

using namespace sena;

namespace {

RgbImage<double> pixel(double r, double g, double b) {
  return {ImagePlane<double>(1, 1, r), ImagePlane<double>(1, 1, g), ImagePlane<double>(1, 1, b)};
}

}  // namespace

TEST_CASE("image containers validate shape") {
  CHECK_THROWS_AS(ImagePlane<float>(0, 3), ParameterError);
  CHECK_THROWS_AS(RgbImage<float>(ImagePlane<float>(2, 2), ImagePlane<float>(2, 3), ImagePlane<float>(2, 2)),
                  ParameterError);
  ImagePlane<float> p(3, 2, 0.25f);
  p(2, 1) = 1.0f;
  CHECK(p.width() == 3);
  CHECK(p.height() == 2);
  CHECK(p.array()(1, 2) == 1.0f);
  CHECK(p.cast<double>()(2, 1) == 1.0);
}

TEST_CASE("gamma fixed points and the 128/255 value") {
  const auto img = pixel(0.0, 1.0, 128.0 / 255.0);
  const auto d = gamma_decompress(img, 2.2);
  CHECK(d.r(0, 0) == 0.0);
  CHECK(d.g(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(d.b(0, 0) == doctest::Approx(std::pow(128.0 / 255.0, 2.2)).epsilon(1e-12));
  CHECK(d.b(0, 0) == doctest::Approx(0.2195).epsilon(1e-3));
  const auto c = gamma_compress(pixel(0.0, 1.0, d.b(0, 0)), 2.2);
  CHECK(c.b(0, 0) == doctest::Approx(128.0 / 255.0).epsilon(1e-12));
  CHECK(gamma_decompress(img, 1.0) == img);
  CHECK_THROWS_AS(gamma_decompress(img, 0.0), ParameterError);
  CHECK_THROWS_AS(gamma_compress(img, -1.0), ParameterError);
}

TEST_CASE("gamma round trip stays within 1/255") {
  for (double g : {1.0, 1.8, 2.2, 3.0}) {
    const auto img = oracle::random_image<float>(31, 17, 5);
    const auto rt = gamma_compress(gamma_decompress(img, g), g);
    CHECK((rt.r.array() - img.r.array()).abs().maxCoeff() <= 1.0f / 255);
    CHECK((rt.b.array() - img.b.array()).abs().maxCoeff() <= 1.0f / 255);
  }
}

TEST_CASE("normalize_minmax") {
  ImagePlane<double> p(3, 1);
  p(0, 0) = 0.2;
  p(1, 0) = 0.4;
  p(2, 0) = 0.6;
  const auto n = normalize_minmax(p);
  CHECK(n(0, 0) == 0.0);
  CHECK(n(1, 0) == doctest::Approx(0.5));
  CHECK(n(2, 0) == 1.0);
  CHECK(normalize_minmax(n) == n);
  CHECK(normalize_minmax(ImagePlane<double>(4, 4, 0.7)) == ImagePlane<double>(4, 4, 0.0));
  CHECK_THROWS_AS(normalize_minmax(p, 1.0, 1.0), ParameterError);

  const auto r = oracle::random_image<double>(20, 20, 9).r;
  const auto nr = normalize_minmax(r, -2.0, 3.0);
  CHECK(nr.array().minCoeff() == -2.0);
  CHECK(nr.array().maxCoeff() == 3.0);
  for (Index i = 0; i + 1 < r.size(); ++i) {
    const auto* a = r.array().data();
    const auto* b = nr.array().data();
    if (a[i] <= a[i + 1]) CHECK(b[i] <= b[i + 1]);
  }
}

TEST_CASE("BT.601 reference colors") {
  const auto black = rgb_to_ycbcr(pixel(0, 0, 0));
  CHECK(black.y(0, 0) == 0.0);
  CHECK(black.cb(0, 0) == doctest::Approx(0.5));
  CHECK(black.cr(0, 0) == doctest::Approx(0.5));
  const auto white = rgb_to_ycbcr(pixel(1, 1, 1));
  CHECK(white.y(0, 0) == doctest::Approx(1.0));
  CHECK(white.cb(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(white.cr(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
  const auto red = rgb_to_ycbcr(pixel(1, 0, 0));
  CHECK(red.y(0, 0) == doctest::Approx(0.299));
  // 0.5 - 0.5 * 0.299 / (1 - 0.114)
  CHECK(red.cb(0, 0) == doctest::Approx(0.5 - 0.5 * 0.299 / 0.886).epsilon(1e-12));
  CHECK(red.cb(0, 0) == doctest::Approx(0.3312).epsilon(1e-4));
  CHECK(red.cr(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("YCbCr round trip on a 17^3 lattice") {
  const int n = 17;
  RgbImage<double> img(n * n, n);
  for (int r = 0; r < n; ++r) {
    for (int g = 0; g < n; ++g) {
      for (int b = 0; b < n; ++b) {
        img.r(r * n + g, b) = r / 16.0;
        img.g(r * n + g, b) = g / 16.0;
        img.b(r * n + g, b) = b / 16.0;
      }
    }
  }
  const auto rt = ycbcr_to_rgb(rgb_to_ycbcr(img));
  const double worst = std::max({(rt.r.array() - img.r.array()).abs().maxCoeff(), (rt.g.array() - img.g.array()).abs().maxCoeff(),
                    (rt.b.array() - img.b.array()).abs().maxCoeff()});
  CHECK(worst <= 2.0 / 255);
}

TEST_CASE("achromatic inputs have neutral chroma") {
  for (double v : {0.0, 0.1, 0.5, 0.93, 1.0}) {
    const auto img = pixel(v, v, v);
    const auto ycc = rgb_to_ycbcr(img);
    CHECK(std::abs(ycc.cb(0, 0) - 0.5) <= 1.0 / 255);
    CHECK(std::abs(ycc.cr(0, 0) - 0.5) <= 1.0 / 255);
    CHECK(std::abs(rgb_to_lab_a(img)(0, 0) - 128.0 / 255) <= 1.0 / 255);
    CHECK(rgb_value_channel(img)(0, 0) == v);
  }
}

TEST_CASE("value channel is the channel maximum") {
  CHECK(rgb_value_channel(pixel(0.2, 0.8, 0.4))(0, 0) == 0.8);
  CHECK(rgb_value_channel(RgbImage<float>(4, 3)).array().maxCoeff() == 0.0f);
}

TEST_CASE("CIELAB a* against a textbook per-pixel conversion") {
  const double green = oracle::lab_a_star(0, 1, 0);
  CHECK(green == doctest::Approx(-86.18).epsilon(1e-3));
  CHECK(rgb_to_lab_a(pixel(0, 1, 0))(0, 0) == doctest::Approx((green + 128) / 255).epsilon(1e-9));
  CHECK(rgb_to_lab_a(pixel(0, 1, 0))(0, 0) == doctest::Approx(0.164).epsilon(1e-2));

  const auto img = oracle::random_image<double>(64, 48, 3);
  const auto a = rgb_to_lab_a(img);
  const auto af = rgb_to_lab_a(img.cast<float>());
  double worst = 0, worst_f = 0;
  for (Index y = 0; y < img.height(); ++y) {
    for (Index x = 0; x < img.width(); ++x) {
      const double ref =
          std::clamp((oracle::lab_a_star(img.r(x, y), img.g(x, y), img.b(x, y)) + 128) / 255, 0.0, 1.0);
      worst = std::max(worst, std::abs(a(x, y) - ref));
      worst_f = std::max(worst_f, std::abs(static_cast<double>(af(x, y)) - ref));
    }
  }
  CHECK(worst < 1e-10);
  CHECK(worst_f < 1e-4);
}

TEST_CASE("conversions keep planes finite and in range on random input") {
  const auto img = oracle::random_image<float>(33, 21, 77);
  const auto ycc = rgb_to_ycbcr(img);
  for (const auto* p : {&ycc.y, &ycc.cb, &ycc.cr}) {
    CHECK(p->array().isFinite().all());
    CHECK(p->array().minCoeff() >= 0.0f);
    CHECK(p->array().maxCoeff() <= 1.0f);
  }
  const auto a = rgb_to_lab_a(img);
  CHECK(a.array().minCoeff() >= 0.0f);
  CHECK(a.array().maxCoeff() <= 1.0f);
}
