#include <doctest.h>

#include <cmath>
#include <random>

#include "rriqa/color.hpp"
#include "rriqa/error.hpp"
#include "rriqa/image_io.hpp"

using namespace rriqa;

namespace {

ColorImage pixel(double r, double g, double b) {
  ColorImage img(1, 1);
  img.planes[0][0] = r;
  img.planes[1][0] = g;
  img.planes[2][0] = b;
  return img;
}

ColorImage random_rgb(int w, int h, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ColorImage img(w, h);
  for (Plane& p : img.planes) {
    for (double& v : p.values()) v = u(rng);
  }
  return img;
}

// sRGB gray level -> CIE L*, straight from the textbook definitions.
double gray_lightness(double v) {
  const double lin = v <= 0.04045 ? v / 12.92 : std::pow((v + 0.055) / 1.055, 2.4);
  const double t = lin;  // Y / Yn for a neutral color
  const double f = t > std::pow(6.0 / 29.0, 3) ? std::cbrt(t) : t / (3 * std::pow(6.0 / 29.0, 2)) + 4.0 / 29.0;
  return 116.0 * f - 16.0;
}

}  // namespace

TEST_SUITE("color") {
  TEST_CASE("hsv examples") {
    ColorImage hsv = rgb_to_hsv(pixel(1, 0, 0));
    CHECK(hsv.space == ColorSpace::hsv);
    CHECK(hsv.planes[0][0] == doctest::Approx(0.0));
    CHECK(hsv.planes[1][0] == doctest::Approx(1.0));
    CHECK(hsv.planes[2][0] == doctest::Approx(1.0));

    hsv = rgb_to_hsv(pixel(0.5, 0.5, 0.5));
    CHECK(hsv.planes[0][0] == 0.0);
    CHECK(hsv.planes[1][0] == 0.0);
    CHECK(hsv.planes[2][0] == doctest::Approx(0.5));

    hsv = rgb_to_hsv(pixel(0, 1, 1));
    CHECK(hsv.planes[0][0] == doctest::Approx(180.0));
    CHECK(hsv.planes[1][0] == doctest::Approx(1.0));
    CHECK(hsv.planes[2][0] == doctest::Approx(1.0));

    hsv = rgb_to_hsv(pixel(1, 0, 1));  // magenta wraps to 300 degrees
    CHECK(hsv.planes[0][0] == doctest::Approx(300.0));
  }

  TEST_CASE("hsv round trip on random images") {
    const ColorImage rgb = random_rgb(32, 24, 1);
    const ColorImage hsv = rgb_to_hsv(rgb);
    for (std::size_t i = 0; i < hsv.pixel_count(); ++i) {
      CHECK(hsv.planes[0][i] >= 0.0);
      CHECK(hsv.planes[0][i] < 360.0);
    }
    const ColorImage back = hsv_to_rgb(hsv);
    for (int c = 0; c < 3; ++c) {
      for (std::size_t i = 0; i < rgb.pixel_count(); ++i) {
        CHECK(std::abs(back.planes[c][i] - rgb.planes[c][i]) < 1e-4);
      }
    }
  }

  TEST_CASE("ycrcb examples") {
    ColorImage y = rgb_to_ycrcb(pixel(1, 1, 1));
    CHECK(y.planes[0][0] == doctest::Approx(1.0));
    CHECK(y.planes[1][0] == doctest::Approx(0.5));
    CHECK(y.planes[2][0] == doctest::Approx(0.5));
    y = rgb_to_ycrcb(pixel(0, 0, 0));
    CHECK(y.planes[0][0] == doctest::Approx(0.0));
    CHECK(y.planes[1][0] == doctest::Approx(0.5));
    CHECK(y.planes[2][0] == doctest::Approx(0.5));
    y = rgb_to_ycrcb(pixel(1, 0, 0));
    CHECK(y.planes[0][0] == doctest::Approx(0.299));
    CHECK(y.planes[1][0] == doctest::Approx(0.5 + 0.701 * 0.713));
    CHECK(y.planes[2][0] == doctest::Approx(0.5 - 0.299 * 0.564));
  }

  TEST_CASE("cielab examples") {
    ColorImage lab = rgb_to_cielab(pixel(1, 1, 1));
    CHECK(lab.planes[0][0] == doctest::Approx(100.0).epsilon(1e-9));
    CHECK(std::abs(lab.planes[1][0]) < 0.01);
    CHECK(std::abs(lab.planes[2][0]) < 0.01);
    lab = rgb_to_cielab(pixel(0, 0, 0));
    CHECK(lab.planes[0][0] == doctest::Approx(0.0));
    CHECK(lab.planes[1][0] == doctest::Approx(0.0));
    CHECK(lab.planes[2][0] == doctest::Approx(0.0));
    lab = rgb_to_cielab(pixel(0.5, 0.5, 0.5));
    CHECK(lab.planes[0][0] == doctest::Approx(gray_lightness(0.5)).epsilon(1e-9));
    CHECK(lab.planes[0][0] == doctest::Approx(53.39).epsilon(1e-3));
  }

  TEST_CASE("achromatic inputs at every gray level") {
    ColorImage gray(256, 1);
    for (int i = 0; i < 256; ++i) {
      for (Plane& p : gray.planes) p[static_cast<std::size_t>(i)] = i / 255.0;
    }
    const ColorImage hsv = rgb_to_hsv(gray);
    const ColorImage ycc = rgb_to_ycrcb(gray);
    const ColorImage lab = rgb_to_cielab(gray);
    for (std::size_t i = 0; i < 256; ++i) {
      CHECK(hsv.planes[1][i] == 0.0);
      CHECK(ycc.planes[1][i] == doctest::Approx(0.5).epsilon(1e-12));
      CHECK(ycc.planes[2][i] == doctest::Approx(0.5).epsilon(1e-12));
      CHECK(std::abs(lab.planes[1][i]) < 0.01);
      CHECK(std::abs(lab.planes[2][i]) < 0.01);
      CHECK(lab.planes[0][i] == doctest::Approx(gray_lightness(i / 255.0)).epsilon(1e-9));
    }
  }

  TEST_CASE("conversions commute with pixel permutations") {
    const ColorImage rgb = random_rgb(16, 16, 2);
    ColorImage flipped(16, 16);
    for (int c = 0; c < 3; ++c) {
      for (int y = 0; y < 16; ++y) {
        for (int x = 0; x < 16; ++x) flipped.planes[c].at(15 - x, 15 - y) = rgb.planes[c].at(x, y);
      }
    }
    for (ColorSpace s : {ColorSpace::hsv, ColorSpace::cielab, ColorSpace::ycrcb}) {
      const ColorImage a = convert(rgb, s);
      const ColorImage b = convert(flipped, s);
      for (int c = 0; c < 3; ++c) {
        for (int y = 0; y < 16; ++y) {
          for (int x = 0; x < 16; ++x) CHECK(b.planes[c].at(15 - x, 15 - y) == a.planes[c].at(x, y));
        }
      }
    }
  }

  TEST_CASE("serial and parallel conversions agree exactly") {
    const ColorImage rgb = random_rgb(64, 48, 3);
    for (ColorSpace s : {ColorSpace::hsv, ColorSpace::cielab, ColorSpace::ycrcb}) {
      CHECK(convert(rgb, s, Execution::serial) == convert(rgb, s, Execution::parallel));
    }
  }

  TEST_CASE("wrong input space is a contract error") {
    const ColorImage lab = rgb_to_cielab(pixel(0.2, 0.4, 0.6));
    CHECK_THROWS_AS(rgb_to_hsv(lab), ContractError);
    CHECK_THROWS_AS(rgb_to_ycrcb(lab), ContractError);
    CHECK_THROWS_AS(rgb_to_cielab(lab), ContractError);
  }

  TEST_CASE("color space names") {
    CHECK(parse_color_space("CIELAB") == ColorSpace::cielab);
    CHECK(parse_color_space("lab") == ColorSpace::cielab);
    CHECK(parse_color_space("ycbcr") == ColorSpace::ycrcb);
    CHECK(to_string(ColorSpace::hsv) == "hsv");
    CHECK_THROWS_AS(parse_color_space("xyz"), ContractError);
  }

  TEST_CASE("decode png and bmp") {
    ColorImage red(1, 1);
    red.planes[0][0] = 1.0;
    const ColorImage png = decode_image(encode_png(red));
    CHECK(png.space == ColorSpace::rgb);
    CHECK(png.planes[0][0] == 1.0);
    CHECK(png.planes[1][0] == 0.0);
    CHECK(png.planes[2][0] == 0.0);

    ColorImage gray(2, 2);
    for (Plane& p : gray.planes) {
      for (double& v : p.values()) v = 128.0 / 255.0;
    }
    const ColorImage bmp = decode_image(encode_bmp(gray));
    for (const Plane& p : bmp.planes) {
      for (double v : p.values()) CHECK(v == 128.0 / 255.0);
    }
  }

  TEST_CASE("encode and decode round trip at 8 bits") {
    ColorImage img(7, 5);
    std::mt19937_64 rng(4);
    std::uniform_int_distribution<int> level(0, 255);
    for (Plane& p : img.planes) {
      for (double& v : p.values()) v = level(rng) / 255.0;
    }
    CHECK(decode_image(encode_png(img)) == img);
    CHECK(decode_image(encode_bmp(img)) == img);
  }

  TEST_CASE("corrupted data is a decode error") {
    ColorImage img(4, 4);
    auto png = encode_png(img);
    png[1] = 'X';
    CHECK_THROWS_AS(decode_image(png), DecodeError);
    auto bmp = encode_bmp(img);
    bmp.resize(20);
    CHECK_THROWS_AS(decode_image(bmp), DecodeError);
    const std::vector<std::uint8_t> junk = {1, 2, 3};
    CHECK_THROWS_AS(decode_image(junk), DecodeError);
  }
}
