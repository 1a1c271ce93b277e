#include "rriqa/color.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "rriqa/error.hpp"

namespace rriqa {
namespace {

struct Triple {
  double a, b, c;
};

// Applies fn to every pixel of `in`, writing an image in `space`.
template <typename Fn>
ColorImage map_pixels(const ColorImage& in, ColorSpace space, Execution exec, Fn fn) {
  in.validate();
  ColorImage out(in.width(), in.height(), space);
  const std::size_t n = in.pixel_count();
  const auto& p = in.planes;
  auto& q = out.planes;
  if (exec == Execution::serial) {
    for (std::size_t i = 0; i < n; ++i) {
      const Triple t = fn(Triple{p[0][i], p[1][i], p[2][i]});
      q[0][i] = t.a;
      q[1][i] = t.b;
      q[2][i] = t.c;
    }
  } else {
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < n; ++i) {
      const Triple t = fn(Triple{p[0][i], p[1][i], p[2][i]});
      q[0][i] = t.a;
      q[1][i] = t.b;
      q[2][i] = t.c;
    }
  }
  return out;
}

void require_space(const ColorImage& img, ColorSpace expected, const char* fn) {
  if (img.space != expected) {
    throw ContractError(std::string(fn) + ": expected " + std::string(to_string(expected)) +
                        " input, got " + std::string(to_string(img.space)));
  }
}

Triple hsv_from_rgb(Triple rgb) {
  const double r = rgb.a, g = rgb.b, b = rgb.c;
  const double mx = std::max({r, g, b});
  const double mn = std::min({r, g, b});
  const double delta = mx - mn;
  double h = 0.0;
  if (delta > 0.0) {
    if (mx == r) {
      h = 60.0 * std::fmod((g - b) / delta, 6.0);
    } else if (mx == g) {
      h = 60.0 * ((b - r) / delta + 2.0);
    } else {
      h = 60.0 * ((r - g) / delta + 4.0);
    }
    if (h < 0.0) h += 360.0;
    if (h >= 360.0) h -= 360.0;
  }
  const double s = mx > 0.0 ? delta / mx : 0.0;
  return {h, s, mx};
}

double srgb_to_linear(double v) {
  return v <= 0.04045 ? v / 12.92 : std::pow((v + 0.055) / 1.055, 2.4);
}

// sRGB primaries, D65 white.
constexpr double kRgbToXyz[3][3] = {{0.4124564, 0.3575761, 0.1804375},
                                    {0.2126729, 0.7151522, 0.0721750},
                                    {0.0193339, 0.1191920, 0.9503041}};
// White point as the image of RGB (1,1,1), so grays map to a = b = 0.
constexpr double kWhiteX = kRgbToXyz[0][0] + kRgbToXyz[0][1] + kRgbToXyz[0][2];
constexpr double kWhiteY = kRgbToXyz[1][0] + kRgbToXyz[1][1] + kRgbToXyz[1][2];
constexpr double kWhiteZ = kRgbToXyz[2][0] + kRgbToXyz[2][1] + kRgbToXyz[2][2];

double lab_f(double t) {
  constexpr double delta = 6.0 / 29.0;
  return t > delta * delta * delta ? std::cbrt(t) : t / (3.0 * delta * delta) + 4.0 / 29.0;
}

Triple lab_from_rgb(Triple rgb) {
  const double r = srgb_to_linear(rgb.a);
  const double g = srgb_to_linear(rgb.b);
  const double b = srgb_to_linear(rgb.c);
  const double x = kRgbToXyz[0][0] * r + kRgbToXyz[0][1] * g + kRgbToXyz[0][2] * b;
  const double y = kRgbToXyz[1][0] * r + kRgbToXyz[1][1] * g + kRgbToXyz[1][2] * b;
  const double z = kRgbToXyz[2][0] * r + kRgbToXyz[2][1] * g + kRgbToXyz[2][2] * b;
  const double fx = lab_f(x / kWhiteX);
  const double fy = lab_f(y / kWhiteY);
  const double fz = lab_f(z / kWhiteZ);
  return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

Triple ycrcb_from_rgb(Triple rgb) {
  const double y = 0.299 * rgb.a + 0.587 * rgb.b + 0.114 * rgb.c;
  return {y, 0.5 + (rgb.a - y) * 0.713, 0.5 + (rgb.c - y) * 0.564};
}

}  // namespace

std::string_view to_string(ColorSpace space) {
  switch (space) {
    case ColorSpace::rgb: return "rgb";
    case ColorSpace::hsv: return "hsv";
    case ColorSpace::cielab: return "cielab";
    case ColorSpace::ycrcb: return "ycrcb";
  }
  return "unknown";
}

ColorSpace parse_color_space(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "rgb") return ColorSpace::rgb;
  if (lower == "hsv") return ColorSpace::hsv;
  if (lower == "cielab" || lower == "lab") return ColorSpace::cielab;
  if (lower == "ycrcb" || lower == "ycbcr") return ColorSpace::ycrcb;
  throw ContractError("unknown color space '" + std::string(name) + "'");
}

ColorImage::ColorImage(int width, int height, ColorSpace s)
    : space(s), planes{Plane(width, height), Plane(width, height), Plane(width, height)} {}

void ColorImage::validate() const {
  if (!planes[0].same_shape(planes[1]) || !planes[0].same_shape(planes[2])) {
    throw ContractError("color image planes have different dimensions");
  }
}

ColorImage rgb_to_hsv(const ColorImage& img, Execution exec) {
  require_space(img, ColorSpace::rgb, "rgb_to_hsv");
  return map_pixels(img, ColorSpace::hsv, exec, hsv_from_rgb);
}

ColorImage hsv_to_rgb(const ColorImage& img) {
  require_space(img, ColorSpace::hsv, "hsv_to_rgb");
  return map_pixels(img, ColorSpace::rgb, Execution::serial, [](Triple hsv) {
    const double c = hsv.c * hsv.b;
    const double hp = hsv.a / 60.0;
    const double x = c * (1.0 - std::abs(std::fmod(hp, 2.0) - 1.0));
    const double m = hsv.c - c;
    Triple t{0, 0, 0};
    switch (static_cast<int>(hp) % 6) {
      case 0: t = {c, x, 0}; break;
      case 1: t = {x, c, 0}; break;
      case 2: t = {0, c, x}; break;
      case 3: t = {0, x, c}; break;
      case 4: t = {x, 0, c}; break;
      default: t = {c, 0, x}; break;
    }
    return Triple{t.a + m, t.b + m, t.c + m};
  });
}

ColorImage rgb_to_ycrcb(const ColorImage& img, Execution exec) {
  require_space(img, ColorSpace::rgb, "rgb_to_ycrcb");
  return map_pixels(img, ColorSpace::ycrcb, exec, ycrcb_from_rgb);
}

ColorImage rgb_to_cielab(const ColorImage& img, Execution exec) {
  require_space(img, ColorSpace::rgb, "rgb_to_cielab");
  return map_pixels(img, ColorSpace::cielab, exec, lab_from_rgb);
}

ColorImage convert(const ColorImage& rgb, ColorSpace target, Execution exec) {
  switch (target) {
    case ColorSpace::rgb:
      require_space(rgb, ColorSpace::rgb, "convert");
      return rgb;
    case ColorSpace::hsv: return rgb_to_hsv(rgb, exec);
    case ColorSpace::cielab: return rgb_to_cielab(rgb, exec);
    case ColorSpace::ycrcb: return rgb_to_ycrcb(rgb, exec);
  }
  throw ContractError("convert: unknown target color space");
}

}  // namespace rriqa
