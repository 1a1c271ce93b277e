#pragma once

#include <array>
#include <string>
#include <string_view>

#include "rriqa/execution.hpp"
#include "rriqa/plane.hpp"

namespace rriqa {

/// Plane order per space: R/G/B, H/S/V, L/a/b, Y/Cr/Cb.
enum class ColorSpace : unsigned char { rgb = 0, hsv = 1, cielab = 2, ycrcb = 3 };

std::string_view to_string(ColorSpace space);
/// Accepts "rgb", "hsv", "cielab" (or "lab") and "ycrcb", case-insensitive.
ColorSpace parse_color_space(std::string_view name);

/// Three aligned planes in a declared color space.
///
/// Value ranges: RGB in [0,1]; HSV with H in degrees [0,360) and S, V in
/// [0,1]; CIELAB with L in [0,100]; YCrCb full range in [0,1].
struct ColorImage {
  ColorSpace space = ColorSpace::rgb;
  std::array<Plane, 3> planes;

  ColorImage() = default;
  ColorImage(int width, int height, ColorSpace s = ColorSpace::rgb);

  int width() const { return planes[0].width(); }
  int height() const { return planes[0].height(); }
  std::size_t pixel_count() const { return planes[0].size(); }

  /// Throws ContractError when the planes disagree on dimensions.
  void validate() const;

  friend bool operator==(const ColorImage&, const ColorImage&) = default;
};

ColorImage rgb_to_hsv(const ColorImage& img, Execution exec = Execution::parallel);
/// Inverse hexcone transform. Used to check the forward conversion.
ColorImage hsv_to_rgb(const ColorImage& img);
ColorImage rgb_to_ycrcb(const ColorImage& img, Execution exec = Execution::parallel);
/// sRGB (D65) -> linear RGB -> CIEXYZ -> CIELAB.
ColorImage rgb_to_cielab(const ColorImage& img, Execution exec = Execution::parallel);

/// Converts an RGB image to `target`. RGB input with target RGB is a copy.
ColorImage convert(const ColorImage& rgb, ColorSpace target,
                   Execution exec = Execution::parallel);

}  // namespace rriqa
