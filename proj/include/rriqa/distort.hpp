#pragma once

#include <cstdint>
#include <string_view>

#include "rriqa/color.hpp"

namespace rriqa {

enum class DistortionKind { gaussian_noise, gaussian_blur, quantization };

std::string_view to_string(DistortionKind kind);
DistortionKind parse_distortion_kind(std::string_view name);

/// TID2008 type code of the matching distortion (1, 8 and 7).
int tid_type(DistortionKind kind);

/// Synthetic distortions of an RGB image with values in [0, 1].
///
/// gaussian_noise: adds N(0, level^2) per channel, then clamps.
/// gaussian_blur: separable Gaussian of std `level` pixels, replicated border.
/// quantization: `level` uniform bins per channel, reconstructed at bin centres.
ColorImage distort(const ColorImage& rgb, DistortionKind kind, double level,
                   std::uint64_t seed = 0);

}  // namespace rriqa
