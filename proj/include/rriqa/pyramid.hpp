#pragma once

#include <vector>

#include "rriqa/plane.hpp"
#include "rriqa/subband_vectors.hpp"

namespace rriqa {

struct PyramidConfig {
  int scales = 2;
  int orientations = 3;

  int band_count() const { return scales * orientations; }
  /// Throws ConfigError unless scales in [1, 8] and orientations in [1, 16].
  void validate() const;

  friend bool operator==(const PyramidConfig&, const PyramidConfig&) = default;
};

/// Oriented sub-bands of one plane plus the two residuals.
///
/// `bands` is scale-major, orientation-minor: index = scale * orientations +
/// orientation. Scale 0 is the finest and has the dimensions of the analysed
/// region; each further scale halves both dimensions. Orientation k responds
/// to spatial frequencies whose direction makes an angle of pi*k/orientations
/// with the x axis, so orientation 0 captures patterns that vary along x.
struct SubbandSet {
  PyramidConfig cfg;
  std::vector<Plane> bands;
  Plane residual_high;
  Plane residual_low;

  const Plane& band(int scale, int orientation) const {
    return bands[static_cast<std::size_t>(scale * cfg.orientations + orientation)];
  }
};

/// Smallest edge the analysed region may have for a given number of scales.
int minimum_pyramid_edge(int scales);

/// Frequency-domain steerable pyramid with circular boundaries.
///
/// Dimensions are cropped (keeping the top-left corner) down to multiples of
/// 2^scales before the transform. The transform is a tight frame, so
/// `reconstruct` inverts it. Throws ConfigError when the plane is smaller than
/// minimum_pyramid_edge(cfg.scales) in either direction.
SubbandSet decompose(const Plane& plane, const PyramidConfig& cfg);

/// Inverse of decompose. Returns a plane with the analysed (cropped) dims.
Plane reconstruct(const SubbandSet& bands, const PyramidConfig& cfg);

/// Row i holds the coefficients at flat position i (row-major) of band
/// `band_index` in the three color planes.
SubbandVectors stack_color_subbands(const SubbandSet& c1, const SubbandSet& c2,
                                    const SubbandSet& c3, int band_index);

}  // namespace rriqa
