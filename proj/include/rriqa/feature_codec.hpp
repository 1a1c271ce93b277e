#pragma once

// Binary side-channel format (all integers and floats little-endian):
//
//   offset  size  field
//        0     4  magic "RRIQ"
//        4     1  format version (1)
//        5     1  color space id (0 rgb, 1 hsv, 2 cielab, 3 ycrcb)
//        6     1  pyramid scales
//        7     1  pyramid orientations
//        8     4  source width  (uint32)
//       12     4  source height (uint32)
//       16     2  band count L  (uint16)
//       18     2  reserved, zero
//       20  64*L  per band: beta, scale, sigma00, sigma01, sigma02,
//                 sigma11, sigma12, sigma22 as IEEE-754 binary64
//
// Six bands therefore take 20 + 384 bytes.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rriqa/metric.hpp"

namespace rriqa {

inline constexpr std::uint8_t kFeatureFormatVersion = 1;
inline constexpr std::size_t kFeatureHeaderSize = 20;
inline constexpr std::size_t kFeatureBandSize = 8 * sizeof(double);

std::vector<std::uint8_t> encode_features(const FeatureSet& features);

/// Throws DecodeError naming the offending offset or invariant
/// ("truncated", "bad magic", "unsupported version", "non-positive-definite", ...).
FeatureSet decode_features(std::span<const std::uint8_t> bytes);

/// Human-readable dump of the same payload, 17 significant digits.
std::string features_to_text(const FeatureSet& features);

}  // namespace rriqa
