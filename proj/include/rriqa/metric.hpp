#pragma once

#include <array>
#include <string_view>
#include <vector>

#include "rriqa/color.hpp"
#include "rriqa/distance.hpp"
#include "rriqa/mggd.hpp"
#include "rriqa/pyramid.hpp"

namespace rriqa {

enum class DistanceKind : unsigned char { kld = 0, gd = 1 };

std::string_view to_string(DistanceKind kind);
DistanceKind parse_distance_kind(std::string_view name);

/// Which shape parameter the geodesic distance is evaluated at.
enum class SharedBeta { reference, mean };

struct MetricOptions {
  double d0 = 0.1;
  SharedBeta shared_beta = SharedBeta::reference;
  GeodesicPrefactor prefactor = GeodesicPrefactor::as_printed;
  EstimateOptions estimation;
};

/// Reduced-reference side channel: one MGGD per oriented sub-band.
struct FeatureSet {
  ColorSpace color_space = ColorSpace::cielab;
  PyramidConfig cfg;
  std::vector<MggdParams> features;  ///< band order of SubbandSet
  int width = 0;                     ///< source image dimensions
  int height = 0;

  std::size_t scalar_count() const { return features.size() * 8; }
  /// Throws ContractError on a band-count mismatch or an invalid MggdParams.
  void validate() const;

  friend bool operator==(const FeatureSet&, const FeatureSet&) = default;
};

struct QualityResult {
  double d_total = 0.0;
  double q = 0.0;
  std::vector<double> per_band;
  DistanceKind distance_kind = DistanceKind::kld;
};

/// The three planes the pyramid sees for `space`. Hue is rescaled from
/// degrees to [0, 1].
std::array<Plane, 3> analysis_planes(const ColorImage& rgb, ColorSpace space);

/// Converts, decomposes every plane and fits one MGGD per band.
/// Errors are re-thrown with the failing band index in the message.
FeatureSet extract_features(const ColorImage& rgb, ColorSpace space, const PyramidConfig& cfg,
                            const EstimateOptions& options = {});

/// Q = log2(1 + D / d0).
double quality_from_distortion(double d_total, double d0);

/// Band-wise dissimilarity between two feature sets of the same layout.
QualityResult compare_features(const FeatureSet& reference, const FeatureSet& distorted,
                               DistanceKind kind, const MetricOptions& options = {});

/// Extracts features of `distorted` with the reference layout and compares.
/// The distorted image must have the reference dimensions.
QualityResult score(const FeatureSet& reference, const ColorImage& distorted, DistanceKind kind,
                    const MetricOptions& options = {});

}  // namespace rriqa
