#include "rriqa/metric.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <exception>
#include <numbers>
#include <string>

#include "rriqa/error.hpp"

namespace rriqa {
namespace {

[[noreturn]] void rethrow_for_band(const std::exception_ptr& error, int band) {
  const std::string prefix = "band " + std::to_string(band) + ": ";
  try {
    std::rethrow_exception(error);
  } catch (const MggdConvergenceError& e) {
    throw MggdConvergenceError(prefix + e.what(), e.last_iterate());
  } catch (const ConvergenceError& e) {
    throw ConvergenceError(prefix + e.what());
  } catch (const EstimationError& e) {
    throw EstimationError(prefix + e.what());
  } catch (const DomainError& e) {
    throw DomainError(prefix + e.what());
  } catch (const ContractError& e) {
    throw ContractError(prefix + e.what());
  } catch (const ConfigError& e) {
    throw ConfigError(prefix + e.what());
  } catch (const Error& e) {
    throw Error(prefix + e.what());
  }
}

// Runs fn(b) for every band, in parallel, and re-throws the lowest-index
// failure with its band attached.
template <typename Fn>
void for_each_band(int count, Fn fn) {
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
#pragma omp parallel for schedule(dynamic)
  for (int b = 0; b < count; ++b) {
    try {
      fn(b);
    } catch (...) {
      errors[static_cast<std::size_t>(b)] = std::current_exception();
    }
  }
  for (int b = 0; b < count; ++b) {
    if (errors[static_cast<std::size_t>(b)]) rethrow_for_band(errors[static_cast<std::size_t>(b)], b);
  }
}

}  // namespace

std::string_view to_string(DistanceKind kind) {
  return kind == DistanceKind::kld ? "kld" : "gd";
}

DistanceKind parse_distance_kind(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "kld") return DistanceKind::kld;
  if (lower == "gd" || lower == "geodesic") return DistanceKind::gd;
  throw ContractError("unknown distance '" + std::string(name) + "'");
}

void FeatureSet::validate() const {
  cfg.validate();
  if (static_cast<int>(features.size()) != cfg.band_count()) {
    throw ContractError("feature set holds " + std::to_string(features.size()) +
                        " bands, configuration expects " + std::to_string(cfg.band_count()));
  }
  for (std::size_t b = 0; b < features.size(); ++b) {
    try {
      features[b].validate();
    } catch (const ContractError& e) {
      throw ContractError("band " + std::to_string(b) + ": " + e.what());
    }
  }
}

std::array<Plane, 3> analysis_planes(const ColorImage& img, ColorSpace space) {
  img.validate();
  ColorImage converted = img.space == space ? img : convert(img, space);
  if (space == ColorSpace::hsv) {
    for (double& h : converted.planes[0].values()) h /= 360.0;
  }
  return std::move(converted.planes);
}

FeatureSet extract_features(const ColorImage& img, ColorSpace space, const PyramidConfig& cfg,
                            const EstimateOptions& options) {
  cfg.validate();
  const std::array<Plane, 3> planes = analysis_planes(img, space);
  std::array<SubbandSet, 3> sets;
  for (int c = 0; c < 3; ++c) sets[c] = decompose(planes[c], cfg);

  FeatureSet out;
  out.color_space = space;
  out.cfg = cfg;
  out.width = img.width();
  out.height = img.height();
  out.features.resize(static_cast<std::size_t>(cfg.band_count()));
  for_each_band(cfg.band_count(), [&](int b) {
    out.features[static_cast<std::size_t>(b)] =
        estimate(stack_color_subbands(sets[0], sets[1], sets[2], b), options);
  });
  return out;
}

double quality_from_distortion(double d_total, double d0) {
  if (!(d0 > 0.0)) throw ContractError("D0 must be positive");
  return std::log1p(d_total / d0) / std::numbers::ln2;
}

QualityResult compare_features(const FeatureSet& reference, const FeatureSet& distorted,
                               DistanceKind kind, const MetricOptions& options) {
  if (reference.color_space != distorted.color_space || reference.cfg != distorted.cfg ||
      reference.features.size() != distorted.features.size()) {
    throw ContractError("feature sets use different color spaces or pyramid layouts");
  }
  QualityResult out;
  out.distance_kind = kind;
  out.per_band.resize(reference.features.size());
  for_each_band(static_cast<int>(reference.features.size()), [&](int b) {
    const MggdParams& ref = reference.features[static_cast<std::size_t>(b)];
    const MggdParams& dis = distorted.features[static_cast<std::size_t>(b)];
    double d = 0.0;
    if (kind == DistanceKind::kld) {
      d = kld(ref, dis);
    } else {
      const double beta =
          options.shared_beta == SharedBeta::reference ? ref.beta : 0.5 * (ref.beta + dis.beta);
      d = geodesic(ref, dis, beta, options.prefactor);
    }
    out.per_band[static_cast<std::size_t>(b)] = d;
  });
  for (const double d : out.per_band) out.d_total += d;
  out.q = quality_from_distortion(out.d_total, options.d0);
  return out;
}

QualityResult score(const FeatureSet& reference, const ColorImage& distorted, DistanceKind kind,
                    const MetricOptions& options) {
  reference.validate();
  if (distorted.width() != reference.width || distorted.height() != reference.height) {
    throw ContractError("distorted image is " + std::to_string(distorted.width()) + "x" +
                        std::to_string(distorted.height()) + ", reference was " +
                        std::to_string(reference.width) + "x" +
                        std::to_string(reference.height));
  }
  const FeatureSet features =
      extract_features(distorted, reference.color_space, reference.cfg, options.estimation);
  return compare_features(reference, features, kind, options);
}

}  // namespace rriqa
