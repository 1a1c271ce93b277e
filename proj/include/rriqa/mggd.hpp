#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include <Eigen/Core>

#include "rriqa/error.hpp"
#include "rriqa/execution.hpp"
#include "rriqa/subband_vectors.hpp"

namespace rriqa {

using Mat3 = Eigen::Matrix3d;
using Vec3 = Eigen::Vector3d;

/// Dimension of the modelled vectors (one coefficient per color plane).
inline constexpr int kMggdDim = 3;
inline constexpr double kBetaMin = 0.1;
inline constexpr double kBetaMax = 3.0;

/// Zero-mean trivariate multivariate generalized Gaussian.
///
/// The dispersion matrix of the density is `scale * sigma` with det(sigma) = 1,
/// so (beta, scale, upper triangle of sigma) are the 8 transmitted numbers.
struct MggdParams {
  double beta = 1.0;
  Mat3 sigma = Mat3::Identity();
  double scale = 1.0;

  Mat3 dispersion() const { return scale * sigma; }

  /// Splits an SPD dispersion matrix into scale and unit-determinant shape.
  /// Throws ContractError if `dispersion` is not SPD.
  static MggdParams from_dispersion(double beta, const Mat3& dispersion);

  /// Throws ContractError naming the first violated invariant.
  void validate() const;

  friend bool operator==(const MggdParams& a, const MggdParams& b) {
    return a.beta == b.beta && a.scale == b.scale && a.sigma == b.sigma;
  }
};

/// log f(x) with zero mean and dispersion scale * sigma.
double log_density(const MggdParams& params, const Vec3& x);

/// Additive constant of the log-density: everything except -u^beta / 2.
double log_normalizer(const MggdParams& params);

struct EstimateOptions {
  int max_outer_iterations = 500;
  int max_inner_iterations = 1000;
  double sigma_tolerance = 1e-6;  ///< relative Frobenius change between outer steps
  double beta_tolerance = 1e-6;
  double inner_tolerance = 1e-8;  ///< shape fixed point for a fixed beta
  Execution execution = Execution::parallel;
};

struct EstimateDiagnostics {
  int outer_iterations = 0;
  int inner_iterations = 0;
  bool beta_clamped = false;  ///< the shape equation had no root in [0.1, 3]
};

struct MggdFit {
  MggdParams params;
  EstimateDiagnostics diagnostics;
};

/// Raised when the alternation does not settle; carries the last iterate.
class MggdConvergenceError : public ConvergenceError {
 public:
  MggdConvergenceError(const std::string& what, MggdParams last)
      : ConvergenceError(what), last_(std::move(last)) {}
  const MggdParams& last_iterate() const { return last_; }

 private:
  MggdParams last_;
};

/// Maximum-likelihood fit of (beta, dispersion).
///
/// Alternates the dispersion fixed point for a fixed beta (iterated to
/// `inner_tolerance`) with a bracketed root search of the shape equation on
/// [0.1, 3]; the dispersion scale is profiled out in closed form at each
/// beta. Starts from the sample second-moment matrix and beta = 1. Rows are
/// processed in lexicographic order, so the result does not depend on the
/// order of `samples`.
///
/// Throws ContractError for fewer than 100 rows, EstimationError for a
/// singular second-moment matrix and MggdConvergenceError after
/// `max_outer_iterations`.
MggdFit estimate_mggd(const SubbandVectors& samples, const EstimateOptions& options = {});

inline MggdParams estimate(const SubbandVectors& samples, const EstimateOptions& options = {}) {
  return estimate_mggd(samples, options).params;
}

/// Dispersion fixed point with beta held at `beta` (beta = 1 gives the
/// Gaussian fit, the sample second-moment matrix).
MggdParams estimate_fixed_shape(const SubbandVectors& samples, double beta,
                                const EstimateOptions& options = {});

/// n draws of x = r * L * u, u uniform on the sphere, L the Cholesky factor
/// of the dispersion, r^(2 beta) / 2 ~ Gamma(3 / (2 beta), 1). Deterministic
/// for a given seed.
SubbandVectors sample(const MggdParams& params, std::size_t n, std::uint64_t seed);

/// Kolmogorov-Smirnov distance between the empirical law of u^beta / 2,
/// u = x' (scale sigma)^-1 x, and Gamma(3 / (2 beta), 1).
double ks_adequacy(const SubbandVectors& samples, const MggdParams& params);

}  // namespace rriqa
