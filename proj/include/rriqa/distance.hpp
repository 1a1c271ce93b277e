#pragma once

#include <array>
#include <cstdint>

#include "rriqa/execution.hpp"
#include "rriqa/mggd.hpp"

namespace rriqa {

/// Simultaneous diagonalization of two SPD matrices.
struct GeneralizedSpectrum {
  std::array<double, 3> lambdas{};  ///< eigenvalues of sigma1^-1 sigma2, descending
  Mat3 h;                           ///< h' sigma1 h = I, h' sigma2 h = diag(lambdas)
  double h_det = 0.0;               ///< |det h| = det(sigma1)^(-1/2)
};

/// Throws ContractError unless both matrices are SPD.
GeneralizedSpectrum generalized_eigs(const Mat3& sigma1, const Mat3& sigma2);

/// Mean of (g1 s1^2 + g2 s2^2 + g3 s3^2)^power over the unit sphere.
///
/// Reduced to a one-dimensional integral over the polar coordinate, whose
/// integrand is the azimuthal average a^power 2F1((1-power)/2, -power/2; 1;
/// (b/a)^2); integrated with adaptive Gauss-Legendre. The two closest
/// gammas share the azimuthal plane and the gammas are pre-scaled by their
/// geometric mean.
double angular_moment(const std::array<double, 3>& gammas, double power);

/// Kullback-Leibler divergence D(p1 || p2) between zero-mean trivariate MGGDs.
///
/// Log-normalizer and expected-energy terms in closed form; the expectation
/// of (x' Sigma2^-1 x)^beta2 under p1 factors into a radial gamma moment and
/// angular_moment of the eigenvalues of Sigma2^-1 Sigma1. Round-off negatives
/// down to -1e-6 are clamped to 0; anything lower throws DomainError.
double kld(const MggdParams& p1, const MggdParams& p2);
double kld_unclamped(const MggdParams& p1, const MggdParams& p2);

struct MonteCarloEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
};

/// Sample mean and standard error of log p1(x) - log p2(x), x ~ sample(p1, n, seed).
/// Requires n >= 10^4.
MonteCarloEstimate mc_kld(const MggdParams& p1, const MggdParams& p2, std::size_t n,
                          std::uint64_t seed, Execution exec = Execution::parallel);

enum class GeodesicPrefactor {
  as_printed,  ///< multiply by 1 / |det H|^(2p) = det(Sigma1)^p
  none,
};

/// sqrt((3b - 1/4) sum (ln l_i)^2 + 2 (b - 1/4) sum_{i<j} ln l_i ln l_j),
/// b = (p + 2 beta) / (4 (p + 2)), p = 3.
double geodesic_spectral_part(const std::array<double, 3>& lambdas, double beta);

/// Fixed-shape geodesic distance between the dispersions of p1 and p2,
/// evaluated at `beta_shared`.
double geodesic(const MggdParams& p1, const MggdParams& p2, double beta_shared,
                GeodesicPrefactor prefactor = GeodesicPrefactor::as_printed);

}  // namespace rriqa
