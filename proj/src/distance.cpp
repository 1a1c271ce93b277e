#include "rriqa/distance.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "rriqa/kernels.hpp"
#include "rriqa/special.hpp"

namespace rriqa {
namespace {

constexpr double kDim = kMggdDim;

void require_spd(const Mat3& m, const char* what) {
  Eigen::SelfAdjointEigenSolver<Mat3> eig(m, Eigen::EigenvaluesOnly);
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (!m.allFinite() || eig.info() != Eigen::Success || !(eig.eigenvalues()(0) > 0.0) ||
      asym > 1e-10 * m.cwiseAbs().maxCoeff()) {
    throw ContractError(std::string(what) + " is not symmetric positive definite");
  }
}

// 16-point Gauss-Legendre rule on [-1, 1], nodes from Newton iteration on P_16.
struct GaussLegendre {
  static constexpr int kOrder = 16;
  std::array<double, kOrder> nodes{};
  std::array<double, kOrder> weights{};

  GaussLegendre() {
    for (int i = 0; i < kOrder; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (kOrder + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= kOrder; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = kOrder * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      nodes[i] = x;
      weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
  }

  template <typename F>
  double integrate(F&& f, double a, double b) const {
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    double s = 0.0;
    for (int i = 0; i < kOrder; ++i) s += weights[i] * f(mid + half * nodes[i]);
    return s * half;
  }
};

const GaussLegendre& gauss_legendre() {
  static const GaussLegendre rule;
  return rule;
}

template <typename F>
double adaptive_integral(F&& f, double a, double b, double whole, int depth) {
  const auto& rule = gauss_legendre();
  const double mid = 0.5 * (a + b);
  const double left = rule.integrate(f, a, mid);
  const double right = rule.integrate(f, mid, b);
  const double refined = left + right;
  if (depth >= 12 || std::abs(refined - whole) <= 1e-13 * std::abs(refined)) return refined;
  return adaptive_integral(f, a, mid, left, depth + 1) +
         adaptive_integral(f, mid, b, right, depth + 1);
}

}  // namespace

GeneralizedSpectrum generalized_eigs(const Mat3& sigma1, const Mat3& sigma2) {
  require_spd(sigma1, "sigma1");
  require_spd(sigma2, "sigma2");
  // sigma2 v = lambda sigma1 v, normalized so that v' sigma1 v = 1.
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat3> ges(sigma2, sigma1);
  if (ges.info() != Eigen::Success) {
    throw ContractError("generalized eigenproblem failed");
  }
  GeneralizedSpectrum out;
  for (int i = 0; i < 3; ++i) {
    out.lambdas[i] = ges.eigenvalues()(2 - i);
    out.h.col(i) = ges.eigenvectors().col(2 - i);
  }
  out.h_det = std::abs(out.h.determinant());
  return out;
}

double angular_moment(const std::array<double, 3>& gammas, double power) {
  for (const double g : gammas) {
    if (!(g > 0.0) || !std::isfinite(g)) {
      throw DomainError("angular_moment: eigenvalues must be positive and finite");
    }
  }
  const double geo = std::cbrt(gammas[0] * gammas[1] * gammas[2]);
  std::array<double, 3> g = {gammas[0] / geo, gammas[1] / geo, gammas[2] / geo};
  std::sort(g.begin(), g.end());
  // The closest pair spans the azimuthal plane, keeping (b/a)^2 small.
  double g1, g2, axis;
  if (g[1] / g[0] <= g[2] / g[1]) {
    g1 = g[1], g2 = g[0], axis = g[2];
  } else {
    g1 = g[2], g2 = g[1], axis = g[0];
  }
  const double mean = 0.5 * (g1 + g2);
  const double half_diff = 0.5 * (g1 - g2);
  const double ha = 0.5 * (1.0 - power);
  const double hb = -0.5 * power;
  auto integrand = [&](double t) {
    const double w = 1.0 - t * t;
    const double a = axis * t * t + w * mean;
    const double ratio = w * half_diff / a;
    return std::pow(a, power) * special::gauss_2f1(ha, hb, 1.0, ratio * ratio);
  };
  const double whole = gauss_legendre().integrate(integrand, 0.0, 1.0);
  return std::pow(geo, power) * adaptive_integral(integrand, 0.0, 1.0, whole, 0);
}

double kld_unclamped(const MggdParams& p1, const MggdParams& p2) {
  p1.validate();
  p2.validate();
  const double b1 = p1.beta, b2 = p2.beta;
  const double k1 = kDim / (2.0 * b1), k2 = kDim / (2.0 * b2);
  const double log_det1 = kDim * std::log(p1.scale) + std::log(p1.sigma.determinant());
  const double log_det2 = kDim * std::log(p2.scale) + std::log(p2.sigma.determinant());

  // gamma_i: eigenvalues of Sigma2^-1 Sigma1.
  const GeneralizedSpectrum spec = generalized_eigs(p2.dispersion(), p1.dispersion());
  const double moment = angular_moment(spec.lambdas, b2);

  const double log_ratio = special::log_gamma(k2) - special::log_gamma(k1) +
                           (k2 - k1) * std::numbers::ln2 + 0.5 * (log_det2 - log_det1) +
                           std::log(b1 / b2);
  const double cross = std::exp((b2 / b1 - 1.0) * std::numbers::ln2 +
                                special::log_gamma((0.5 * kDim + b2) / b1) -
                                special::log_gamma(k1) + std::log(moment));
  return log_ratio - k1 + cross;
}

double kld(const MggdParams& p1, const MggdParams& p2) {
  if (p1 == p2) {
    p1.validate();
    return 0.0;
  }
  const double d = kld_unclamped(p1, p2);
  if (d < -1e-6) {
    throw DomainError("kld: closed form returned " + std::to_string(d) +
                      " (beta1=" + std::to_string(p1.beta) + ", beta2=" + std::to_string(p2.beta) +
                      ")");
  }
  return std::max(d, 0.0);
}

MonteCarloEstimate mc_kld(const MggdParams& p1, const MggdParams& p2, std::size_t n,
                          std::uint64_t seed, Execution exec) {
  if (n < 10000) throw ContractError("mc_kld needs at least 10^4 samples");
  p2.validate();
  const SubbandVectors x = sample(p1, n, seed);
  const kernels::DensityTerms t1{p1.dispersion().inverse(), p1.beta, log_normalizer(p1)};
  const kernels::DensityTerms t2{p2.dispersion().inverse(), p2.beta, log_normalizer(p2)};
  std::vector<double> gaps(n);
  kernels::log_density_gaps(exec, x.packed(), t1, t2, gaps);
  const double mean = kernels::sum(exec, gaps) / static_cast<double>(n);
  for (double& g : gaps) g = (g - mean) * (g - mean);
  const double var = kernels::sum(exec, gaps) / static_cast<double>(n - 1);
  return {mean, std::sqrt(var / static_cast<double>(n))};
}

double geodesic_spectral_part(const std::array<double, 3>& lambdas, double beta) {
  const double p = kDim;
  const double b = 0.25 * (p + 2.0 * beta) / (p + 2.0);
  double squares = 0.0, cross = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double li = std::log(lambdas[i]);
    squares += li * li;
    for (int j = i + 1; j < 3; ++j) cross += li * std::log(lambdas[j]);
  }
  return std::sqrt(std::max(0.0, (3.0 * b - 0.25) * squares + 2.0 * (b - 0.25) * cross));
}

double geodesic(const MggdParams& p1, const MggdParams& p2, double beta_shared,
                GeodesicPrefactor prefactor) {
  p1.validate();
  p2.validate();
  if (!(beta_shared >= kBetaMin && beta_shared <= kBetaMax)) {
    throw ContractError("geodesic: shared shape parameter out of [0.1, 3]");
  }
  if (p1 == p2) return 0.0;
  const GeneralizedSpectrum spec = generalized_eigs(p1.dispersion(), p2.dispersion());
  const double core = geodesic_spectral_part(spec.lambdas, beta_shared);
  if (prefactor == GeodesicPrefactor::none) return core;
  return core / std::pow(spec.h_det, 2.0 * kDim);
}

}  // namespace rriqa
