#include "rriqa/mggd.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "rriqa/kernels.hpp"
#include "rriqa/special.hpp"

namespace rriqa {
namespace {

constexpr double kDim = kMggdDim;

Mat3 symmetrized(const Mat3& m) { return 0.5 * (m + m.transpose()); }

Mat3 unit_determinant(const Mat3& m) { return symmetrized(m / std::cbrt(m.determinant())); }

double relative_change(const Mat3& next, const Mat3& prev) {
  return (next - prev).norm() / prev.norm();
}

bool is_spd(const Mat3& m) {
  if (!m.allFinite()) return false;
  Eigen::SelfAdjointEigenSolver<Mat3> eig(m, Eigen::EigenvaluesOnly);
  return eig.info() == Eigen::Success && eig.eigenvalues()(0) > 0.0;
}

// Rows in lexicographic order, packed.
std::vector<double> canonical_rows(const SubbandVectors& samples) {
  std::vector<std::array<double, 3>> rows(samples.size());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = samples.row(i);
  std::sort(rows.begin(), rows.end());
  std::vector<double> packed(3 * rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::copy(rows[i].begin(), rows[i].end(), packed.begin() + 3 * i);
  }
  return packed;
}

Mat3 second_moment(std::span<const double> rows, Execution exec) {
  const double n = static_cast<double>(rows.size() / 3);
  const auto m = kernels::shape_moments(exec, rows, Mat3::Identity(), 1.0);
  return symmetrized(m.scatter / n);
}

// The maximum-likelihood equation for beta after the dispersion scale has
// been replaced by its closed-form optimum for the current shape, as a
// per-sample average:
//   h(beta) = (m/2) [E_w log u - log(beta S / (n m)) / beta]
//             - (m / (2 beta)) [log 2 + psi(m / (2 beta))] - 1
// with S = sum u^beta and E_w the u^beta-weighted mean. One pass over the
// data gives h and its derivative.
class ShapeEquation {
 public:
  struct Value {
    double h;
    double slope;
  };

  ShapeEquation(std::span<const double> log_u, std::size_t n, Execution exec)
      : log_u_(log_u), n_(static_cast<double>(n)), exec_(exec) {
    shift_ = -std::numeric_limits<double>::infinity();
    for (const double v : log_u_) {
      if (std::isfinite(v)) shift_ = std::max(shift_, v);
    }
  }

  Value operator()(double beta) const {
    const auto m = kernels::log_moments(exec_, log_u_, beta, shift_);
    const double mean_log = m.weighted_log / m.weight_sum;
    const double var_log = std::max(0.0, m.weighted_log_sq / m.weight_sum - mean_log * mean_log);
    const double log_scale_beta = std::log(m.weight_sum) + beta * shift_ + std::log(beta / (n_ * kDim));
    const double k = kDim / (2.0 * beta);
    const double g = k * (std::numbers::ln2 + special::digamma(k));
    const double dg = -(k / beta) * (std::numbers::ln2 + special::digamma(k) + k * special::trigamma(k));
    Value v;
    v.h = 0.5 * kDim * (mean_log - log_scale_beta / beta) - g - 1.0;
    v.slope = 0.5 * kDim * (var_log - (mean_log + 1.0 / beta) / beta +
                            log_scale_beta / (beta * beta)) - dg;
    return v;
  }

  // Per-sample log-likelihood with the scale profiled out, up to a constant:
  //   log beta - log Gamma(k) - k log 2 - k log(s^beta) - k,  k = m / (2 beta).
  double profile(double beta) const {
    const double k = kDim / (2.0 * beta);
    return std::log(beta) - special::log_gamma(k) - k * std::numbers::ln2 -
           k * beta * log_scale(beta) - k;
  }

  // log of the optimal dispersion scale for `beta`: s^beta = beta S / (n m).
  double log_scale(double beta) const {
    const auto m = kernels::log_moments(exec_, log_u_, beta, shift_);
    const double log_s = std::log(m.weight_sum) + beta * shift_;
    return (log_s + std::log(beta / (n_ * kDim))) / beta;
  }

 private:
  std::span<const double> log_u_;
  double n_;
  Execution exec_;
  double shift_;
};

struct ShapeRoot {
  double beta;
  bool clamped;
};

// Root of the shape equation on [kBetaMin, kBetaMax]. Newton steps from the
// previous beta; once a sign change is seen the iterate is kept inside the
// bracket and bisection replaces any step that leaves it. No sign change
// over the whole interval clamps to the bound with the smaller residual.
ShapeRoot solve_shape(const ShapeEquation& eq, double guess) {
  constexpr double kTol = 1e-10;
  double x = std::clamp(guess, kBetaMin, kBetaMax);
  ShapeEquation::Value fx = eq(x);
  if (fx.h == 0.0) return {x, false};

  // Bracket [a, b] with h(a) and h(b) of opposite signs, once known.
  double a = 0.0, b = 0.0, fa = 0.0;
  bool bracketed = false;
  for (int it = 0; it < 100; ++it) {
    double next = fx.slope != 0.0 ? x - fx.h / fx.slope : std::numeric_limits<double>::quiet_NaN();
    if (bracketed) {
      if (!(next > a && next < b)) next = 0.5 * (a + b);
    } else if (!(next >= kBetaMin && next <= kBetaMax)) {
      // Newton left the domain: fall back to the full interval.
      const double lo = kBetaMin, hi = kBetaMax;
      const auto flo = eq(lo), fhi = eq(hi);
      if (flo.h * fhi.h > 0.0) {
        return {std::abs(flo.h) < std::abs(fhi.h) ? kBetaMin : kBetaMax, true};
      }
      const bool left = flo.h * fx.h < 0.0;
      a = left ? lo : x;
      b = left ? x : hi;
      fa = left ? flo.h : fx.h;
      bracketed = true;
      next = 0.5 * (a + b);
    }
    const ShapeEquation::Value fn = eq(next);
    if (fn.h == 0.0 || std::abs(next - x) < kTol) return {next, false};
    if (!bracketed && fn.h * fx.h < 0.0) {
      a = std::min(x, next);
      b = std::max(x, next);
      fa = x < next ? fx.h : fn.h;
      bracketed = true;
    } else if (bracketed) {
      if (fn.h * fa < 0.0) {
        b = next;
      } else {
        a = next;
        fa = fn.h;
      }
      if (b - a < kTol) return {0.5 * (a + b), false};
    }
    x = next;
    fx = fn;
  }
  if (bracketed) return {0.5 * (a + b), false};
  // Newton wandered without converging or bracketing: settle by the full interval.
  const auto flo = eq(kBetaMin), fhi = eq(kBetaMax);
  if (flo.h * fhi.h > 0.0) {
    return {std::abs(flo.h) < std::abs(fhi.h) ? kBetaMin : kBetaMax, true};
  }
  double lo = kBetaMin, hi = kBetaMax, flow = flo.h;
  while (hi - lo > kTol) {
    const double mid = 0.5 * (lo + hi);
    const double fm = eq(mid).h;
    if (fm * flow < 0.0) {
      hi = mid;
    } else {
      lo = mid;
      flow = fm;
    }
  }
  return {0.5 * (lo + hi), false};
}

// Safeguarded Newton inside a bracket [a, b] with h(a) * h(b) < 0.
double refine_root(const ShapeEquation& eq, double a, double fa, double b) {
  constexpr double kTol = 1e-10;
  double x = 0.5 * (a + b);
  for (int it = 0; it < 200 && b - a > kTol; ++it) {
    const ShapeEquation::Value fx = eq(x);
    if (fx.h == 0.0) return x;
    if (fx.h * fa < 0.0) {
      b = x;
    } else {
      a = x;
      fa = fx.h;
    }
    double next = fx.slope != 0.0 ? x - fx.h / fx.slope : 0.5 * (a + b);
    if (!(next > a && next < b)) next = 0.5 * (a + b);
    if (std::abs(next - x) < kTol) return next;
    x = next;
  }
  return 0.5 * (a + b);
}

// The beta step of the alternation. The Newton root near the previous beta
// is kept when it does not lower the profile likelihood; otherwise every
// root on a log-spaced grid and both bounds compete on the profile, which
// makes each outer step an ascent and rules out cycling between roots.
ShapeRoot update_shape(const ShapeEquation& eq, double previous) {
  const ShapeRoot local = solve_shape(eq, previous);
  const double start = std::clamp(previous, kBetaMin, kBetaMax);
  const double floor = eq.profile(start);
  if (eq.profile(local.beta) >= floor - 1e-12 * std::max(1.0, std::abs(floor))) return local;

  constexpr int kGrid = 48;
  ShapeRoot best{kBetaMin, true};
  double best_value = eq.profile(kBetaMin);
  if (const double v = eq.profile(kBetaMax); v > best_value) best = {kBetaMax, true}, best_value = v;
  const double ratio = std::log(kBetaMax / kBetaMin) / kGrid;
  double a = kBetaMin, fa = eq(a).h;
  for (int i = 1; i <= kGrid; ++i) {
    const double b = i == kGrid ? kBetaMax : kBetaMin * std::exp(ratio * i);
    const double fb = eq(b).h;
    if (fa * fb <= 0.0) {
      const double root = fb == 0.0 ? b : refine_root(eq, a, fa, b);
      if (const double v = eq.profile(root); v > best_value) best = {root, false}, best_value = v;
    }
    a = b;
    fa = fb;
  }
  return best;
}

constexpr double kOverRelaxation = 1.5;

// Point at fraction t of the affine-invariant geodesic from a to b (t > 1 extrapolates).
Mat3 geodesic_point(const Mat3& a, const Mat3& b, double t) {
  const Eigen::LLT<Mat3> llt(a);
  const Mat3 l = llt.matrixL();
  const Mat3 inner = symmetrized(l.triangularView<Eigen::Lower>().solve(
      l.triangularView<Eigen::Lower>().solve(b).transpose()));
  Eigen::SelfAdjointEigenSolver<Mat3> eig(inner);
  const Vec3 powered = eig.eigenvalues().array().pow(t);
  return symmetrized(l * eig.eigenvectors() * powered.asDiagonal() *
                     eig.eigenvectors().transpose() * l.transpose());
}

// Iterates the unit-determinant shape of the dispersion fixed point
// Sigma = (beta / n) sum u^(beta-1) x x' for a fixed beta. For beta <= 1 the
// full step never increases sum u^beta, and an over-relaxed step along the
// geodesic through the target is tried first (kept only if it also
// decreases the sum). Above 1 the full step can overshoot into a cycle, so
// the step is shortened along the geodesic until sum u^beta decreases.
Mat3 iterate_shape(std::span<const double> rows, Mat3 shape, double beta,
                   const EstimateOptions& opt, int& iterations) {
  auto moments = kernels::shape_moments(opt.execution, rows, shape.inverse(), beta);
  for (int it = 0; it < opt.max_inner_iterations; ++it) {
    ++iterations;
    const Mat3 target = unit_determinant(moments.scatter);
    if (relative_change(target, shape) < opt.inner_tolerance) return target;
    if (beta <= 1.0) {
      const Mat3 over = unit_determinant(geodesic_point(shape, target, kOverRelaxation));
      auto trial = kernels::shape_moments(opt.execution, rows, over.inverse(), beta);
      if (trial.power_sum <= moments.power_sum) {
        shape = over;
        moments = trial;
        continue;
      }
      shape = target;
      moments = kernels::shape_moments(opt.execution, rows, shape.inverse(), beta);
      continue;
    }
    double t = 1.0 / beta;
    Mat3 candidate = unit_determinant(geodesic_point(shape, target, t));
    auto next = kernels::shape_moments(opt.execution, rows, candidate.inverse(), beta);
    while (next.power_sum > moments.power_sum && t > 1e-4) {
      t *= 0.5;
      candidate = unit_determinant(geodesic_point(shape, target, t));
      next = kernels::shape_moments(opt.execution, rows, candidate.inverse(), beta);
    }
    shape = candidate;
    moments = next;
  }
  return shape;
}

Mat3 checked_initial_moment(std::span<const double> rows, Execution exec) {
  const Mat3 s0 = second_moment(rows, exec);
  Eigen::SelfAdjointEigenSolver<Mat3> eig(s0, Eigen::EigenvaluesOnly);
  const auto ev = eig.eigenvalues();
  if (!s0.allFinite() || !(ev(2) > 0.0) || !(ev(0) > 1e-12 * ev(2))) {
    throw EstimationError("singular sample covariance (eigenvalues " + std::to_string(ev(0)) +
                          ", " + std::to_string(ev(1)) + ", " + std::to_string(ev(2)) + ")");
  }
  return s0;
}

void require_rows(const SubbandVectors& samples) {
  if (samples.size() < 100) {
    throw ContractError("MGGD estimation needs at least 100 samples, got " +
                        std::to_string(samples.size()));
  }
}

}  // namespace

MggdParams MggdParams::from_dispersion(double beta, const Mat3& dispersion) {
  const Mat3 d = symmetrized(dispersion);
  if (!is_spd(d)) throw ContractError("dispersion matrix is not positive definite");
  MggdParams p;
  p.beta = beta;
  p.scale = std::cbrt(d.determinant());
  p.sigma = symmetrized(d / p.scale);
  return p;
}

void MggdParams::validate() const {
  if (!(beta >= kBetaMin && beta <= kBetaMax)) {
    throw ContractError("MGGD shape parameter out of [0.1, 3]: " + std::to_string(beta));
  }
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw ContractError("MGGD scale must be positive: " + std::to_string(scale));
  }
  if (!sigma.allFinite()) throw ContractError("MGGD sigma has non-finite entries");
  const double asym = (sigma - sigma.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * std::max(1.0, sigma.cwiseAbs().maxCoeff())) {
    throw ContractError("MGGD sigma is not symmetric");
  }
  if (!is_spd(sigma)) throw ContractError("MGGD sigma is non-positive-definite");
  const double det = sigma.determinant();
  if (std::abs(det - 1.0) > 1e-9) {
    throw ContractError("MGGD sigma determinant is " + std::to_string(det) + ", expected 1");
  }
}

double log_normalizer(const MggdParams& p) {
  const double k = kDim / (2.0 * p.beta);
  // det(scale * sigma) = scale^3 since det(sigma) = 1.
  return special::log_gamma(kDim / 2.0) - 0.5 * kDim * std::log(std::numbers::pi) -
         special::log_gamma(k) - k * std::numbers::ln2 + std::log(p.beta) -
         0.5 * kDim * std::log(p.scale) - 0.5 * std::log(p.sigma.determinant());
}

double log_density(const MggdParams& params, const Vec3& x) {
  params.validate();
  const double u = x.dot(params.dispersion().ldlt().solve(x));
  return log_normalizer(params) - 0.5 * std::pow(u, params.beta);
}

MggdFit estimate_mggd(const SubbandVectors& samples, const EstimateOptions& opt) {
  require_rows(samples);
  const std::vector<double> rows = canonical_rows(samples);
  const std::size_t n = samples.size();

  const Mat3 s0 = checked_initial_moment(rows, opt.execution);
  Mat3 shape = unit_determinant(s0);
  double beta = 1.0;
  Mat3 dispersion = s0;
  std::vector<double> log_u(n);

  MggdFit fit;
  auto& diag = fit.diagnostics;
  for (int outer = 1; outer <= opt.max_outer_iterations; ++outer) {
    diag.outer_iterations = outer;
    shape = iterate_shape(rows, shape, beta, opt, diag.inner_iterations);

    kernels::log_quadratic_forms(opt.execution, rows, shape.inverse(), log_u);
    const ShapeEquation equation(log_u, n, opt.execution);
    const ShapeRoot root = update_shape(equation, beta);
    diag.beta_clamped = root.clamped;

    const Mat3 next = std::exp(equation.log_scale(root.beta)) * shape;
    const bool settled = relative_change(next, dispersion) < opt.sigma_tolerance &&
                         std::abs(root.beta - beta) < opt.beta_tolerance;
    dispersion = next;
    beta = root.beta;
    if (settled) {
      fit.params = MggdParams::from_dispersion(beta, dispersion);
      return fit;
    }
  }
  throw MggdConvergenceError("MGGD estimation did not converge in " +
                                 std::to_string(opt.max_outer_iterations) + " iterations",
                             MggdParams::from_dispersion(beta, dispersion));
}

MggdParams estimate_fixed_shape(const SubbandVectors& samples, double beta,
                                const EstimateOptions& opt) {
  require_rows(samples);
  if (!(beta >= kBetaMin && beta <= kBetaMax)) {
    throw ContractError("fixed shape parameter out of [0.1, 3]");
  }
  const std::vector<double> rows = canonical_rows(samples);
  const std::size_t n = samples.size();
  const Mat3 s0 = checked_initial_moment(rows, opt.execution);
  if (beta == 1.0) return MggdParams::from_dispersion(1.0, s0);

  int iterations = 0;
  const Mat3 shape = iterate_shape(rows, unit_determinant(s0), beta, opt, iterations);
  std::vector<double> log_u(n);
  kernels::log_quadratic_forms(opt.execution, rows, shape.inverse(), log_u);
  const ShapeEquation equation(log_u, n, opt.execution);
  return MggdParams::from_dispersion(beta, std::exp(equation.log_scale(beta)) * shape);
}

SubbandVectors sample(const MggdParams& params, std::size_t n, std::uint64_t seed) {
  params.validate();
  const Eigen::LLT<Mat3> llt(params.dispersion());
  const Mat3 factor = llt.matrixL();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::gamma_distribution<double> radial(kDim / (2.0 * params.beta), 1.0);
  const double inv_two_beta = 1.0 / (2.0 * params.beta);

  SubbandVectors out(n);
  for (std::size_t i = 0; i < n; ++i) {
    Vec3 dir;
    double norm = 0.0;
    do {
      dir << normal(rng), normal(rng), normal(rng);
      norm = dir.norm();
    } while (norm == 0.0);
    const double r = std::pow(2.0 * radial(rng), inv_two_beta);
    const Vec3 x = factor * (dir * (r / norm));
    out.set_row(i, x(0), x(1), x(2));
  }
  return out;
}

double ks_adequacy(const SubbandVectors& samples, const MggdParams& params) {
  params.validate();
  if (samples.empty()) throw EstimationError("KS test on an empty sample");
  const Mat3 inverse = params.dispersion().inverse();
  std::vector<double> t(samples.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    const auto r = samples.row(i);
    const Vec3 x(r[0], r[1], r[2]);
    const double u = x.dot(inverse * x);
    if (!std::isfinite(u)) throw EstimationError("KS test on non-finite samples");
    t[i] = 0.5 * std::pow(std::max(u, 0.0), params.beta);
  }
  std::sort(t.begin(), t.end());
  const double shape = kDim / (2.0 * params.beta);
  const double n = static_cast<double>(t.size());
  double d = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double cdf = special::regularized_lower_incomplete_gamma(shape, t[i]);
    d = std::max({d, (i + 1) / n - cdf, cdf - i / n});
  }
  return d;
}

}  // namespace rriqa
