#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace rriqa {

/// 1/2 - 1/(1 + exp(tau q)), evaluated as tanh(tau q / 2) / 2.
double logistic_fn(double tau, double q);

struct NelderMeadOptions {
  int max_iterations = 5000;
  double diameter_tolerance = 1e-8;
  /// Also stop once all vertex values agree to this relative spread; the
  /// simplex can creep forever along a valley that is flat to rounding.
  /// Zero disables the test.
  double value_tolerance = 1e-14;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> best_trace;  ///< best vertex value after each iteration
};

/// Downhill simplex with reflection 1, expansion 2, contraction 1/2 and
/// shrink 1/2. `steps` gives the initial simplex edge per coordinate.
NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                             std::vector<double> x0, std::span<const double> steps,
                             const NelderMeadOptions& options = {});

/// DMOS_p(q) = b1 logistic(b2, q - b3) + b4 q + b5.
struct LogisticFit {
  std::array<double, 5> b{};
  double residual = 0.0;  ///< sum of squared errors on the training data
  bool converged = false;

  double predict(double q) const;
  std::vector<double> predict(std::span<const double> q) const;
};

struct LogisticFitOptions {
  int starts = 5;
  std::uint64_t seed = 0;
  NelderMeadOptions simplex;
};

/// Least-squares fit by multi-start Nelder-Mead. One start is the best
/// straight line (b1 = 0), so the result is never worse than linear
/// regression. Throws ContractError below 10 pairs and DegenerateDataError
/// if q or mos is constant.
LogisticFit fit_logistic(std::span<const double> q, std::span<const double> mos,
                         const LogisticFitOptions& options = {});

}  // namespace rriqa
