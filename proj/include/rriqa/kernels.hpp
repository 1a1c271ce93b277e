#pragma once

// Inner loops of the estimator and of the Monte-Carlo divergence.
//
// Every kernel exists twice: `serial` is the plain sequential loop kept as
// the reference, `parallel` is the OpenMP version with fixed-shape chunked
// reductions. Rows are packed triples: rows[3*i .. 3*i+2].

#include <span>

#include <Eigen/Core>

#include "rriqa/execution.hpp"

namespace rriqa::kernels {

/// Sums needed by one fixed-point step for a fixed shape parameter.
struct ShapeMoments {
  Eigen::Matrix3d scatter = Eigen::Matrix3d::Zero();  ///< sum u^(beta-1) x x'
  double power_sum = 0.0;                             ///< sum u^beta
};

/// Max-shifted moments of u^beta, computed from log u.
/// weight_i = exp(beta * (log_u_i - shift)); rows with log u = -inf weigh 0.
struct LogMoments {
  double weight_sum = 0.0;      ///< sum weight_i
  double weighted_log = 0.0;    ///< sum weight_i * log_u_i
  double weighted_log_sq = 0.0; ///< sum weight_i * log_u_i^2
};

/// Parameters of one zero-mean MGGD log-density: constant - 0.5 * u^beta,
/// u = x' inverse x.
struct DensityTerms {
  Eigen::Matrix3d inverse;
  double beta;
  double constant;
};

namespace serial {
ShapeMoments shape_moments(std::span<const double> rows, const Eigen::Matrix3d& inverse,
                           double beta);
void log_quadratic_forms(std::span<const double> rows, const Eigen::Matrix3d& inverse,
                         std::span<double> out);
LogMoments log_moments(std::span<const double> log_u, double beta, double shift);
void log_density_gaps(std::span<const double> rows, const DensityTerms& p,
                      const DensityTerms& q, std::span<double> out);
double sum(std::span<const double> values);
}  // namespace serial

namespace parallel {
ShapeMoments shape_moments(std::span<const double> rows, const Eigen::Matrix3d& inverse,
                           double beta);
void log_quadratic_forms(std::span<const double> rows, const Eigen::Matrix3d& inverse,
                         std::span<double> out);
LogMoments log_moments(std::span<const double> log_u, double beta, double shift);
void log_density_gaps(std::span<const double> rows, const DensityTerms& p,
                      const DensityTerms& q, std::span<double> out);
double sum(std::span<const double> values);
}  // namespace parallel

// Dispatch helpers.
ShapeMoments shape_moments(Execution exec, std::span<const double> rows,
                           const Eigen::Matrix3d& inverse, double beta);
void log_quadratic_forms(Execution exec, std::span<const double> rows,
                         const Eigen::Matrix3d& inverse, std::span<double> out);
LogMoments log_moments(Execution exec, std::span<const double> log_u, double beta,
                       double shift);
void log_density_gaps(Execution exec, std::span<const double> rows, const DensityTerms& p,
                      const DensityTerms& q, std::span<double> out);
double sum(Execution exec, std::span<const double> values);

}  // namespace rriqa::kernels
