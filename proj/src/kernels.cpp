#include "rriqa/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "kernel_rows.hpp"

namespace rriqa::kernels {
namespace {

using detail::ShapeAcc;
using detail::Sym3;

ShapeMoments to_moments(const ShapeAcc& acc) {
  ShapeMoments m;
  m.scatter << acc.xx, acc.xy, acc.xz, acc.xy, acc.yy, acc.yz, acc.xz, acc.yz, acc.zz;
  m.power_sum = acc.power;
  return m;
}

std::size_t chunk_count(std::size_t n) { return (n + kReductionChunk - 1) / kReductionChunk; }

double gap(const double* r, const Sym3& p_inv, const DensityTerms& p, const Sym3& q_inv,
           const DensityTerms& q) {
  const double up = p_inv.quadratic(r);
  const double uq = q_inv.quadratic(r);
  const double tp = up > 0.0 ? std::pow(up, p.beta) : 0.0;
  const double tq = uq > 0.0 ? std::pow(uq, q.beta) : 0.0;
  return (p.constant - q.constant) - 0.5 * tp + 0.5 * tq;
}

}  // namespace

namespace serial {

ShapeMoments shape_moments(std::span<const double> rows, const Eigen::Matrix3d& inverse,
                           double beta) {
  const Sym3 inv = Sym3::from(inverse);
  ShapeAcc acc;
  const std::size_t n = rows.size() / 3;
  for (std::size_t i = 0; i < n; ++i) acc.add(&rows[3 * i], inv, beta);
  return to_moments(acc);
}

void log_quadratic_forms(std::span<const double> rows, const Eigen::Matrix3d& inverse,
                         std::span<double> out) {
  const Sym3 inv = Sym3::from(inverse);
  const std::size_t n = rows.size() / 3;
  detail::require_output(n, out.size());
  for (std::size_t i = 0; i < n; ++i) out[i] = detail::log_quadratic(&rows[3 * i], inv);
}

LogMoments log_moments(std::span<const double> log_u, double beta, double shift) {
  LogMoments m;
  for (const double lu : log_u) {
    if (std::isinf(lu)) continue;
    const double w = std::exp(beta * (lu - shift));
    m.weight_sum += w;
    m.weighted_log += w * lu;
    m.weighted_log_sq += w * lu * lu;
  }
  return m;
}

void log_density_gaps(std::span<const double> rows, const DensityTerms& p,
                      const DensityTerms& q, std::span<double> out) {
  const Sym3 p_inv = Sym3::from(p.inverse);
  const Sym3 q_inv = Sym3::from(q.inverse);
  const std::size_t n = rows.size() / 3;
  for (std::size_t i = 0; i < n; ++i) out[i] = gap(&rows[3 * i], p_inv, p, q_inv, q);
}

double sum(std::span<const double> values) {
  double s = 0.0;
  for (const double v : values) s += v;
  return s;
}

}  // namespace serial

namespace parallel {

ShapeMoments shape_moments(std::span<const double> rows, const Eigen::Matrix3d& inverse,
                           double beta) {
  const Sym3 inv = Sym3::from(inverse);
  const std::size_t n = rows.size() / 3;
  const std::size_t chunks = chunk_count(n);
  std::vector<ShapeAcc> partial(chunks);
#pragma omp parallel for schedule(static)
  for (std::size_t c = 0; c < chunks; ++c) {
    const std::size_t end = std::min(n, (c + 1) * kReductionChunk);
    ShapeAcc acc;
    for (std::size_t i = c * kReductionChunk; i < end; ++i) acc.add(&rows[3 * i], inv, beta);
    partial[c] = acc;
  }
  ShapeAcc total;
  for (const ShapeAcc& p : partial) total.merge(p);
  return to_moments(total);
}

void log_quadratic_forms(std::span<const double> rows, const Eigen::Matrix3d& inverse,
                         std::span<double> out) {
  const Sym3 inv = Sym3::from(inverse);
  const std::size_t n = rows.size() / 3;
  detail::require_output(n, out.size());
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < n; ++i) out[i] = detail::log_quadratic(&rows[3 * i], inv);
}

LogMoments log_moments(std::span<const double> log_u, double beta, double shift) {
  const std::size_t n = log_u.size();
  const std::size_t chunks = chunk_count(n);
  std::vector<LogMoments> partial(chunks);
#pragma omp parallel for schedule(static)
  for (std::size_t c = 0; c < chunks; ++c) {
    const std::size_t begin = c * kReductionChunk;
    const std::size_t end = std::min(n, begin + kReductionChunk);
    partial[c] = serial::log_moments(log_u.subspan(begin, end - begin), beta, shift);
  }
  LogMoments total;
  for (const LogMoments& p : partial) {
    total.weight_sum += p.weight_sum;
    total.weighted_log += p.weighted_log;
    total.weighted_log_sq += p.weighted_log_sq;
  }
  return total;
}

void log_density_gaps(std::span<const double> rows, const DensityTerms& p,
                      const DensityTerms& q, std::span<double> out) {
  const Sym3 p_inv = Sym3::from(p.inverse);
  const Sym3 q_inv = Sym3::from(q.inverse);
  const std::size_t n = rows.size() / 3;
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < n; ++i) out[i] = gap(&rows[3 * i], p_inv, p, q_inv, q);
}

double sum(std::span<const double> values) {
  const std::size_t n = values.size();
  const std::size_t chunks = chunk_count(n);
  std::vector<double> partial(chunks);
#pragma omp parallel for schedule(static)
  for (std::size_t c = 0; c < chunks; ++c) {
    const std::size_t begin = c * kReductionChunk;
    const std::size_t end = std::min(n, begin + kReductionChunk);
    partial[c] = serial::sum(values.subspan(begin, end - begin));
  }
  double total = 0.0;
  for (const double p : partial) total += p;
  return total;
}

}  // namespace parallel

ShapeMoments shape_moments(Execution exec, std::span<const double> rows,
                           const Eigen::Matrix3d& inverse, double beta) {
  return exec == Execution::serial ? serial::shape_moments(rows, inverse, beta)
                                   : parallel::shape_moments(rows, inverse, beta);
}

void log_quadratic_forms(Execution exec, std::span<const double> rows,
                         const Eigen::Matrix3d& inverse, std::span<double> out) {
  if (exec == Execution::serial) {
    serial::log_quadratic_forms(rows, inverse, out);
  } else {
    parallel::log_quadratic_forms(rows, inverse, out);
  }
}

LogMoments log_moments(Execution exec, std::span<const double> log_u, double beta,
                       double shift) {
  return exec == Execution::serial ? serial::log_moments(log_u, beta, shift)
                                   : parallel::log_moments(log_u, beta, shift);
}

void log_density_gaps(Execution exec, std::span<const double> rows, const DensityTerms& p,
                      const DensityTerms& q, std::span<double> out) {
  if (exec == Execution::serial) {
    serial::log_density_gaps(rows, p, q, out);
  } else {
    parallel::log_density_gaps(rows, p, q, out);
  }
}

double sum(Execution exec, std::span<const double> values) {
  return exec == Execution::serial ? serial::sum(values) : parallel::sum(values);
}

}  // namespace rriqa::kernels
