#include "rriqa/logistic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "rriqa/error.hpp"

namespace rriqa {

double logistic_fn(double tau, double q) { return 0.5 * std::tanh(0.5 * tau * q); }

NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                             std::vector<double> x0, std::span<const double> steps,
                             const NelderMeadOptions& options) {
  const std::size_t n = x0.size();
  if (steps.size() != n || n == 0) throw ContractError("simplex steps must match the dimension");

  std::vector<std::vector<double>> pts(n + 1, x0);
  for (std::size_t i = 0; i < n; ++i) pts[i + 1][i] += steps[i];
  std::vector<double> vals(n + 1);
  for (std::size_t i = 0; i <= n; ++i) vals[i] = f(pts[i]);

  std::vector<std::size_t> idx(n + 1);
  const auto order = [&] {
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
  };
  const auto diameter = [&] {
    double d = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
      for (std::size_t j = i + 1; j <= n; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < n; ++k) s += (pts[i][k] - pts[j][k]) * (pts[i][k] - pts[j][k]);
        d = std::max(d, std::sqrt(s));
      }
    }
    return d;
  };
  const auto flat = [&] {
    const double lo = vals[idx[0]], hi = vals[idx[n]];
    return options.value_tolerance > 0.0 &&
           hi - lo <= options.value_tolerance * std::max(1.0, std::abs(lo));
  };
  const auto along = [&](const std::vector<double>& c, const std::vector<double>& w, double t) {
    std::vector<double> p(n);
    for (std::size_t k = 0; k < n; ++k) p[k] = c[k] + t * (w[k] - c[k]);
    return p;
  };

  NelderMeadResult out;
  order();
  std::vector<double> centroid(n);
  while (out.iterations < options.max_iterations) {
    if (diameter() < options.diameter_tolerance || flat()) {
      out.converged = true;
      break;
    }
    ++out.iterations;
    const std::size_t best = idx[0], worst = idx[n], second = idx[n - 1];
    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) centroid[k] += pts[idx[i]][k] / static_cast<double>(n);
    }

    const std::vector<double> xr = along(centroid, pts[worst], -1.0);
    const double fr = f(xr);
    if (fr < vals[best]) {
      const std::vector<double> xe = along(centroid, pts[worst], -2.0);
      const double fe = f(xe);
      if (fe < fr) {
        pts[worst] = xe;
        vals[worst] = fe;
      } else {
        pts[worst] = xr;
        vals[worst] = fr;
      }
    } else if (fr < vals[second]) {
      pts[worst] = xr;
      vals[worst] = fr;
    } else {
      const bool outside = fr < vals[worst];
      const std::vector<double> xc = along(centroid, outside ? xr : pts[worst], 0.5);
      const double fc = f(xc);
      if (fc < (outside ? fr : vals[worst])) {
        pts[worst] = xc;
        vals[worst] = fc;
      } else {
        for (std::size_t i = 1; i <= n; ++i) {
          pts[idx[i]] = along(pts[best], pts[idx[i]], 0.5);
          vals[idx[i]] = f(pts[idx[i]]);
        }
      }
    }
    order();
    out.best_trace.push_back(vals[idx[0]]);
  }
  if (!out.converged && (diameter() < options.diameter_tolerance || flat())) out.converged = true;
  out.x = pts[idx[0]];
  out.value = vals[idx[0]];
  return out;
}

double LogisticFit::predict(double q) const {
  return b[0] * logistic_fn(b[1], q - b[2]) + b[3] * q + b[4];
}

std::vector<double> LogisticFit::predict(std::span<const double> q) const {
  std::vector<double> out(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) out[i] = predict(q[i]);
  return out;
}

LogisticFit fit_logistic(std::span<const double> q, std::span<const double> mos,
                         const LogisticFitOptions& options) {
  if (q.size() != mos.size()) throw ContractError("q and mos differ in length");
  if (q.size() < 10) {
    throw ContractError("logistic fit needs at least 10 pairs, got " + std::to_string(q.size()));
  }
  const std::size_t n = q.size();
  const auto moments = [n](std::span<const double> v) {
    const double m = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(n);
    double s = 0.0;
    for (const double x : v) s += (x - m) * (x - m);
    return std::pair{m, std::sqrt(s / static_cast<double>(n))};
  };
  const auto [mq, sq] = moments(q);
  const auto [mm, sm] = moments(mos);
  if (!(sq > 0.0) || !(sm > 0.0)) {
    throw DegenerateDataError("degenerate fit: q or mos is constant");
  }

  // Work on standardized data so the simplex steps are scale-free.
  std::vector<double> zq(n), zm(n);
  double r = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    zq[i] = (q[i] - mq) / sq;
    zm[i] = (mos[i] - mm) / sm;
    r += zq[i] * zm[i];
  }
  r /= static_cast<double>(n);
  const double sign = r < 0.0 ? -1.0 : 1.0;

  // Small or flat data sets have minimizing sequences that run off to
  // infinity (a step with tau -> inf, or a straight line with tau -> 0 and
  // b1 -> inf). Standardized coordinates are held in a wide box, so the loss
  // is flat outside it and the simplex can still contract.
  static constexpr double kBox = 1e2;
  const auto boxed = [](std::span<const double> c) {
    std::array<double, 5> out;
    for (std::size_t k = 0; k < 5; ++k) out[k] = std::clamp(c[k], -kBox, kBox);
    return out;
  };
  const auto loss = [&](std::span<const double> raw) {
    const std::array<double, 5> c = boxed(raw);
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double e = c[0] * logistic_fn(c[1], zq[i] - c[2]) + c[3] * zq[i] + c[4] - zm[i];
      s += e * e;
    }
    return std::isfinite(s) ? s : std::numeric_limits<double>::max();
  };

  std::vector<std::vector<double>> starts = {
      {0.0, 1.0, 0.0, r, 0.0},
      {2.0 * sign, 2.0, 0.0, 0.0, 0.0},
      {4.0 * sign, 1.0, 0.5, 0.0, 0.0},
      {2.0 * sign, 4.0, -0.5, 0.5 * r, 0.0},
      {1.0 * sign, 0.5, 0.0, 0.5 * r, 0.0},
  };
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> jitter(0.0, 0.05);
  const int count = std::max(1, options.starts);
  while (static_cast<int>(starts.size()) < count) {
    starts.push_back({2.0 * sign, 1.0 + static_cast<double>(starts.size()) * 0.5, 0.0, 0.0, 0.0});
  }
  starts.resize(static_cast<std::size_t>(count));
  for (std::size_t s = 1; s < starts.size(); ++s) {
    for (double& c : starts[s]) c += jitter(rng);
  }

  NelderMeadResult best;
  best.value = std::numeric_limits<double>::infinity();
  for (const std::vector<double>& x0 : starts) {
    std::vector<double> steps(5);
    for (std::size_t k = 0; k < 5; ++k) steps[k] = x0[k] != 0.0 ? 0.1 * std::abs(x0[k]) : 0.05;
    NelderMeadResult res = nelder_mead(loss, x0, steps, options.simplex);
    if (res.value < best.value) best = std::move(res);
  }

  const std::array<double, 5> c = boxed(best.x);
  LogisticFit fit;
  fit.b[0] = sm * c[0];
  fit.b[1] = c[1] / sq;
  fit.b[2] = mq + sq * c[2];
  fit.b[3] = sm * c[3] / sq;
  fit.b[4] = mm + sm * c[4] - fit.b[3] * mq;
  fit.converged = best.converged;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = fit.predict(q[i]) - mos[i];
    fit.residual += e * e;
  }
  return fit;
}

}  // namespace rriqa
