#pragma once

// Per-row arithmetic shared by the serial and parallel kernels so that both
// evaluate identical expressions and differ only in summation order.

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Core>

#include "rriqa/error.hpp"

namespace rriqa::kernels::detail {

/// Upper triangle of a symmetric 3x3 matrix.
struct Sym3 {
  double xx, xy, xz, yy, yz, zz;

  static Sym3 from(const Eigen::Matrix3d& m) {
    return {m(0, 0), 0.5 * (m(0, 1) + m(1, 0)), 0.5 * (m(0, 2) + m(2, 0)),
            m(1, 1), 0.5 * (m(1, 2) + m(2, 1)), m(2, 2)};
  }

  double quadratic(const double* r) const {
    const double x = r[0], y = r[1], z = r[2];
    return xx * x * x + yy * y * y + zz * z * z + 2.0 * (xy * x * y + xz * x * z + yz * y * z);
  }
};

/// Running sums of one chunk of shape_moments.
struct ShapeAcc {
  double xx = 0, xy = 0, xz = 0, yy = 0, yz = 0, zz = 0, power = 0;

  void add(const double* r, const Sym3& inv, double beta) {
    const double u = inv.quadratic(r);
    if (!(u > 0.0)) return;
    const double w = std::exp((beta - 1.0) * std::log(u));
    const double x = r[0], y = r[1], z = r[2];
    xx += w * x * x;
    xy += w * x * y;
    xz += w * x * z;
    yy += w * y * y;
    yz += w * y * z;
    zz += w * z * z;
    power += w * u;
  }

  void merge(const ShapeAcc& o) {
    xx += o.xx; xy += o.xy; xz += o.xz; yy += o.yy; yz += o.yz; zz += o.zz;
    power += o.power;
  }
};

inline void require_output(std::size_t rows, std::size_t out) {
  if (out != rows) {
    throw ContractError("log_quadratic_forms: output holds " + std::to_string(out) +
                        " values for " + std::to_string(rows) + " rows");
  }
}

inline double log_quadratic(const double* r, const Sym3& inv) {
  const double u = inv.quadratic(r);
  return u > 0.0 ? std::log(u) : -std::numeric_limits<double>::infinity();
}

}  // namespace rriqa::kernels::detail
