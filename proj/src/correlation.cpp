#include "rriqa/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "rriqa/error.hpp"

namespace rriqa {
namespace {

void check_pair(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw ContractError("correlation inputs differ in length (" + std::to_string(a.size()) +
                        " vs " + std::to_string(b.size()) + ")");
  }
  if (a.size() < 2) throw ContractError("correlation needs at least two pairs");
}

double mean(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

double plcc(std::span<const double> a, std::span<const double> b) {
  check_pair(a, b);
  const double ma = mean(a);
  const double mb = mean(b);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0) {
    throw DegenerateDataError("correlation undefined for constant input");
  }
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return values[i] < values[j]; });
  std::vector<double> ranks(values.size());
  for (std::size_t lo = 0; lo < order.size();) {
    std::size_t hi = lo + 1;
    while (hi < order.size() && values[order[hi]] == values[order[lo]]) ++hi;
    const double rank = 0.5 * static_cast<double>(lo + 1 + hi);
    for (std::size_t k = lo; k < hi; ++k) ranks[order[k]] = rank;
    lo = hi;
  }
  return ranks;
}

double srcc(std::span<const double> a, std::span<const double> b) {
  check_pair(a, b);
  const std::vector<double> ra = average_ranks(a);
  const std::vector<double> rb = average_ranks(b);
  const auto has_ties = [](std::vector<double> r) {
    std::sort(r.begin(), r.end());
    return std::adjacent_find(r.begin(), r.end()) != r.end();
  };
  if (has_ties(ra) || has_ties(rb)) return plcc(ra, rb);

  // Without ties the rank-difference form is exact.
  const double n = static_cast<double>(a.size());
  double d2 = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) d2 += (ra[i] - rb[i]) * (ra[i] - rb[i]);
  return 1.0 - 6.0 * d2 / (n * (n * n - 1.0));
}

}  // namespace rriqa
