#pragma once

#include <span>
#include <vector>

namespace rriqa {

/// Pearson linear correlation. Throws ContractError on mismatched or short
/// input and DegenerateDataError when either side is constant.
double plcc(std::span<const double> a, std::span<const double> b);

/// Spearman rank correlation with average ranks for ties.
double srcc(std::span<const double> a, std::span<const double> b);

/// Fractional ranks, 1-based; tied values share the mean of their positions.
std::vector<double> average_ranks(std::span<const double> values);

}  // namespace rriqa
