#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace rriqa {

/// n coefficient triples, one per spatial position of a sub-band, packed as
/// [c1_0, c2_0, c3_0, c1_1, ...].
class SubbandVectors {
 public:
  SubbandVectors() = default;
  explicit SubbandVectors(std::size_t n) : data_(3 * n, 0.0) {}
  explicit SubbandVectors(std::vector<double> packed);

  std::size_t size() const { return data_.size() / 3; }
  bool empty() const { return data_.empty(); }

  std::array<double, 3> row(std::size_t i) const {
    return {data_[3 * i], data_[3 * i + 1], data_[3 * i + 2]};
  }
  void set_row(std::size_t i, double a, double b, double c) {
    data_[3 * i] = a;
    data_[3 * i + 1] = b;
    data_[3 * i + 2] = c;
  }

  std::span<const double> packed() const { return data_; }
  std::span<double> packed() { return data_; }

  friend bool operator==(const SubbandVectors&, const SubbandVectors&) = default;

 private:
  std::vector<double> data_;
};

}  // namespace rriqa
