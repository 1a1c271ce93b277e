#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include <Eigen/LU>

#include "rriqa/kernels.hpp"
#include "rriqa/mggd.hpp"
#include "test_support.hpp"

using namespace rriqa;

namespace {

std::vector<double> random_rows(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const SubbandVectors s = sample(testing::random_params(rng), n, seed);
  return {s.packed().begin(), s.packed().end()};
}

bool close(double a, double b, double rel) { return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b)); }

}  // namespace

TEST_SUITE("kernels") {
  TEST_CASE("serial and parallel shape moments agree") {
    const std::vector<double> rows = random_rows(50001, 1);
    std::mt19937_64 rng(2);
    const Mat3 inv = testing::random_spd(rng).inverse();
    for (double beta : {0.2, 0.7, 1.0, 2.5}) {
      const auto a = kernels::serial::shape_moments(rows, inv, beta);
      const auto b = kernels::parallel::shape_moments(rows, inv, beta);
      CHECK(close(a.power_sum, b.power_sum, 1e-12));
      CHECK((a.scatter - b.scatter).norm() <= 1e-12 * a.scatter.norm());
    }
  }

  TEST_CASE("serial and parallel log moments and sums agree") {
    const std::vector<double> rows = random_rows(10000, 3);
    std::vector<double> lu_s(10000), lu_p(10000);
    const Mat3 inv = Mat3::Identity();
    kernels::serial::log_quadratic_forms(rows, inv, lu_s);
    kernels::parallel::log_quadratic_forms(rows, inv, lu_p);
    CHECK(lu_s == lu_p);
    const auto a = kernels::serial::log_moments(lu_s, 0.4, 2.0);
    const auto b = kernels::parallel::log_moments(lu_s, 0.4, 2.0);
    CHECK(close(a.weight_sum, b.weight_sum, 1e-12));
    CHECK(close(a.weighted_log, b.weighted_log, 1e-12));
    CHECK(close(a.weighted_log_sq, b.weighted_log_sq, 1e-12));
    CHECK(close(kernels::serial::sum(lu_s), kernels::parallel::sum(lu_s), 1e-12));
  }

  TEST_CASE("parallel reductions are reproducible") {
    const std::vector<double> rows = random_rows(70000, 4);
    const auto a = kernels::parallel::shape_moments(rows, Mat3::Identity(), 0.5);
    const auto b = kernels::parallel::shape_moments(rows, Mat3::Identity(), 0.5);
    CHECK(a.power_sum == b.power_sum);
    CHECK(a.scatter == b.scatter);
  }

  TEST_CASE("density gaps match log_density") {
    std::mt19937_64 rng(5);
    const MggdParams p = testing::random_params(rng), q = testing::random_params(rng);
    const SubbandVectors s = sample(p, 2000, 6);
    const kernels::DensityTerms tp{p.dispersion().inverse(), p.beta, log_normalizer(p)};
    const kernels::DensityTerms tq{q.dispersion().inverse(), q.beta, log_normalizer(q)};
    std::vector<double> ser(s.size()), par(s.size());
    kernels::serial::log_density_gaps(s.packed(), tp, tq, ser);
    kernels::parallel::log_density_gaps(s.packed(), tp, tq, par);
    CHECK(ser == par);
    for (std::size_t i = 0; i < s.size(); i += 97) {
      const auto r = s.row(i);
      const Vec3 x(r[0], r[1], r[2]);
      CHECK(ser[i] == doctest::Approx(log_density(p, x) - log_density(q, x)).epsilon(1e-10));
    }
  }

  TEST_CASE("estimation is identical up to round-off in both modes") {
    std::mt19937_64 rng(7);
    const SubbandVectors s = sample(testing::random_params(rng, 0.4, 1.6), 20000, 8);
    EstimateOptions serial_opt, parallel_opt;
    serial_opt.execution = Execution::serial;
    parallel_opt.execution = Execution::parallel;
    const MggdParams a = estimate(s, serial_opt), b = estimate(s, parallel_opt);
    CHECK(std::abs(a.beta - b.beta) < 1e-9);
    CHECK((a.dispersion() - b.dispersion()).norm() < 1e-9 * a.dispersion().norm());
  }
}
