#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "rriqa/error.hpp"
#include "rriqa/special.hpp"

using namespace rriqa;

namespace {

constexpr double kEuler = 0.57721566490153286061;

// Plain power series of 2F1 in long double, run until terms vanish.
double brute_2f1(double a, double b, double c, double z) {
  long double term = 1.0L, sum = 1.0L;
  for (int k = 0; k < 200000; ++k) {
    term *= (static_cast<long double>(a) + k) * (static_cast<long double>(b) + k) /
            ((static_cast<long double>(c) + k) * (k + 1.0L)) * z;
    sum += term;
    if (std::fabs(term) < 1e-22L * std::fabs(sum)) break;
  }
  return static_cast<double>(sum);
}

// Composite Simpson of t^(s-1) e^(-t) / Gamma(s) on [0, x].
double quadrature_lower_gamma(double s, double x) {
  // Simpson's rule; for s < 1 the substitution v = t^s removes the endpoint singularity.
  const int n = 200000;
  const double top = s < 1.0 ? std::pow(x, s) : x;
  const double h = top / n;
  const auto f = [s](double v) {
    return s < 1.0 ? std::exp(-std::pow(v, 1.0 / s)) / s : std::pow(v, s - 1.0) * std::exp(-v);
  };
  double acc = f(0.0) + f(top);
  for (int i = 1; i < n; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(i * h);
  return acc * h / 3.0 / std::tgamma(s);
}

}  // namespace

TEST_SUITE("special") {
  TEST_CASE("gamma at known points") {
    CHECK(special::gamma_fn(1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(special::gamma_fn(0.5) == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-13));
    CHECK(special::gamma_fn(4.0) == doctest::Approx(6.0).epsilon(1e-13));
    CHECK_THROWS_AS(special::gamma_fn(0.0), DomainError);
    CHECK_THROWS_AS(special::gamma_fn(-1.5), DomainError);
  }

  TEST_CASE("gamma recurrence and agreement with std::tgamma") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> x(0.1, 20.0);
    for (int i = 0; i < 200; ++i) {
      const double v = x(rng);
      CHECK(special::gamma_fn(v + 1.0) == doctest::Approx(v * special::gamma_fn(v)).epsilon(1e-12));
      CHECK(special::gamma_fn(v) == doctest::Approx(std::tgamma(v)).epsilon(1e-12));
      CHECK(special::log_gamma(v) == doctest::Approx(std::lgamma(v)).epsilon(1e-12));
    }
    CHECK(special::gamma_fn(0.05) == doctest::Approx(std::tgamma(0.05)).epsilon(1e-13));
  }

  TEST_CASE("log_gamma stays finite where gamma overflows") {
    CHECK(std::isfinite(special::log_gamma(300.0)));
    CHECK(special::log_gamma(300.0) == doctest::Approx(std::lgamma(300.0)).epsilon(1e-13));
  }

  TEST_CASE("digamma at known points") {
    CHECK(special::digamma(1.0) == doctest::Approx(-kEuler).epsilon(1e-13));
    CHECK(special::digamma(2.0) == doctest::Approx(1.0 - kEuler).epsilon(1e-13));
    // psi(1/2) = -gamma - 2 ln 2
    CHECK(special::digamma(0.5) ==
          doctest::Approx(-kEuler - 2.0 * std::numbers::ln2).epsilon(1e-13));
    CHECK(special::digamma(0.5) == doctest::Approx(-1.9635100260).epsilon(1e-10));
    CHECK_THROWS_AS(special::digamma(0.0), DomainError);
  }

  TEST_CASE("digamma recurrence and derivative of log_gamma") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> x(0.05, 30.0);
    for (int i = 0; i < 200; ++i) {
      const double v = x(rng);
      CHECK(std::abs(special::digamma(v + 1.0) - special::digamma(v) - 1.0 / v) < 1e-10);
      const double h = 1e-5 * std::max(1.0, v);
      const double numeric = (std::lgamma(v + h) - std::lgamma(v - h)) / (2.0 * h);
      CHECK(special::digamma(v) == doctest::Approx(numeric).epsilon(1e-7));
    }
  }

  TEST_CASE("trigamma") {
    CHECK(special::trigamma(1.0) ==
          doctest::Approx(std::numbers::pi * std::numbers::pi / 6.0).epsilon(1e-13));
    CHECK(special::trigamma(0.5) ==
          doctest::Approx(std::numbers::pi * std::numbers::pi / 2.0).epsilon(1e-13));
    for (double v : {0.3, 1.7, 4.2, 15.0, 60.0}) {
      const double h = 1e-5 * v;
      const double numeric = (special::digamma(v + h) - special::digamma(v - h)) / (2.0 * h);
      CHECK(special::trigamma(v) == doctest::Approx(numeric).epsilon(1e-7));
    }
  }

  TEST_CASE("2F1 closed forms and series oracle") {
    CHECK(special::gauss_2f1(0.3, -1.2, 2.0, 0.0) == 1.0);
    CHECK(special::gauss_2f1(1.0, 1.0, 2.0, 0.5) ==
          doctest::Approx(2.0 * std::numbers::ln2).epsilon(1e-14));
    CHECK(special::gauss_2f1(-0.25, -0.25, 1.0, 0.3) ==
          doctest::Approx(brute_2f1(-0.25, -0.25, 1.0, 0.3)).epsilon(1e-14));
    // (1 - z)^(-a) = 2F1(a, b; b; z)
    CHECK(special::gauss_2f1(0.7, 1.3, 1.3, 0.6) ==
          doctest::Approx(std::pow(0.4, -0.7)).epsilon(1e-13));
    // negative argument goes through the Pfaff transformation
    CHECK(special::gauss_2f1(1.0, 1.0, 2.0, -0.5) ==
          doctest::Approx(std::log(1.5) / 0.5).epsilon(1e-13));
    CHECK(special::gauss_2f1(-0.4, -0.7, 1.0, -0.8) ==
          doctest::Approx(brute_2f1(-0.4, -0.7, 1.0, -0.8)).epsilon(1e-12));
  }

  TEST_CASE("2F1 symmetry in a and b") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> p(-1.5, 1.5), z(-0.9, 0.9);
    for (int i = 0; i < 100; ++i) {
      const double a = p(rng), b = p(rng), x = z(rng);
      CHECK(special::gauss_2f1(a, b, 1.0, x) ==
            doctest::Approx(special::gauss_2f1(b, a, 1.0, x)).epsilon(1e-12));
    }
  }

  TEST_CASE("2F1 domain and convergence errors") {
    CHECK_THROWS_AS(special::gauss_2f1(1, 1, 2, 1.0), DomainError);
    CHECK_THROWS_AS(special::gauss_2f1(1, 1, 2, -1.0), DomainError);
    CHECK_THROWS_AS(special::gauss_2f1(1, 1, -2.0, 0.5), DomainError);
    CHECK_THROWS_AS(special::gauss_2f1(1, 1, 0.0, 0.5), DomainError);
    CHECK_THROWS_AS(special::gauss_2f1(5.0, 5.0, 1.0, 0.9999), ConvergenceError);
  }

  TEST_CASE("regularized lower incomplete gamma") {
    CHECK(special::regularized_lower_incomplete_gamma(1.0, 1.0) ==
          doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-12));
    CHECK(special::regularized_lower_incomplete_gamma(2.5, 0.0) == 0.0);
    CHECK(std::abs(special::regularized_lower_incomplete_gamma(2.5, 3.0) -
                   quadrature_lower_gamma(2.5, 3.0)) < 1e-10);
    CHECK(std::abs(special::regularized_lower_incomplete_gamma(0.8, 6.0) -
                   quadrature_lower_gamma(0.8, 6.0)) < 1e-6);  // singular integrand
    CHECK(std::abs(special::regularized_lower_incomplete_gamma(7.5, 11.0) -
                   quadrature_lower_gamma(7.5, 11.0)) < 1e-10);
    CHECK(special::regularized_lower_incomplete_gamma(1.5, 200.0) == doctest::Approx(1.0));
    CHECK_THROWS_AS(special::regularized_lower_incomplete_gamma(0.0, 1.0), DomainError);
    CHECK_THROWS_AS(special::regularized_lower_incomplete_gamma(1.0, -1.0), DomainError);
  }

  TEST_CASE("incomplete gamma is nondecreasing") {
    for (double s : {0.05, 0.5, 1.5, 5.0, 30.0}) {
      double prev = 0.0;
      for (int i = 0; i <= 400; ++i) {
        const double p = special::regularized_lower_incomplete_gamma(s, 0.1 * i);
        CHECK(p >= prev);
        CHECK(p <= 1.0);
        prev = p;
      }
    }
  }
}
