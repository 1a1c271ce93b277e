#pragma once

// Scalar special functions used by the MGGD density, its maximum-likelihood
// equations, the closed-form divergence and the goodness-of-fit test.
//
// All functions are pure and thread-safe. Arguments outside the documented
// domain raise rriqa::DomainError.

namespace rriqa::special {

/// Gamma function for x > 0 (Lanczos, g = 7). Relative error below 1e-13 on
/// [0.05, 50].
double gamma_fn(double x);

/// Natural log of the gamma function for x > 0.
double log_gamma(double x);

/// Digamma function psi(x) = d/dx ln Gamma(x) for x > 0.
double digamma(double x);

/// psi'(x) for x > 0.
double trigamma(double x);

/// Gauss hypergeometric function 2F1(a, b; c; z) for |z| < 1.
///
/// Summed as a power series until two consecutive terms fall below
/// 1e-16 of the partial sum. Negative arguments are first mapped into
/// (0, 1/2) with the Pfaff transformation. Throws ConvergenceError when the
/// series needs more than 10000 terms.
double gauss_2f1(double a, double b, double c, double z);

/// Regularized lower incomplete gamma P(s, x) for s > 0, x >= 0.
double regularized_lower_incomplete_gamma(double s, double x);

}  // namespace rriqa::special
