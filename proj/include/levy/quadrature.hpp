#pragma once

// Thin wrappers over Boost.Math quadrature that turn a missed tolerance into
// a NumericalError instead of a silently inaccurate number.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "levy/error.hpp"

namespace levy::quad {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

namespace detail {

template <class T>
double magnitude(const T& v) {
  return std::abs(v);
}

inline void check(const char* who, double value_mag, double error, double l1,
                  double tol, double accept, double abs_tol = 0.0) {
  if (!std::isfinite(error) || !std::isfinite(value_mag)) {
    throw NumericalError(std::string(who) + ": non-finite quadrature result");
  }
  const double scale = std::max(l1, std::numeric_limits<double>::min());
  if (error > accept * std::max({tol * scale, abs_tol, 1e-300})) {
    throw NumericalError(std::string(who) + ": quadrature did not converge (error estimate " +
                         std::to_string(error) + ", L1 norm " + std::to_string(l1) +
                         ", requested relative tolerance " + std::to_string(tol) + ")");
  }
}

}  // namespace detail

/// Adaptive 31-point Gauss-Kronrod on [a, b]; either bound may be infinite.
/// Works for real and complex integrands. An error below abs_tol is accepted
/// whatever the size of the integral.
template <class F>
auto kronrod(F f, double a, double b, double tol = 1e-12, unsigned max_depth = 18,
             double accept = 1e3, double abs_tol = 0.0) {
  double error = 0.0;
  double l1 = 0.0;
  auto v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, max_depth, tol,
                                                                         &error, &l1);
  detail::check("gauss-kronrod", detail::magnitude(v), error, l1, tol, accept, abs_tol);
  return v;
}

template <class T>
struct Estimate {
  T value;
  double error;
};

/// Same rule as kronrod() but returns the error estimate instead of judging it.
template <class F>
auto kronrod_estimate(F f, double a, double b, double tol = 1e-12, unsigned max_depth = 15) {
  double error = 0.0;
  auto v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, max_depth, tol,
                                                                         &error);
  return Estimate<decltype(v)>{v, error};
}

/// Double-exponential rule on a finite interval; tolerates integrable
/// endpoint singularities.
template <class F>
double tanh_sinh(F f, double a, double b, double tol = 1e-12, double accept = 1e3) {
  static thread_local boost::math::quadrature::tanh_sinh<double> rule;
  double error = 0.0;
  double l1 = 0.0;
  std::size_t levels = 0;
  const double v = rule.integrate(f, a, b, tol, &error, &l1, &levels);
  detail::check("tanh-sinh", std::abs(v), error, l1, tol, accept);
  return v;
}

/// Double-exponential rule on [a, inf).
template <class F>
double exp_sinh(F f, double a, double tol = 1e-12, double accept = 1e3) {
  static thread_local boost::math::quadrature::exp_sinh<double> rule;
  double error = 0.0;
  double l1 = 0.0;
  std::size_t levels = 0;
  const double v = rule.integrate(f, a, kInf, tol, &error, &l1, &levels);
  detail::check("exp-sinh", std::abs(v), error, l1, tol, accept);
  return v;
}

}  // namespace levy::quad
