#include "levy/laplace_inversion.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "levy/error.hpp"

namespace levy {

InversionResult euler_invert(const LaplaceFn& transform, double t, const InversionParams& params) {
  if (!(t > 0.0) || std::isinf(t)) throw DomainError("euler_invert: t must be finite and > 0");
  if (params.terms < 2 || params.euler_terms < 1 || !(params.precision > 0.0 && params.precision < 1.0)) {
    throw DomainError("euler_invert: invalid inversion parameters");
  }
  const double a = -std::log(params.precision);
  const double u = std::exp(0.5 * a) / t;
  const double x = 0.5 * a / t;
  const double h = std::numbers::pi / t;
  const int n = params.terms;
  const int m = params.euler_terms;

  std::vector<double> partial(n + m + 1);
  double sum = 0.5 * transform({x, 0.0}).real();
  partial[0] = sum;
  for (int k = 1; k <= n + m; ++k) {
    const double term = transform({x, k * h}).real();
    sum += (k % 2 == 0) ? term : -term;
    partial[k] = sum;
  }

  // Binomial weights C(m, j) / 2^m.
  std::vector<double> weight(m + 1);
  weight[0] = std::ldexp(1.0, -m);
  for (int j = 1; j <= m; ++j) weight[j] = weight[j - 1] * (m - j + 1) / j;

  auto average = [&](int start) {
    double s = 0.0;
    for (int j = 0; j <= m; ++j) s += weight[j] * partial[start + j];
    return u * s;
  };
  const double value = average(n);
  const double previous = average(n - 1);
  if (!std::isfinite(value)) throw NumericalError("euler_invert: non-finite transform values");
  return {value, std::abs(value - previous)};
}

}  // namespace levy
