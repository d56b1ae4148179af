#pragma once

// Numerical inversion of Laplace transforms by the Fourier-series method of
// Abate and Whitt with Euler summation: trapezoidal rule on the Bromwich line
// Re(s) = A / (2t), A = -log(precision), followed by binomial averaging of the
// alternating tail. Only needs F on a vertical line in the right half-plane.

#include <complex>
#include <functional>

namespace levy {

struct InversionParams {
  int terms = 32;          // partial sums before averaging
  int euler_terms = 12;    // binomial averaging width
  double precision = 1e-10;  // discretisation error target, sets the abscissa
};

struct InversionResult {
  double value;
  double error;  // |E(n) - E(n-1)|, difference of consecutive Euler averages
};

using LaplaceFn = std::function<std::complex<double>(std::complex<double>)>;

/// f(t) for t > 0 from its transform F; F must be analytic for
/// Re(s) >= -log(precision) / (2t).
InversionResult euler_invert(const LaplaceFn& transform, double t,
                             const InversionParams& params = {});

}  // namespace levy
