#pragma once

// Right inverse Phi(q) = sup{theta >= 0 : psi(theta) = q} of the Laplace
// exponent, its derivatives in q, eta(q) = q / Phi(q) and the exponent
// phi(theta) = psi(theta) / theta of the conjugate (killed) subordinator.

#include <span>

#include "levy/model.hpp"

namespace levy {

class InverseExponent {
 public:
  explicit InverseExponent(LevyModel model, double tolerance = 1e-12);

  const LevyModel& model() const { return model_; }
  Regime regime() const { return regime_; }
  double tolerance() const { return tolerance_; }

  /// Minimiser of psi when the model drifts down, 0 otherwise.
  double argmin() const { return argmin_; }

  double phi(double q) const;
  /// d^n/dq^n Phi(q), 1 <= n <= 10. q == 0 means the right limit and is only
  /// accepted for models drifting up.
  double phi_derivative(double q, int n) const;
  double eta(double q) const;
  double conjugate_exponent(double theta) const;

 private:
  double largest_root(double q, double lo) const;

  LevyModel model_;
  double tolerance_;
  Regime regime_;
  double argmin_ = 0.0;
  double phi_zero_ = 0.0;
};

/// Partial Bell polynomial B_{n,k}(x_1, ..., x_{n-k+1}); x[0] holds x_1.
double partial_bell(int n, int k, std::span<const double> x);

}  // namespace levy
