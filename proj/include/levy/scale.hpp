#pragma once

// q-scale functions W^(q), Z^(q) and the quantities built from them:
//
//   E[exp(-q tau_x); tau_x < inf] = Z^(q)(x) - eta(q) W^(q)(x),
//   P(tau_x < inf)                = 1 - max(psi'(0+), 0) W(x).
//
// Brownian and exponential-claim Cramer-Lundberg models have exponential-sum
// closed forms, deterministic claims a finite exact series; every other
// model goes through Laplace inversion.

#include <optional>
#include <vector>

#include "levy/inverse.hpp"
#include "levy/laplace_inversion.hpp"
#include "levy/model.hpp"

namespace levy {

enum class Method { ClosedForm, Inversion, Quadrature, MonteCarlo };

const char* to_string(Method method);

struct ScaleOptions {
  InversionParams inversion{};
  /// Use the inversion engine even when a closed form exists (for testing it).
  bool force_numeric = false;
  /// Largest accepted relative error estimate of an inversion.
  double inversion_tolerance = 1e-7;
};

class ScaleEvaluator {
 public:
  explicit ScaleEvaluator(LevyModel model, ScaleOptions options = {});

  const LevyModel& model() const { return inverse_.model(); }
  const InverseExponent& inverse() const { return inverse_; }
  const ScaleOptions& options() const { return options_; }

  /// How W is produced: closed form or inversion.
  Method method() const;
  /// Method behind one particular W value (series formulas may fall back).
  Method method_W(double q, double x) const;
  Method method_Z(double q, double x) const;
  Method method_passage(double q, double x) const;
  /// Stable-family inversions lose digits near x = 0 and are marked as such.
  bool experimental() const { return model().kind() == ModelKind::Stable; }

  double scale_W(double q, double x) const;
  double scale_Z(double q, double x) const;
  double passage_lt(double q, double x) const;
  double ruin_probability(double x) const;

 private:
  // W(x) = sum_i weight_i exp(root_i x), or (slope x + offset) for a double
  // root at zero.
  struct ExponentialSum {
    double root[2];
    double weight[2];
    bool double_zero = false;
    double offset = 0.0;
    double slope = 0.0;
  };

  std::optional<ExponentialSum> closed_form(double q) const;
  std::optional<double> deterministic_series_W(double q, double x) const;
  std::optional<double> deterministic_passage_lt(double q, double x) const;
  double numeric_W(double q, double x) const;
  std::vector<double> kinks(double x) const;
  double numeric_passage_lt(double q, double x) const;
  void check_level(double x, const char* who) const;

  InverseExponent inverse_;
  ScaleOptions options_;
};

}  // namespace levy
