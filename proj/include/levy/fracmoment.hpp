#pragma once

// Fractional moments from Laplace transforms. For a nonnegative, possibly
// defective, variable T with g(z) = E[exp(-z T); T < inf],
//
//   E[T^kappa; T < inf] = (-1)^n d^n/dz^n (D^r g)(0),  n = floor(kappa), r = kappa - n,
//
// where D^r is the Marchaud derivative
//   D^r f(z) = r / Gamma(1 - r) int_0^inf (f(z) - f(z + v)) v^(-r-1) dv.

#include <functional>
#include <vector>

#include "levy/inverse.hpp"
#include "levy/scale.hpp"

namespace levy {

struct MarchaudConfig {
  double upper_cut = 1e6;              // U: integrals are truncated at v = U ...
  double max_upper_cut = 1e9;          // ... which may be doubled up to here
  double divergence_threshold = 1e12;  // D: a partial integral above this is +inf
  double rel_tol = 1e-8;
  std::vector<double> ladder{1e-2, 1e-3, 1e-4};  // finite-difference steps for kappa >= 1
  double divergence_margin = 0.02;
  /// Relative size f(z) - f(z + v) must reach before it is trusted for the
  /// local exponent fit; raise it for noisy f.
  double noise_floor = 1e-8;
};

struct FractionalValue {
  double value = 0.0;  // +inf on a divergence verdict
  double error = 0.0;  // error estimate, 0 when not available
  bool divergent = false;
  double local_exponent = 0.0;  // gamma in f(z) - f(z + v) ~ C v^gamma, when fitted
};

using RealFn = std::function<double(double)>;

FractionalValue marchaud_detailed(const RealFn& f, double kappa, double z,
                                  const MarchaudConfig& cfg = {});
double marchaud(const RealFn& f, double kappa, double z, const MarchaudConfig& cfg = {});

FractionalValue moment_from_laplace_detailed(const RealFn& g, double kappa,
                                             const MarchaudConfig& cfg = {});
double moment_from_laplace(const RealFn& g, double kappa, const MarchaudConfig& cfg = {});

/// E[(tau_x)^kappa | tau_x < inf] for the first passage below -x.
FractionalValue passage_moment_detailed(const ScaleEvaluator& ev, double x, double kappa,
                                        const MarchaudConfig& cfg = {});
double passage_moment(const ScaleEvaluator& ev, double x, double kappa,
                      const MarchaudConfig& cfg = {});

/// E[(tau_1^+)^kappa], kappa in (0, 1), from E[exp(-q tau_1^+)] = exp(-Phi(q)).
double upward_passage_moment(const InverseExponent& inv, double kappa,
                             const MarchaudConfig& cfg = {});

}  // namespace levy
