#pragma once

// Parametric spectrally negative Levy processes and their Laplace exponent
//
//   psi(theta) = log E[exp(theta X_1)]
//              = c theta + sigma^2 theta^2 / 2
//                + int_(0,inf) (exp(-theta y) - 1 + theta y 1{y<1}) Pi(dy),
//
// with the jump measure Pi mirrored onto (0, inf). Models are immutable
// values; every function in this header is pure.

#include <complex>
#include <string>
#include <variant>

#include "levy/rng.hpp"

namespace levy {

struct ExponentialClaim {
  double rate;  // mu; mean claim 1/mu
};

struct ParetoClaim {
  double tail;     // alpha_P > 1
  double minimum;  // x_m > 0
};

struct LogNormalClaim {
  double location;  // m
  double shape;     // s > 0
};

struct DeterministicClaim {
  double size;  // a > 0
};

/// Claim-size law S of a compound Poisson jump part.
class ClaimDistribution {
 public:
  using Law = std::variant<ExponentialClaim, ParetoClaim, LogNormalClaim, DeterministicClaim>;

  static ClaimDistribution exponential(double rate);
  static ClaimDistribution pareto(double tail, double minimum);
  static ClaimDistribution lognormal(double location, double shape);
  static ClaimDistribution deterministic(double size);

  const Law& law() const { return law_; }

  /// sup{r >= 0 : E[S^r] < inf}.
  double moment_order_sup() const;
  /// E[S^r], +inf when r >= moment_order_sup() (Pareto boundary included).
  double moment(double r) const;
  /// E[S^r; S >= level] for level > 0, +inf when the moment diverges.
  double upper_partial_moment(double r, double level) const;
  /// P(S > y).
  double tail(double y) const;
  /// Lebesgue density; zero for the deterministic law (it has none).
  double density(double y) const;
  /// 1 - E[exp(-theta S)] for real theta >= 0, free of cancellation near 0.
  double laplace_complement(double theta) const;
  /// E[exp(-beta S)] for Re(beta) > 0.
  std::complex<double> laplace_transform(std::complex<double> beta) const;
  /// E[S^k exp(-theta S)] for theta > 0.
  double weighted_moment(int k, double theta) const;

  double sample(RandomStream& rng) const;

  std::string describe() const;

 private:
  explicit ClaimDistribution(Law law) : law_(law) {}
  Law law_;
};

struct CompoundPoissonJumps {
  double rate;  // lambda
  ClaimDistribution claim;
};

/// Strictly alpha-stable jumps normalised so that their contribution to psi
/// is scale * theta^alpha; Levy density scale / Gamma(-alpha) * y^(-1-alpha).
struct StableJumps {
  double index;  // alpha in (1, 2)
  double scale;
};

using JumpFamily = std::variant<std::monostate, CompoundPoissonJumps, StableJumps>;

enum class ModelKind { Brownian, CramerLundberg, JumpDiffusion, Stable };

enum class Regime { DriftsUp, Oscillates, DriftsDown };

const char* to_string(Regime regime);
const char* to_string(ModelKind kind);

class LevyModel {
 public:
  /// X_t = p t + sigma B_t.
  static LevyModel brownian(double drift, double gaussian_var = 1.0);
  /// X_t = p t - sum_{i <= N_t} S_i with premium rate p.
  static LevyModel cramer_lundberg(double premium, double rate, ClaimDistribution claim);
  /// Cramer-Lundberg plus an independent Gaussian part.
  static LevyModel jump_diffusion(double premium, double gaussian_var, double rate,
                                  ClaimDistribution claim);
  /// psi(theta) = p theta + sigma^2 theta^2/2 + scale theta^alpha.
  static LevyModel stable(double index, double scale, double drift = 0.0,
                          double gaussian_var = 0.0);

  double gaussian_var() const { return gaussian_var_; }
  /// Linear coefficient p of psi written without compensation
  /// (premium rate for compound Poisson, drift for Brownian and stable).
  double linear_coefficient() const { return linear_; }
  const JumpFamily& jumps() const { return jumps_; }

  ModelKind kind() const;
  bool has_jumps() const { return !std::holds_alternative<std::monostate>(jumps_); }
  bool bounded_variation() const;
  /// Drift d of a bounded-variation model, psi(theta) ~ d theta as theta -> inf.
  double bounded_variation_drift() const;

  std::string describe() const;
  /// Stable 64-bit FNV-1a digest of describe(), as 16 hex digits.
  std::string digest() const;

 private:
  LevyModel(double gaussian_var, double linear, JumpFamily jumps);

  double gaussian_var_;
  double linear_;
  JumpFamily jumps_;
};

/// The location parameter c of the compensated representation:
/// c = p - lambda E[S; S < 1] for compound Poisson jumps and
/// c = p + int_[1,inf) y Pi(dy) for stable jumps.
double compensated_drift(const LevyModel& model);

double laplace_exponent(const LevyModel& model, double theta);
/// Analytic continuation to Re(beta) > 0, used by the inversion engine.
std::complex<double> laplace_exponent(const LevyModel& model, std::complex<double> beta);

/// psi^(k)(theta), k >= 1. theta == 0 means the right limit and may return
/// +-inf when the k-th jump moment diverges.
double laplace_exponent_derivative(const LevyModel& model, double theta, int k);

/// int_[1,inf) y^kappa Pi(dy), +inf decided from family parameters.
double jump_moment(const LevyModel& model, double kappa);

/// sup{r : int_[1,inf) y^r Pi(dy) < inf}; +inf without jumps.
double jump_moment_order_sup(const LevyModel& model);

/// Pi((y, inf)) for y > 0.
double tail_measure(const LevyModel& model, double y);

/// E[X_1] = psi'(0+); exactly 0.0 for oscillating models.
double mean(const LevyModel& model);

/// Sign of E[X_1] decided in exact rational arithmetic on the parameters.
Regime regime(const LevyModel& model);

/// psi''(0+) < inf, decided symbolically.
bool second_derivative_finite_at_zero(const LevyModel& model);

}  // namespace levy
