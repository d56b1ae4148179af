#include "levy/model.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>

#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "levy/error.hpp"
#include "levy/quadrature.hpp"

namespace levy {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Standard normal quantile at 1 - 1e-14; lognormal integrals are truncated there.
constexpr double kNormalCut = 7.650628124;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double normal_upper_tail(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

double falling_factorial(double a, int k) {
  double r = 1.0;
  for (int j = 0; j < k; ++j) r *= a - j;
  return r;
}

double signed_infinity(int k) { return (k % 2 == 0) ? kInf : -kInf; }

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void require(bool ok, const char* message) {
  if (!ok) throw DomainError(message);
}

// Stable Levy density constant: Pi(dy) = C y^(-1-alpha) dy.
double stable_density_constant(const StableJumps& s) { return s.scale / std::tgamma(-s.index); }

}  // namespace

// ---------------------------------------------------------------------------
// ClaimDistribution

ClaimDistribution ClaimDistribution::exponential(double rate) {
  require(std::isfinite(rate) && rate > 0.0, "exponential claim: rate mu must be > 0");
  return ClaimDistribution(ExponentialClaim{rate});
}

ClaimDistribution ClaimDistribution::pareto(double tail, double minimum) {
  require(std::isfinite(tail) && tail > 1.0, "pareto claim: tail alpha must be > 1");
  require(std::isfinite(minimum) && minimum > 0.0, "pareto claim: minimum xm must be > 0");
  return ClaimDistribution(ParetoClaim{tail, minimum});
}

ClaimDistribution ClaimDistribution::lognormal(double location, double shape) {
  require(std::isfinite(location), "lognormal claim: location m must be finite");
  require(std::isfinite(shape) && shape > 0.0, "lognormal claim: shape s must be > 0");
  return ClaimDistribution(LogNormalClaim{location, shape});
}

ClaimDistribution ClaimDistribution::deterministic(double size) {
  require(std::isfinite(size) && size > 0.0, "deterministic claim: size a must be > 0");
  return ClaimDistribution(DeterministicClaim{size});
}

double ClaimDistribution::moment_order_sup() const {
  return std::visit(Overloaded{[](const ParetoClaim& c) { return c.tail; },
                               [](const auto&) { return kInf; }},
                    law_);
}

double ClaimDistribution::moment(double r) const {
  return std::visit(
      Overloaded{
          [r](const ExponentialClaim& c) { return std::tgamma(1.0 + r) / std::pow(c.rate, r); },
          [r](const ParetoClaim& c) {
            return r < c.tail ? c.tail * std::pow(c.minimum, r) / (c.tail - r) : kInf;
          },
          [r](const LogNormalClaim& c) {
            return std::exp(r * c.location + 0.5 * r * r * c.shape * c.shape);
          },
          [r](const DeterministicClaim& c) { return std::pow(c.size, r); }},
      law_);
}

double ClaimDistribution::upper_partial_moment(double r, double level) const {
  return std::visit(
      Overloaded{[&](const ExponentialClaim& c) {
                   return boost::math::tgamma(r + 1.0, c.rate * level) / std::pow(c.rate, r);
                 },
                 [&](const ParetoClaim& c) {
                   if (r >= c.tail) return kInf;
                   const double from = std::max(level, c.minimum);
                   return c.tail * std::pow(c.minimum, c.tail) * std::pow(from, r - c.tail) /
                          (c.tail - r);
                 },
                 [&](const LogNormalClaim& c) {
                   const double s2 = c.shape * c.shape;
                   return std::exp(r * c.location + 0.5 * r * r * s2) *
                          normal_upper_tail((std::log(level) - c.location - r * s2) / c.shape);
                 },
                 [&](const DeterministicClaim& c) {
                   return c.size >= level ? std::pow(c.size, r) : 0.0;
                 }},
      law_);
}

double ClaimDistribution::tail(double y) const {
  if (y < 0.0) return 1.0;
  return std::visit(
      Overloaded{[y](const ExponentialClaim& c) { return std::exp(-c.rate * y); },
                 [y](const ParetoClaim& c) {
                   return y < c.minimum ? 1.0 : std::pow(c.minimum / y, c.tail);
                 },
                 [y](const LogNormalClaim& c) {
                   return y <= 0.0 ? 1.0 : normal_upper_tail((std::log(y) - c.location) / c.shape);
                 },
                 [y](const DeterministicClaim& c) { return y < c.size ? 1.0 : 0.0; }},
      law_);
}

double ClaimDistribution::density(double y) const {
  if (y <= 0.0) return 0.0;
  return std::visit(
      Overloaded{[y](const ExponentialClaim& c) { return c.rate * std::exp(-c.rate * y); },
                 [y](const ParetoClaim& c) {
                   return y < c.minimum ? 0.0
                                        : c.tail * std::pow(c.minimum, c.tail) /
                                              std::pow(y, c.tail + 1.0);
                 },
                 [y](const LogNormalClaim& c) {
                   const double z = (std::log(y) - c.location) / c.shape;
                   return kInvSqrt2Pi * std::exp(-0.5 * z * z) / (y * c.shape);
                 },
                 [](const DeterministicClaim&) { return 0.0; }},
      law_);
}

double ClaimDistribution::laplace_complement(double theta) const {
  if (theta == 0.0) return 0.0;
  return std::visit(
      Overloaded{[theta](const ExponentialClaim& c) { return theta / (c.rate + theta); },
                 [theta](const DeterministicClaim& c) { return -std::expm1(-theta * c.size); },
                 [theta](const ParetoClaim& c) {
                   // u = P(S > y) turns the claim law into the uniform law on (0, 1].
                   const double inv = 1.0 / c.tail;
                   auto f = [&](double u) {
                     return -std::expm1(-theta * c.minimum * std::pow(u, -inv));
                   };
                   return quad::tanh_sinh(f, 0.0, 1.0, 1e-13, 1e2);
                 },
                 [theta](const LogNormalClaim& c) {
                   auto f = [&](double z) {
                     return -std::expm1(-theta * std::exp(c.location + c.shape * z)) *
                            kInvSqrt2Pi * std::exp(-0.5 * z * z);
                   };
                   return quad::kronrod(f, -kNormalCut, kNormalCut, 1e-12, 18, 1e2);
                 }},
      law_);
}

std::complex<double> ClaimDistribution::laplace_transform(std::complex<double> beta) const {
  using C = std::complex<double>;
  return std::visit(
      Overloaded{
          [beta](const ExponentialClaim& c) -> C { return c.rate / (c.rate + beta); },
          [beta](const DeterministicClaim& c) -> C { return std::exp(-beta * c.size); },
          [beta](const ParetoClaim& c) -> C {
            // Rotate the integration ray onto arg(y - x_m) = -arg(beta) so that
            // exp(-beta y) decays without oscillating.
            const double modulus = std::abs(beta);
            const C rot = std::polar(1.0, -std::arg(beta));
            const double zeta = modulus * c.minimum;
            const double power = -c.tail - 1.0;
            auto f = [&](double u) -> C {
              return std::exp(-u) * std::pow(1.0 + u * rot / zeta, power);
            };
            const C integral = quad::kronrod(f, 0.0, quad::kInf, 1e-12, 20, 1e3);
            return std::exp(-beta * c.minimum) * c.tail * rot / zeta * integral;
          },
          [beta](const LogNormalClaim& c) -> C {
            // Shift the log-scale contour by -i*omega; |omega| is capped so
            // the Gaussian factor exp(omega^2 / 2 s^2) stays O(1).
            const double phase = std::arg(beta);
            const double cap = 1.5 * c.shape;
            const double omega = std::clamp(phase, -cap, cap);
            const C head = std::polar(std::abs(beta), phase - omega);
            const C shift(0.0, omega / c.shape);
            auto f = [&](double z) -> C {
              const C w = C(z, 0.0) - shift;
              return std::exp(-head * std::exp(c.location + c.shape * z)) * kInvSqrt2Pi *
                     std::exp(-0.5 * w * w);
            };
            // The transform enters psi as lambda (L - 1): far up the Bromwich
            // line L is tiny and only its absolute error matters.
            return quad::kronrod(f, -kNormalCut, kNormalCut, 1e-12, 20, 1e3, 1e-15);
          }},
      law_);
}

double ClaimDistribution::weighted_moment(int k, double theta) const {
  return std::visit(
      Overloaded{[&](const ExponentialClaim& c) {
                   return std::tgamma(k + 1.0) * c.rate / std::pow(c.rate + theta, k + 1);
                 },
                 [&](const DeterministicClaim& c) {
                   return std::pow(c.size, k) * std::exp(-theta * c.size);
                 },
                 [&](const ParetoClaim& c) {
                   const double power = k - c.tail - 1.0;
                   const double rate = theta * c.minimum;
                   auto f = [&](double t) {
                     return std::pow(1.0 + t, power) * std::exp(-rate * t);
                   };
                   return c.tail * std::pow(c.minimum, k) * std::exp(-rate) *
                          quad::exp_sinh(f, 0.0, 1e-12, 1e3);
                 },
                 [&](const LogNormalClaim& c) {
                   const double s = c.shape;
                   auto f = [&](double w) {
                     return std::exp(-theta * std::exp(c.location + s * (w + k * s))) *
                            kInvSqrt2Pi * std::exp(-0.5 * w * w);
                   };
                   return std::exp(k * c.location + 0.5 * k * k * s * s) *
                          quad::kronrod(f, -kNormalCut, kNormalCut, 1e-12, 18, 1e2);
                 }},
      law_);
}

double ClaimDistribution::sample(RandomStream& rng) const {
  return std::visit(
      Overloaded{[&](const ExponentialClaim& c) { return rng.exponential(c.rate); },
                 [&](const ParetoClaim& c) {
                   return c.minimum * std::pow(rng.uniform(), -1.0 / c.tail);
                 },
                 [&](const LogNormalClaim& c) {
                   return std::exp(c.location + c.shape * rng.normal());
                 },
                 [](const DeterministicClaim& c) { return c.size; }},
      law_);
}

std::string ClaimDistribution::describe() const {
  return std::visit(
      Overloaded{
          [](const ExponentialClaim& c) { return "exponential(mu=" + fmt(c.rate) + ")"; },
          [](const ParetoClaim& c) {
            return "pareto(alpha=" + fmt(c.tail) + ",xm=" + fmt(c.minimum) + ")";
          },
          [](const LogNormalClaim& c) {
            return "lognormal(m=" + fmt(c.location) + ",s=" + fmt(c.shape) + ")";
          },
          [](const DeterministicClaim& c) { return "deterministic(a=" + fmt(c.size) + ")"; }},
      law_);
}

// ---------------------------------------------------------------------------
// LevyModel

const char* to_string(Regime regime) {
  switch (regime) {
    case Regime::DriftsUp: return "drifts-up";
    case Regime::Oscillates: return "oscillates";
    case Regime::DriftsDown: return "drifts-down";
  }
  return "?";
}

const char* to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::Brownian: return "brownian";
    case ModelKind::CramerLundberg: return "cramer-lundberg";
    case ModelKind::JumpDiffusion: return "jump-diffusion";
    case ModelKind::Stable: return "stable";
  }
  return "?";
}

LevyModel::LevyModel(double gaussian_var, double linear, JumpFamily jumps)
    : gaussian_var_(gaussian_var), linear_(linear), jumps_(std::move(jumps)) {
  require(std::isfinite(gaussian_var) && gaussian_var >= 0.0, "gaussian variance must be >= 0");
  require(std::isfinite(linear), "drift / premium must be finite");
  require(gaussian_var > 0.0 || has_jumps(), "a pure drift is not a valid model");
}

LevyModel LevyModel::brownian(double drift, double gaussian_var) {
  require(gaussian_var > 0.0, "brownian: sigma2 must be > 0");
  return LevyModel(gaussian_var, drift, std::monostate{});
}

LevyModel LevyModel::cramer_lundberg(double premium, double rate, ClaimDistribution claim) {
  require(std::isfinite(rate) && rate > 0.0, "cramer-lundberg: lambda must be > 0");
  return LevyModel(0.0, premium, CompoundPoissonJumps{rate, claim});
}

LevyModel LevyModel::jump_diffusion(double premium, double gaussian_var, double rate,
                                    ClaimDistribution claim) {
  require(gaussian_var > 0.0, "jump-diffusion: sigma2 must be > 0");
  require(std::isfinite(rate) && rate > 0.0, "jump-diffusion: lambda must be > 0");
  return LevyModel(gaussian_var, premium, CompoundPoissonJumps{rate, claim});
}

LevyModel LevyModel::stable(double index, double scale, double drift, double gaussian_var) {
  require(std::isfinite(index) && index > 1.0 && index < 2.0, "stable: alpha must be in (1, 2)");
  require(std::isfinite(scale) && scale > 0.0, "stable: scale must be > 0");
  return LevyModel(gaussian_var, drift, StableJumps{index, scale});
}

ModelKind LevyModel::kind() const {
  if (std::holds_alternative<StableJumps>(jumps_)) return ModelKind::Stable;
  if (std::holds_alternative<CompoundPoissonJumps>(jumps_)) {
    return gaussian_var_ > 0.0 ? ModelKind::JumpDiffusion : ModelKind::CramerLundberg;
  }
  return ModelKind::Brownian;
}

bool LevyModel::bounded_variation() const {
  return gaussian_var_ == 0.0 && std::holds_alternative<CompoundPoissonJumps>(jumps_);
}

double LevyModel::bounded_variation_drift() const {
  if (!bounded_variation()) throw DomainError("model has unbounded variation");
  return linear_;
}

std::string LevyModel::describe() const {
  const std::string p = fmt(linear_);
  const std::string s2 = fmt(gaussian_var_);
  return std::visit(
      Overloaded{[&](std::monostate) { return "brownian(p=" + p + ",sigma2=" + s2 + ")"; },
                 [&](const CompoundPoissonJumps& j) {
                   const std::string head = gaussian_var_ > 0.0
                                                ? "jump-diffusion(p=" + p + ",sigma2=" + s2
                                                : "cramer-lundberg(p=" + p;
                   return head + ",lambda=" + fmt(j.rate) + ",claim=" + j.claim.describe() + ")";
                 },
                 [&](const StableJumps& j) {
                   return "stable(alpha=" + fmt(j.index) + ",scale=" + fmt(j.scale) + ",p=" + p +
                          ",sigma2=" + s2 + ")";
                 }},
      jumps_);
}

std::string LevyModel::digest() const {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : describe()) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// ---------------------------------------------------------------------------
// Laplace exponent

double compensated_drift(const LevyModel& model) {
  const double p = model.linear_coefficient();
  return std::visit(
      Overloaded{[p](std::monostate) { return p; },
                 [p](const CompoundPoissonJumps& j) {
                   const double small = j.claim.moment(1.0) - j.claim.upper_partial_moment(1.0, 1.0);
                   return p - j.rate * small;
                 },
                 [p](const StableJumps& j) {
                   return p + stable_density_constant(j) / (j.index - 1.0);
                 }},
      model.jumps());
}

double laplace_exponent(const LevyModel& model, double theta) {
  if (!(theta >= 0.0)) throw DomainError("laplace_exponent: theta must be >= 0");
  if (theta == 0.0) return 0.0;
  const double smooth =
      model.linear_coefficient() * theta + 0.5 * model.gaussian_var() * theta * theta;
  return smooth + std::visit(Overloaded{[](std::monostate) { return 0.0; },
                                        [theta](const CompoundPoissonJumps& j) {
                                          return -j.rate * j.claim.laplace_complement(theta);
                                        },
                                        [theta](const StableJumps& j) {
                                          return j.scale * std::pow(theta, j.index);
                                        }},
                             model.jumps());
}

std::complex<double> laplace_exponent(const LevyModel& model, std::complex<double> beta) {
  using C = std::complex<double>;
  if (!(beta.real() > 0.0)) throw DomainError("laplace_exponent: Re(beta) must be > 0");
  const C smooth = model.linear_coefficient() * beta + 0.5 * model.gaussian_var() * beta * beta;
  return smooth + std::visit(Overloaded{[](std::monostate) { return C(0.0); },
                                        [beta](const CompoundPoissonJumps& j) -> C {
                                          if (const auto* e = std::get_if<ExponentialClaim>(
                                                  &j.claim.law())) {
                                            return -j.rate * beta / (e->rate + beta);
                                          }
                                          return j.rate * (j.claim.laplace_transform(beta) - 1.0);
                                        },
                                        [beta](const StableJumps& j) -> C {
                                          return j.scale * std::pow(beta, j.index);
                                        }},
                             model.jumps());
}

double laplace_exponent_derivative(const LevyModel& model, double theta, int k) {
  if (k < 1) throw DomainError("laplace_exponent_derivative: k must be >= 1");
  if (!(theta >= 0.0)) throw DomainError("laplace_exponent_derivative: theta must be >= 0");
  double smooth = 0.0;
  if (k == 1) smooth = model.linear_coefficient() + model.gaussian_var() * theta;
  if (k == 2) smooth = model.gaussian_var();
  const double sign = (k % 2 == 0) ? 1.0 : -1.0;
  const double jump = std::visit(
      Overloaded{[](std::monostate) { return 0.0; },
                 [&](const CompoundPoissonJumps& j) {
                   if (theta == 0.0) {
                     const double m = j.claim.moment(k);
                     return std::isinf(m) ? signed_infinity(k) : sign * j.rate * m;
                   }
                   return sign * j.rate * j.claim.weighted_moment(k, theta);
                 },
                 [&](const StableJumps& j) {
                   if (theta == 0.0) return k == 1 ? 0.0 : signed_infinity(k);
                   return j.scale * falling_factorial(j.index, k) * std::pow(theta, j.index - k);
                 }},
      model.jumps());
  return smooth + jump;
}

double jump_moment(const LevyModel& model, double kappa) {
  if (!(kappa > 0.0)) throw DomainError("jump_moment: kappa must be > 0");
  return std::visit(Overloaded{[](std::monostate) { return 0.0; },
                               [kappa](const CompoundPoissonJumps& j) {
                                 if (kappa >= j.claim.moment_order_sup()) return kInf;
                                 return j.rate * j.claim.upper_partial_moment(kappa, 1.0);
                               },
                               [kappa](const StableJumps& j) {
                                 if (kappa >= j.index) return kInf;
                                 return stable_density_constant(j) / (j.index - kappa);
                               }},
                    model.jumps());
}

double jump_moment_order_sup(const LevyModel& model) {
  return std::visit(
      Overloaded{[](std::monostate) { return kInf; },
                 [](const CompoundPoissonJumps& j) { return j.claim.moment_order_sup(); },
                 [](const StableJumps& j) { return j.index; }},
      model.jumps());
}

double tail_measure(const LevyModel& model, double y) {
  if (!(y > 0.0)) throw DomainError("tail_measure: y must be > 0");
  return std::visit(Overloaded{[](std::monostate) { return 0.0; },
                               [y](const CompoundPoissonJumps& j) { return j.rate * j.claim.tail(y); },
                               [y](const StableJumps& j) {
                                 return stable_density_constant(j) * std::pow(y, -j.index) /
                                        j.index;
                               }},
                    model.jumps());
}

double mean(const LevyModel& model) {
  if (regime(model) == Regime::Oscillates) return 0.0;
  return laplace_exponent_derivative(model, 0.0, 1);
}

Regime regime(const LevyModel& model) {
  using boost::multiprecision::cpp_rational;
  auto classify = [](int sign) {
    return sign > 0 ? Regime::DriftsUp : (sign < 0 ? Regime::DriftsDown : Regime::Oscillates);
  };
  const cpp_rational p(model.linear_coefficient());
  const auto* cp = std::get_if<CompoundPoissonJumps>(&model.jumps());
  if (cp == nullptr) return classify(p.sign());  // Brownian and stable: E[X_1] = p
  const cpp_rational rate(cp->rate);
  return std::visit(
      Overloaded{[&](const ExponentialClaim& c) {
                   const cpp_rational m = p - rate / cpp_rational(c.rate);
                   return classify(m.sign());
                 },
                 [&](const ParetoClaim& c) {
                   const cpp_rational a(c.tail);
                   const cpp_rational m = p - rate * a * cpp_rational(c.minimum) / (a - 1);
                   return classify(m.sign());
                 },
                 [&](const DeterministicClaim& c) {
                   const cpp_rational m = p - rate * cpp_rational(c.size);
                   return classify(m.sign());
                 },
                 [&](const LogNormalClaim& c) {
                   // E[S] = exp(m + s^2/2) is irrational unless the exponent is
                   // exactly zero, so a floating comparison can only tie there.
                   const cpp_rational s(c.shape);
                   const cpp_rational exponent = cpp_rational(c.location) + s * s / 2;
                   if (exponent.sign() == 0) {
                     const cpp_rational m = p - rate;
                     return classify(m.sign());
                   }
                   const double m = model.linear_coefficient() -
                                    cp->rate * std::exp(c.location + 0.5 * c.shape * c.shape);
                   return classify(m > 0.0 ? 1 : -1);
                 }},
      cp->claim.law());
}

bool second_derivative_finite_at_zero(const LevyModel& model) {
  return jump_moment_order_sup(model) > 2.0;
}

}  // namespace levy
