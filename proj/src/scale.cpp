#include "levy/scale.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <vector>

#include "bigfloat.hpp"
#include "levy/error.hpp"
#include "levy/quadrature.hpp"

namespace levy {
namespace {

using Complex = std::complex<double>;

constexpr int kMaxKinks = 64;
// Relative accuracy of Z from quadrature over an exact W; Z - eta W is
// trusted while Z times this stays below the inversion tolerance.
constexpr double kExactZAccuracy = 1e-12;
constexpr int kMaxInversionTerms = 512;
// Working precision cap for the multiprecision deterministic-claim series.
constexpr double kMaxSeriesBits = 60000.0;
// Largest accepted ratio sum|terms| / |W| in the deterministic-claim series.
constexpr double kMaxSeriesCancellation = 1e6;

struct RootPair {
  double neg;  // the smaller root
  double pos;  // the larger root, Phi(q)
};

// Roots of a b^2 + b b + c with a > 0 and c <= 0, computed without cancellation.
RootPair quadratic_roots(double a, double b, double c) {
  const double s = std::sqrt(b * b - 4.0 * a * c);
  if (b >= 0.0) {
    const double neg = (-b - s) / (2.0 * a);
    return {neg, neg != 0.0 ? c / (a * neg) : 0.0};
  }
  const double pos = (-b + s) / (2.0 * a);
  return {c / (a * pos), pos};
}

// Euler inversion with the number of terms doubled until the error estimate
// is accepted; kinks of W (atoms or density jumps of the claims) need many
// more terms than smooth scale functions.
template <class Accept>
InversionResult invert_escalating(const LaplaceFn& transform, double t, InversionParams params,
                                  Accept accept) {
  InversionResult r = euler_invert(transform, t, params);
  while (!accept(r) && params.terms < kMaxInversionTerms) {
    params.terms *= 2;
    r = euler_invert(transform, t, params);
  }
  return r;
}

}  // namespace

const char* to_string(Method method) {
  switch (method) {
    case Method::ClosedForm: return "closed-form";
    case Method::Inversion: return "inversion";
    case Method::Quadrature: return "quadrature";
    case Method::MonteCarlo: return "monte-carlo";
  }
  return "?";
}

ScaleEvaluator::ScaleEvaluator(LevyModel model, ScaleOptions options)
    : inverse_(std::move(model)), options_(options) {}

Method ScaleEvaluator::method() const {
  return closed_form(1.0) ? Method::ClosedForm : Method::Inversion;
}

Method ScaleEvaluator::method_W(double q, double x) const {
  if (x <= 0.0 || closed_form(q) || deterministic_series_W(q, x)) return Method::ClosedForm;
  return Method::Inversion;
}

Method ScaleEvaluator::method_Z(double q, double x) const {
  if (q == 0.0 || x <= 0.0 || closed_form(q)) return Method::ClosedForm;
  return Method::Quadrature;
}

Method ScaleEvaluator::method_passage(double q, double x) const {
  if (q == 0.0) {
    if (!(mean(model()) > 0.0) || closed_form(0.0)) return Method::ClosedForm;
    return method_W(0.0, x);
  }
  if (closed_form(q) || deterministic_passage_lt(q, x)) return Method::ClosedForm;
  if (x == 0.0) return method_W(q, 0.0);
  return Method::Inversion;
}

std::optional<ScaleEvaluator::ExponentialSum> ScaleEvaluator::closed_form(double q) const {
  if (options_.force_numeric) return std::nullopt;
  const LevyModel& m = model();
  const double p = m.linear_coefficient();
  ExponentialSum w{};
  if (m.kind() == ModelKind::Brownian) {
    const double s2 = m.gaussian_var();
    // psi(b) - q = (s2 / 2) b^2 + p b - q
    const RootPair r = quadratic_roots(0.5 * s2, p, -q);
    if (r.neg == r.pos) {
      w.double_zero = true;
      w.slope = 2.0 / s2;
      return w;
    }
    const double a = 2.0 / (s2 * (r.pos - r.neg));
    w.root[0] = r.neg;
    w.root[1] = r.pos;
    w.weight[0] = -a;
    w.weight[1] = a;
    return w;
  }
  if (m.kind() == ModelKind::CramerLundberg) {
    const auto& cp = std::get<CompoundPoissonJumps>(m.jumps());
    const auto* e = std::get_if<ExponentialClaim>(&cp.claim.law());
    if (e == nullptr) return std::nullopt;
    const double mu = e->rate;
    // (mu + b)(psi(b) - q) = p b^2 + (p mu - lambda - q) b - q mu
    const RootPair r = quadratic_roots(p, p * mu - cp.rate - q, -q * mu);
    if (r.neg == r.pos) {
      w.double_zero = true;
      w.offset = 1.0 / p;
      w.slope = mu / p;
      return w;
    }
    w.root[0] = r.neg;
    w.root[1] = r.pos;
    w.weight[0] = (mu + r.neg) / (p * (r.neg - r.pos));
    w.weight[1] = (mu + r.pos) / (p * (r.pos - r.neg));
    return w;
  }
  return std::nullopt;
}

void ScaleEvaluator::check_level(double x, const char* who) const {
  if (!(x >= 0.0) || std::isinf(x)) {
    throw DomainError(std::string(who) + ": x must be finite and >= 0");
  }
  if (x == 0.0 && !model().bounded_variation()) {
    throw DomainError(std::string(who) + ": x = 0 is excluded for unbounded variation");
  }
}

double ScaleEvaluator::scale_W(double q, double x) const {
  if (!(q >= 0.0) || std::isinf(q)) throw DomainError("scale_W: q must be finite and >= 0");
  if (std::isnan(x)) throw DomainError("scale_W: x is NaN");
  if (x < 0.0) return 0.0;
  if (x == 0.0) return model().bounded_variation() ? 1.0 / model().bounded_variation_drift() : 0.0;
  if (const auto w = closed_form(q)) {
    if (w->double_zero) return w->offset + w->slope * x;
    return w->weight[0] * std::exp(w->root[0] * x) + w->weight[1] * std::exp(w->root[1] * x);
  }
  if (const auto w = deterministic_series_W(q, x)) return *w;
  return numeric_W(q, x);
}

std::optional<double> ScaleEvaluator::deterministic_series_W(double q, double x) const {
  // For psi(b) = p b - lambda (1 - exp(-a b)) expanding
  // 1 / (psi - q) = sum_k (-lambda)^k exp(-k a b) / (p b - lambda - q)^(k+1)
  // and inverting term by term gives a finite alternating sum.
  if (options_.force_numeric || model().kind() != ModelKind::CramerLundberg) return std::nullopt;
  const auto& cp = std::get<CompoundPoissonJumps>(model().jumps());
  const auto* d = std::get_if<DeterministicClaim>(&cp.claim.law());
  if (d == nullptr) return std::nullopt;
  const double p = model().linear_coefficient();
  const double a = d->size;
  const double rate = (cp.rate + q) / p;
  double sum = 0.0;
  double magnitude = 0.0;
  for (int k = 0; k * a <= x; ++k) {
    const double u = x - k * a;
    const double log_term = (k == 0 ? 0.0 : k * std::log(cp.rate * u / p)) - std::lgamma(k + 1.0) +
                            rate * u - std::log(p);
    if (k > 0 && u == 0.0) continue;
    const double term = std::exp(log_term);
    sum += (k % 2 == 0) ? term : -term;
    magnitude += term;
  }
  if (!(magnitude <= kMaxSeriesCancellation * std::abs(sum))) return std::nullopt;
  return sum;
}

std::optional<double> ScaleEvaluator::deterministic_passage_lt(double q, double x) const {
  // Z - eta W from the same series as W, with Z integrated term by term:
  //   int_0^u t^k e^(r t) dt = (-1)^k k! / r^(k+1) [e^(r u) sum_{j<=k} (-r u)^j / j! - 1].
  // Both terms grow like exp(Phi x) while the difference is a probability, so
  // the sum is formed with enough bits to absorb the cancellation.
  if (options_.force_numeric || model().kind() != ModelKind::CramerLundberg) return std::nullopt;
  const auto& cp = std::get<CompoundPoissonJumps>(model().jumps());
  const auto* d = std::get_if<DeterministicClaim>(&cp.claim.law());
  if (d == nullptr) return std::nullopt;
  const double p = model().linear_coefficient();
  const double lambda = cp.rate;
  const double a = d->size;
  const double rate = (lambda + q) / p;
  const double bits = 128.0 + 1.5 * rate * x / std::log(2.0);
  if (bits > kMaxSeriesBits) {
    // Passage needs more than x / a claims, so E[exp(-q tau)] is at most
    // (lambda / (lambda + q))^n; report 0 once that is far below tolerance.
    const double claims = std::floor(x / a) + 1.0;
    const double bound = std::pow(lambda / (lambda + q), claims);
    if (bound <= 1e-3 * options_.inversion_tolerance) return 0.0;
    return std::nullopt;
  }
  using detail::BigFloat;
  const auto prec = static_cast<mpfr_prec_t>(bits);

  // Phi by Newton on p b - lambda (1 - exp(-a b)) - q from the double root.
  BigFloat root(prec, inverse_.phi(q));
  for (int it = 0; it < 64; ++it) {
    const BigFloat decay = exp(root * -a);
    BigFloat g = root * p;
    g -= lambda;
    g += decay * lambda;
    g -= q;
    BigFloat slope(prec, p);
    slope -= decay * (lambda * a);
    const BigFloat step = g / slope;
    root -= step;
    if (step.is_zero() || static_cast<double>(root.exponent() - step.exponent()) > bits) break;
  }

  BigFloat w(prec);
  BigFloat integral(prec);
  BigFloat coeff(prec, 1.0 / p);                 // lambda^k / p^(k+1)
  BigFloat inv_pr(prec, 1.0);                    // 1 / (p r)^(k+1)
  inv_pr /= BigFloat(prec, p) * BigFloat(prec, rate);
  for (int k = 0; k == 0 || k * a < x; ++k) {
    const double u = x - k * a;
    BigFloat ru(prec, rate);
    ru *= u;
    const BigFloat growth = exp(ru);
    // (-lambda)^k u^k e^(r u) / (p^(k+1) k!)
    BigFloat term = coeff * growth;
    BigFloat power(prec, 1.0);  // running (-r u)^j / j!
    BigFloat partial(prec, 1.0);
    for (int j = 1; j <= k; ++j) {
      power *= ru * -1.0;
      power /= static_cast<double>(j);
      partial += power;
      term *= u;
      term /= static_cast<double>(j);
    }
    if (k % 2 == 0) {
      w += term;
    } else {
      w -= term;
    }
    // lambda^k / (p r)^(k+1) [e^(r u) sum_j (-r u)^j / j! - 1]
    BigFloat piece = growth * partial;
    piece -= 1.0;
    integral += piece * inv_pr;
    coeff *= lambda / p;
    inv_pr *= lambda;
    inv_pr /= BigFloat(prec, p) * BigFloat(prec, rate);
  }
  BigFloat lt(prec, 1.0);
  lt += integral * q;
  lt -= w * q / root;
  return std::clamp(lt.to_double(), 0.0, 1.0);
}

std::vector<double> ScaleEvaluator::kinks(double x) const {
  // Points in (0, x) where W fails to be smooth: claim atoms and their
  // multiples, and the left end of a Pareto claim law.
  std::vector<double> out;
  const auto* cp = std::get_if<CompoundPoissonJumps>(&model().jumps());
  if (cp == nullptr) return out;
  double step = 0.0;
  if (const auto* d = std::get_if<DeterministicClaim>(&cp->claim.law())) step = d->size;
  if (const auto* pc = std::get_if<ParetoClaim>(&cp->claim.law())) step = pc->minimum;
  if (step <= 0.0) return out;
  for (int k = 1; k * step < x && k <= kMaxKinks; ++k) out.push_back(k * step);
  return out;
}

double ScaleEvaluator::numeric_W(double q, double x) const {
  // Invert 1 / (psi(c + s) - q) = L[exp(-c y) W(y)](s) with the shift c put
  // past the pole at Phi(q), so the damped function is O(1) at y = x.
  const double shift = inverse_.phi(q) + 1.0 / x;
  const LevyModel& m = model();
  auto transform = [&](Complex s) { return 1.0 / (laplace_exponent(m, s + shift) - q); };
  const double tol = options_.inversion_tolerance;
  const InversionResult r = invert_escalating(transform, x, options_.inversion, [tol](const InversionResult& r) {
    return r.error <= tol * std::abs(r.value);
  });
  const double growth = std::exp(shift * x);
  const double value = growth * r.value;
  const double error = growth * r.error;
  if (!(error <= tol * std::abs(value) + 1e-300)) {
    std::ostringstream os;
    os.precision(3);
    os << "scale_W: inversion at q = " << q << ", x = " << x << " reached error " << error
       << " (value " << value << ")";
    throw NumericalError(os.str());
  }
  return std::max(value, 0.0);
}

double ScaleEvaluator::scale_Z(double q, double x) const {
  if (!(q >= 0.0) || std::isinf(q)) throw DomainError("scale_Z: q must be finite and >= 0");
  if (std::isnan(x)) throw DomainError("scale_Z: x is NaN");
  if (q == 0.0 || x <= 0.0) return 1.0;
  if (const auto w = closed_form(q)) {
    // q > 0 keeps both roots away from zero.
    return 1.0 + q * (w->weight[0] * std::expm1(w->root[0] * x) / w->root[0] +
                      w->weight[1] * std::expm1(w->root[1] * x) / w->root[1]);
  }
  auto integrand = [&](double y) { return y <= 0.0 ? scale_W(q, 0.0) : scale_W(q, y); };
  // Piecewise between kinks of W; tanh-sinh also copes with the x^(alpha - 1)
  // behaviour at 0 under unbounded variation. Inverted values carry errors
  // near the inversion tolerance, so asking for more is pointless.
  const double tol = method_W(q, x) == Method::ClosedForm
                         ? 1e-12
                         : std::max(options_.inversion_tolerance, 1e-10);
  double integral = 0.0;
  double from = 0.0;
  std::vector<double> cuts = kinks(x);
  cuts.push_back(x);
  for (double to : cuts) {
    integral += quad::tanh_sinh(integrand, from, to, tol, 1e2);
    from = to;
  }
  return 1.0 + q * integral;
}

double ScaleEvaluator::ruin_probability(double x) const {
  check_level(x, "ruin_probability");
  const double drift = mean(model());
  if (!(drift > 0.0)) return 1.0;
  if (const auto w = closed_form(0.0)) {
    const LevyModel& m = model();
    if (m.kind() == ModelKind::Brownian) return std::exp(-2.0 * drift * x / m.gaussian_var());
    // Exponential claims: (lambda / (p mu)) exp(-(mu - lambda / p) x).
    const auto& cp = std::get<CompoundPoissonJumps>(m.jumps());
    const double mu = std::get<ExponentialClaim>(cp.claim.law()).rate;
    const double p = m.linear_coefficient();
    return cp.rate / (p * mu) * std::exp(-(mu - cp.rate / p) * x);
  }
  return std::clamp(1.0 - drift * scale_W(0.0, x), 0.0, 1.0);
}

double ScaleEvaluator::passage_lt(double q, double x) const {
  if (!(q >= 0.0) || std::isinf(q)) throw DomainError("passage_lt: q must be finite and >= 0");
  check_level(x, "passage_lt");
  if (q == 0.0) return ruin_probability(x);
  if (const auto w = closed_form(q)) {
    const double r = w->root[0];  // negative root; q > 0 rules out a double root
    if (model().kind() == ModelKind::Brownian) return std::exp(r * x);
    const auto& cp = std::get<CompoundPoissonJumps>(model().jumps());
    const double mu = std::get<ExponentialClaim>(cp.claim.law()).rate;
    return (1.0 + r / mu) * std::exp(r * x);
  }
  if (x == 0.0) {
    return std::clamp(1.0 - inverse_.eta(q) * scale_W(q, 0.0), 0.0, 1.0);
  }
  if (const auto lt = deterministic_passage_lt(q, x)) return *lt;
  if (method_W(q, x) == Method::ClosedForm) {
    // Exact W (deterministic claims): Z - eta W is usable until the
    // cancellation between two terms of size exp(Phi x) eats the accuracy.
    const double z = scale_Z(q, x);
    const double direct = z - inverse_.eta(q) * scale_W(q, x);
    if (direct > 0.0 && z * kExactZAccuracy <= 0.1 * options_.inversion_tolerance) {
      return std::min(direct, 1.0);
    }
  }
  return numeric_passage_lt(q, x);
}

double ScaleEvaluator::numeric_passage_lt(double q, double x) const {
  // The x-transform of Z - eta W is (psi(b) - eta b) / (b (psi(b) - q)); both
  // b = 0 and b = Phi(q) are removable, so any abscissa > 0 works as long as
  // it does not sit on top of Phi(q) where the quotient is 0/0.
  const double root = inverse_.phi(q);
  const double eta = q / root;
  InversionParams params = options_.inversion;
  const double abscissa = -std::log(params.precision) / (2.0 * x);
  if (std::abs(abscissa - root) < 0.01 * root) {
    params.precision = std::exp(-2.0 * x * 1.05 * root);
  }
  const LevyModel& m = model();
  auto transform = [&](Complex b) {
    const Complex psi = laplace_exponent(m, b);
    return (psi - eta * b) / (b * (psi - q));
  };
  const double tol = options_.inversion_tolerance;
  const InversionResult r = invert_escalating(transform, x, params, [tol](const InversionResult& r) {
    return r.error <= tol;
  });
  if (!(r.error <= tol)) {
    std::ostringstream os;
    os.precision(3);
    os << "passage_lt: inversion at q = " << q << ", x = " << x << " reached error " << r.error;
    throw NumericalError(os.str());
  }
  return std::clamp(r.value, 0.0, 1.0);
}

}  // namespace levy
