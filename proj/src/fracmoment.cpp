#include "levy/fracmoment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "levy/error.hpp"
#include "levy/quadrature.hpp"

namespace levy {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kFinestDecade = 12;  // local exponent scan reaches v = 1e-12

FractionalValue divergent_value(double exponent) {
  FractionalValue r;
  r.value = kInf;
  r.divergent = true;
  r.local_exponent = exponent;
  return r;
}

void validate(const MarchaudConfig& cfg) {
  if (!(cfg.upper_cut > 1.0) || !(cfg.max_upper_cut >= cfg.upper_cut)) {
    throw DomainError("MarchaudConfig: need 1 < upper_cut <= max_upper_cut");
  }
  if (!(cfg.divergence_threshold > 0.0)) {
    throw DomainError("MarchaudConfig: divergence threshold must be > 0");
  }
  if (!(cfg.rel_tol > 0.0) || !(cfg.noise_floor > 0.0) || !(cfg.divergence_margin >= 0.0)) {
    throw DomainError("MarchaudConfig: tolerances must be > 0");
  }
  if (cfg.ladder.size() < 2) throw DomainError("MarchaudConfig: ladder needs >= 2 steps");
  for (std::size_t i = 0; i < cfg.ladder.size(); ++i) {
    if (!(cfg.ladder[i] > 0.0) || (i > 0 && !(cfg.ladder[i] < cfg.ladder[i - 1]))) {
      throw DomainError("MarchaudConfig: ladder must be positive and strictly decreasing");
    }
  }
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

FractionalValue marchaud_detailed(const RealFn& f, double kappa, double z, const MarchaudConfig& cfg) {
  if (!(kappa > 0.0 && kappa < 1.0)) throw DomainError("marchaud: kappa must lie in (0, 1)");
  if (!(z >= 0.0) || std::isinf(z)) throw DomainError("marchaud: z must be finite and >= 0");
  validate(cfg);

  const double f0 = f(z);
  if (!std::isfinite(f0)) throw DomainError("marchaud: f(z) is not finite");
  const double scale = std::max(std::abs(f0), std::numeric_limits<double>::min());
  const double floor = cfg.noise_floor * scale;
  const double slack = 0.1 * floor;
  auto drop = [&](double v) { return f0 - f(z + v); };

  // drops[k] = f(z) - f(z + 10^-k), k = 0 .. kFinestDecade
  std::vector<double> drops(kFinestDecade + 1);
  for (int k = 0; k <= kFinestDecade; ++k) drops[k] = drop(std::pow(10.0, -k));

  // f must be nonincreasing: drops grow with v, checked on a decade grid.
  std::vector<double> grid;
  for (int k = kFinestDecade; k >= 0; --k) grid.push_back(drops[k]);
  for (double v = 10.0; v <= cfg.upper_cut; v *= 10.0) grid.push_back(drop(v));
  double previous = 0.0;
  for (double d : grid) {
    if (!std::isfinite(d)) throw NumericalError("marchaud: f is not finite on the scan grid");
    if (d < previous - slack) {
      throw UnsupportedError("marchaud: f is not nonincreasing (oscillating input)");
    }
    previous = std::max(previous, d);
  }

  // Local exponent of the drop near v = 0 from the finest decade pair that
  // is clear of the noise floor.
  int finest = -1;
  for (int k = kFinestDecade; k >= 0; --k) {
    if (drops[k] >= floor) {
      finest = k;
      break;
    }
  }
  const double margin = std::min(cfg.divergence_margin, 0.5 * (1.0 - kappa));
  double exponent = 0.0;
  double lower_piece = 0.0;
  double v_min = 1.0;
  if (finest >= 1) {
    v_min = std::pow(10.0, -finest);
    exponent = std::log10(drops[finest - 1] / drops[finest]);
    if (exponent - kappa <= margin) return divergent_value(exponent);
    // int_0^v_min C v^gamma v^(-kappa-1) dv
    lower_piece = drops[finest] * std::pow(v_min, -kappa) / (exponent - kappa);
  } else if (finest == 0) {
    v_min = 1.0;  // only v = 1 is above the floor: treat the drop below it as noise
  } else {
    v_min = 1.0;
    exponent = 0.0;
  }

  auto log_integrand = [&](double s) {
    const double v = std::exp(s);
    return drop(v) * std::exp(-kappa * s);
  };
  // Asking for more than the noise in f allows only burns evaluations.
  const double quad_tol = 1e-2 * std::max(cfg.rel_tol, cfg.noise_floor);
  double cut = cfg.upper_cut;
  auto middle = quad::kronrod_estimate(log_integrand, std::log(v_min), std::log(cut), quad_tol, 15);
  double partial = lower_piece + middle.value;
  double error = middle.error;
  if (partial > cfg.divergence_threshold) return divergent_value(exponent);

  // Beyond the cut: int_U^inf (f(z) - f(z + v)) v^(-kappa-1) dv lies within
  // [f(z) - f(z + U), f(z)] * U^-kappa / kappa for nonincreasing f >= 0; the
  // lower end is used and the width is carried as error.
  auto tail_bound = [&](double u) { return std::abs(f(z + u)) * std::pow(u, -kappa) / kappa; };
  double bound = tail_bound(cut);
  while (bound > cfg.rel_tol * std::abs(partial) && 2.0 * cut <= cfg.max_upper_cut) {
    const auto extra = quad::kronrod_estimate(log_integrand, std::log(cut), std::log(2.0 * cut),
                                              quad_tol, 10);
    partial += extra.value;
    error += extra.error;
    cut *= 2.0;
    bound = tail_bound(cut);
  }
  if (partial > cfg.divergence_threshold) return divergent_value(exponent);
  const double tail = drop(cut) * std::pow(cut, -kappa) / kappa;
  error += bound;

  const double factor = kappa / std::tgamma(1.0 - kappa);
  FractionalValue r;
  r.value = factor * (partial + tail);
  r.error = factor * error;
  r.local_exponent = exponent;
  return r;
}

double marchaud(const RealFn& f, double kappa, double z, const MarchaudConfig& cfg) {
  return marchaud_detailed(f, kappa, z, cfg).value;
}

FractionalValue moment_from_laplace_detailed(const RealFn& g, double kappa, const MarchaudConfig& cfg) {
  if (!(kappa > 0.0) || std::isinf(kappa)) {
    throw DomainError("moment_from_laplace: kappa must be finite and > 0");
  }
  validate(cfg);
  if (kappa < 1.0) return marchaud_detailed(g, kappa, 0.0, cfg);

  const int order = static_cast<int>(std::floor(kappa));
  const double frac = kappa - order;
  const bool integer = frac < 1e-12;

  FractionalValue at_zero;
  if (!integer) {
    at_zero = marchaud_detailed(g, frac, 0.0, cfg);
    if (at_zero.divergent) return at_zero;  // E[T^frac] = inf forces E[T^kappa] = inf
  }
  auto h = [&](double z) {
    if (integer) return g(z);
    if (z == 0.0) return at_zero.value;
    return marchaud_detailed(g, frac, z, cfg).value;
  };
  const double h0 = h(0.0);

  // (-1)^n times the forward n-th difference quotient at 0.
  std::vector<double> quotients;
  for (double eps : cfg.ladder) {
    double sum = (order % 2 == 0) ? h0 : -h0;
    for (int j = 1; j <= order; ++j) {
      const double term = binomial(order, j) * h(j * eps);
      sum += ((order - j) % 2 == 0) ? term : -term;
    }
    const double q = sum / std::pow(eps, order);
    quotients.push_back((order % 2 == 0) ? q : -q);
  }
  for (double q : quotients) {
    if (!std::isfinite(q)) return divergent_value(0.0);
  }

  // Divergence: successive quotients keep growing by comparable amounts.
  const std::size_t m = quotients.size();
  const double step = quotients[m - 1] - quotients[m - 2];
  if (m >= 3) {
    const double prev_step = quotients[m - 2] - quotients[m - 3];
    const double rho = std::abs(step) / std::abs(prev_step);
    const bool growing = std::abs(quotients[m - 1]) > std::abs(quotients[m - 2]) &&
                         std::abs(quotients[m - 2]) > std::abs(quotients[m - 3]);
    const bool settled = std::abs(step) <= 10.0 * cfg.rel_tol * std::abs(quotients[m - 1]);
    if (!settled && rho >= 0.8 && growing) return divergent_value(0.0);
    if (!settled && rho > 0.5) {
      std::ostringstream os;
      os.precision(4);
      os << "moment_from_laplace: unstable finite differences across the step ladder (quotients";
      for (double q : quotients) os << " " << q;
      os << ")";
      throw NumericalError(os.str());
    }
  }

  // Forward differences have an error expansion in integer powers of the
  // step: Neville extrapolation to step 0.
  std::vector<double> table = quotients;
  double previous_estimate = table[m - 1];
  for (std::size_t level = 1; level < m; ++level) {
    previous_estimate = table[m - 1];
    for (std::size_t i = m - 1; i >= level; --i) {
      const double far = cfg.ladder[i - level];
      const double near = cfg.ladder[i];
      table[i] = (far * table[i] - near * table[i - 1]) / (far - near);
    }
  }
  FractionalValue r;
  r.value = table[m - 1];
  r.error = std::abs(table[m - 1] - previous_estimate);
  return r;
}

double moment_from_laplace(const RealFn& g, double kappa, const MarchaudConfig& cfg) {
  return moment_from_laplace_detailed(g, kappa, cfg).value;
}

FractionalValue passage_moment_detailed(const ScaleEvaluator& ev, double x, double kappa,
                                        const MarchaudConfig& cfg) {
  if (!(kappa > 0.0) || std::isinf(kappa)) {
    throw DomainError("passage_moment: kappa must be finite and > 0");
  }
  const double ruin = ev.ruin_probability(x);
  MarchaudConfig local = cfg;
  if (ev.method() == Method::Inversion) {
    local.noise_floor = std::max(cfg.noise_floor, 1e3 * ev.options().inversion_tolerance);
  }
  FractionalValue r = moment_from_laplace_detailed(
      [&](double q) { return ev.passage_lt(q, x); }, kappa, local);
  if (r.divergent) return r;
  r.value /= ruin;
  r.error /= ruin;
  return r;
}

double passage_moment(const ScaleEvaluator& ev, double x, double kappa, const MarchaudConfig& cfg) {
  return passage_moment_detailed(ev, x, kappa, cfg).value;
}

double upward_passage_moment(const InverseExponent& inv, double kappa, const MarchaudConfig& cfg) {
  if (!(kappa > 0.0 && kappa < 1.0)) {
    throw DomainError("upward_passage_moment: kappa must lie in (0, 1)");
  }
  if (inv.regime() == Regime::DriftsDown) {
    throw DomainError("upward_passage_moment: model drifts down");
  }
  return marchaud(
      [&](double u) { return std::exp(-inv.phi(u)); }, kappa, 0.0, cfg);
}

}  // namespace levy
