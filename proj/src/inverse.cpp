#include "levy/inverse.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <set>
#include <sstream>
#include <vector>

#include "levy/error.hpp"
#include "levy/quadrature.hpp"

namespace levy {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kMaxIterations = 200;
constexpr int kMaxExpansions = 200;
constexpr int kMaxBellOrder = 10;

std::string bracket_text(double lo, double hi) {
  std::ostringstream os;
  os.precision(17);
  os << "[" << lo << ", " << hi << "]";
  return os.str();
}

// Root of an increasing function g on a bracket with g(lo) < 0 <= g(hi).
// Newton steps start from hi; any step leaving the bracket is replaced by
// bisection.
template <class G, class DG>
double safeguarded_newton(G g, DG dg, double lo, double hi, double rel_tol, const char* what) {
  double x = hi;
  double gx = g(x);
  for (int it = 0; it < kMaxIterations; ++it) {
    if (gx == 0.0) return x;
    if (gx > 0.0) {
      hi = x;
    } else {
      lo = x;
    }
    const double slope = dg(x);
    double next = x - gx / slope;
    if (!(slope > 0.0) || !(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double step = std::abs(next - x);
    x = next;
    gx = g(x);
    if (step <= rel_tol * std::max(x, 1e-300) || hi - lo <= rel_tol * hi) {
      // Polish to full precision: keep Newton steps while the residual shrinks.
      for (int extra = 0; extra < 3 && gx != 0.0; ++extra) {
        const double refined = x - gx / dg(x);
        const double g_refined = g(refined);
        if (!(std::abs(g_refined) < std::abs(gx))) break;
        x = refined;
        gx = g_refined;
      }
      return x;
    }
  }
  throw NumericalError(std::string(what) + ": root finder did not converge on bracket " +
                       bracket_text(lo, hi));
}

std::uint64_t binomial(int n, int k) {
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / i;
  return r;
}

}  // namespace

double partial_bell(int n, int k, std::span<const double> x) {
  if (n < 0 || k < 0) throw DomainError("partial_bell: n and k must be >= 0");
  if (n > 0 && k > 0 && static_cast<int>(x.size()) < n - k + 1) {
    throw DomainError("partial_bell: need n - k + 1 arguments");
  }
  // table[m][j] = B_{m,j}
  std::vector<std::vector<double>> table(n + 1, std::vector<double>(k + 1, 0.0));
  table[0][0] = 1.0;
  for (int m = 1; m <= n; ++m) {
    for (int j = 1; j <= std::min(m, k); ++j) {
      double sum = 0.0;
      for (int i = 1; i <= m - j + 1; ++i) {
        const double prev = table[m - i][j - 1];
        if (prev != 0.0) sum += static_cast<double>(binomial(m - 1, i - 1)) * x[i - 1] * prev;
      }
      table[m][j] = sum;
    }
  }
  return table[n][k];
}

InverseExponent::InverseExponent(LevyModel model, double tolerance)
    : model_(std::move(model)), tolerance_(tolerance), regime_(levy::regime(model_)) {
  if (!(tolerance > 0.0)) throw DomainError("InverseExponent: tolerance must be > 0");
  if (model_.bounded_variation() && !(model_.bounded_variation_drift() > 0.0)) {
    // Nonincreasing paths: psi stays bounded and has no right inverse.
    throw UnsupportedError("InverseExponent: the model has nonincreasing paths (premium <= 0)");
  }
  if (regime_ != Regime::DriftsDown) return;

  // psi' goes from psi'(0+) < 0 to +inf; its zero is the minimiser of psi.
  auto dpsi = [this](double t) { return laplace_exponent_derivative(model_, t, 1); };
  auto d2psi = [this](double t) { return laplace_exponent_derivative(model_, t, 2); };
  double lo = 0.0;
  double hi = 1.0;
  for (int i = 0; dpsi(hi) < 0.0; ++i) {
    if (i == kMaxExpansions) {
      throw NumericalError("InverseExponent: no sign change of psi' up to " + bracket_text(lo, hi));
    }
    lo = hi;
    hi *= 2.0;
  }
  argmin_ = safeguarded_newton(dpsi, d2psi, lo, hi, tolerance_, "argmin of psi");
  phi_zero_ = largest_root(0.0, argmin_);
}

double InverseExponent::largest_root(double q, double lo) const {
  auto g = [&](double t) { return laplace_exponent(model_, t) - q; };
  auto dg = [&](double t) { return laplace_exponent_derivative(model_, t, 1); };
  double hi = std::max(1.0, 2.0 * lo);
  for (int i = 0; g(hi) < 0.0; ++i) {
    if (i == kMaxExpansions) {
      throw NumericalError("phi: bracket expansion failed at " + bracket_text(lo, hi));
    }
    lo = hi;
    hi *= 2.0;
  }
  const double root = safeguarded_newton(g, dg, lo, hi, tolerance_, "phi");
  const double residual = std::abs(g(root));
  if (!(residual <= 1e-10 * (1.0 + q))) {
    std::ostringstream os;
    os.precision(3);
    os << "phi: residual " << residual << " at q = " << q << " exceeds tolerance near root "
       << root;
    throw NumericalError(os.str());
  }
  return root;
}

double InverseExponent::phi(double q) const {
  if (!(q >= 0.0) || std::isinf(q)) throw DomainError("phi: q must be finite and >= 0");
  if (q == 0.0) return phi_zero_;
  return largest_root(q, phi_zero_);
}

double InverseExponent::phi_derivative(double q, int n) const {
  if (n < 1 || n > kMaxBellOrder) throw DomainError("phi_derivative: order must be in [1, 10]");
  if (!(q >= 0.0)) throw DomainError("phi_derivative: q must be >= 0");
  if (q == 0.0 && regime_ != Regime::DriftsUp) {
    throw DomainError("phi_derivative: q = 0+ requires a model drifting up");
  }
  const double theta = phi(q);
  std::array<double, kMaxBellOrder + 1> dpsi{};
  for (int k = 1; k <= n; ++k) {
    dpsi[k] = laplace_exponent_derivative(model_, theta, k);
    if (std::isinf(dpsi[k])) return (n % 2 == 1) ? kInf : -kInf;
  }
  std::vector<double> dphi(n);  // dphi[j-1] = Phi^(j)
  dphi[0] = 1.0 / dpsi[1];
  for (int m = 2; m <= n; ++m) {
    double sum = 0.0;
    for (int j = 1; j <= m - 1; ++j) {
      sum += dpsi[m + 1 - j] * partial_bell(m, m + 1 - j, std::span<const double>(dphi.data(), j));
    }
    dphi[m - 1] = -sum / dpsi[1];
  }
  return dphi[n - 1];
}

double InverseExponent::eta(double q) const {
  if (!(q >= 0.0)) throw DomainError("eta: q must be >= 0");
  if (q == 0.0) return regime_ == Regime::DriftsDown ? 0.0 : mean(model_);
  return q / phi(q);
}

double InverseExponent::conjugate_exponent(double theta) const {
  if (regime_ == Regime::DriftsDown) {
    throw DomainError("conjugate_exponent: model drifts down, psi'(0+) < 0");
  }
  if (!(theta >= 0.0) || std::isinf(theta)) {
    throw DomainError("conjugate_exponent: theta must be finite and >= 0");
  }
  const double drift = mean(model_);
  if (theta == 0.0) return drift;

  // Integrated tail int_0^inf (1 - e^{-theta y}) Pi((y, inf)) dy, split at 1
  // and at the kinks of the claim tail; the last piece uses y = b / t.
  std::set<double> cuts{1.0};
  if (const auto* cp = std::get_if<CompoundPoissonJumps>(&model_.jumps())) {
    if (const auto* pc = std::get_if<ParetoClaim>(&cp->claim.law())) cuts.insert(pc->minimum);
    if (const auto* dc = std::get_if<DeterministicClaim>(&cp->claim.law())) cuts.insert(dc->size);
  }
  auto integrand = [&](double y) {
    if (y <= 0.0) return 0.0;
    // An integrable y^(1 - alpha) singularity overflows only where the
    // neglected mass is negligible.
    const double v = -std::expm1(-theta * y) * tail_measure(model_, y);
    return std::isfinite(v) ? v : 0.0;
  };
  double integral = 0.0;
  if (model_.has_jumps()) {
    double a = 0.0;
    for (double b : cuts) {
      integral += quad::tanh_sinh(integrand, a, b, 1e-13, 1e2);
      a = b;
    }
    auto mapped = [&](double t) {
      // Near t = 0 the weight a / t^2 overflows against a vanishing tail;
      // the neglected sliver is far below the quadrature tolerance.
      const double v = t <= 0.0 ? 0.0 : integrand(a / t) * (a / t) / t;
      return std::isfinite(v) ? v : 0.0;
    };
    integral += quad::tanh_sinh(mapped, 0.0, 1.0, 1e-13, 1e2);
  }
  return drift + 0.5 * model_.gaussian_var() * theta + integral;
}

}  // namespace levy
