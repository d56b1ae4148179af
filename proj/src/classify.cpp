#include "levy/classify.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "json.hpp"

#include "levy/error.hpp"
#include "levy/inverse.hpp"

namespace levy {
namespace {

std::string number(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

MomentVerdict make(Verdict v, std::string clause, std::string detail,
                   std::optional<double> threshold = std::nullopt) {
  return MomentVerdict{v, std::move(clause), std::move(detail), threshold};
}

bool is_driftless_brownian(const LevyModel& m) {
  return m.kind() == ModelKind::Brownian && m.linear_coefficient() == 0.0;
}

bool is_pure_stable(const LevyModel& m) {
  return m.kind() == ModelKind::Stable && m.linear_coefficient() == 0.0 &&
         m.gaussian_var() == 0.0;
}

}  // namespace

const char* to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::Finite: return "finite";
    case Verdict::Infinite: return "infinite";
    case Verdict::Unknown: return "unknown";
  }
  return "?";
}

std::string MomentVerdict::to_json() const {
  nlohmann::json j;
  j["verdict"] = to_string(verdict);
  j["clause"] = clause;
  j["threshold"] = threshold ? nlohmann::json(*threshold) : nlohmann::json(nullptr);
  j["detail"] = detail;
  return j.dump();
}

MomentVerdict classify_moment(const LevyModel& model, double kappa, double x) {
  if (!(kappa > 0.0) || std::isinf(kappa)) {
    throw DomainError("classify_moment: kappa must be finite and > 0");
  }
  if (!(x >= 0.0) || std::isinf(x)) throw DomainError("classify_moment: x must be finite and >= 0");
  if (x == 0.0 && !model.bounded_variation()) {
    throw DomainError("classify_moment: x = 0 is excluded for unbounded variation");
  }

  const double order_sup = jump_moment_order_sup(model);
  switch (regime(model)) {
    case Regime::DriftsDown:
      return make(Verdict::Finite, "Thm 3.1(i)",
                  "psi'(0+) < 0: tau_x has exponential moments, all power moments are finite",
                  std::numeric_limits<double>::infinity());

    case Regime::DriftsUp: {
      // Finite iff the (kappa + 1)-th jump moment is; Pareto boundary diverges.
      const double threshold = order_sup - 1.0;
      if (kappa + 1.0 < order_sup) {
        return make(Verdict::Finite, "Thm 3.1(ii)",
                    "psi'(0+) > 0 and int_[1,inf) y^(kappa+1) Pi(dy) < inf", threshold);
      }
      return make(Verdict::Infinite, "Thm 3.1(ii)",
                  "psi'(0+) > 0 and int_[1,inf) y^(kappa+1) Pi(dy) = inf (jump moments exist only "
                  "below order " + number(order_sup) + ")",
                  threshold);
    }

    case Regime::Oscillates:
      break;
  }

  // Sharp thresholds first (strict: the boundary itself is infinite).
  if (is_driftless_brownian(model)) {
    return make(kappa < 0.5 ? Verdict::Finite : Verdict::Infinite, "Remark(i)",
                "driftless Brownian motion: finite iff kappa < 1/2", 0.5);
  }
  if (is_pure_stable(model)) {
    const double alpha = std::get<StableJumps>(model.jumps()).index;
    const double threshold = (alpha - 1.0) / alpha;  // rounds 1/3 to 1.0 / 3.0 for alpha = 1.5
    return make(kappa < threshold ? Verdict::Finite : Verdict::Infinite, "Remark(ii)",
                "spectrally negative stable process: finite iff kappa < 1 - 1/alpha = " +
                    number(threshold),
                threshold);
  }

  if (kappa >= 1.0) {
    return make(Verdict::Infinite, "Thm 3.1(iii)",
                "psi'(0+) = 0: moments of order >= 1 are infinite");
  }
  if (second_derivative_finite_at_zero(model) && kappa > 0.5) {
    return make(Verdict::Infinite, "Thm 3.1(iii)(b)",
                "psi'(0+) = 0 and psi''(0+) < inf: moments of order > 1/2 are infinite");
  }
  const double critical = std::max(0.0, order_sup - 1.0);
  if (critical <= 1.0 && kappa >= critical) {
    return make(Verdict::Infinite, "Thm 3.1(iii)(a)",
                "psi'(0+) = 0 and int_[1,inf) y^(kappa*+1) Pi(dy) = inf for kappa* = " +
                    number(critical) + " <= kappa",
                critical);
  }
  return make(Verdict::Unknown, "Thm 3.1(iii)",
              "psi'(0+) = 0: no criterion decides kappa = " + number(kappa) +
                  " for this model (open case)");
}

double exponential_moment_abscissa(const LevyModel& model) {
  if (regime(model) != Regime::DriftsDown) {
    throw DomainError("exponential_moment_abscissa: model must drift down");
  }
  if (model.kind() == ModelKind::Brownian) {
    // min of p t + s2 t^2 / 2 is -p^2 / (2 s2)
    const double p = model.linear_coefficient();
    return p * p / (2.0 * model.gaussian_var());
  }
  const InverseExponent inv(model);
  return -laplace_exponent(model, inv.argmin());
}

}  // namespace levy
