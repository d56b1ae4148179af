#include "levy/verify.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "levy/catalog.hpp"
#include "levy/classify.hpp"
#include "levy/error.hpp"
#include "levy/fracmoment.hpp"
#include "levy/inverse.hpp"
#include "levy/scale.hpp"
#include "levy/simulate.hpp"

namespace levy {
namespace {

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

// One check per assertion; exceptions become failed checks.
template <class F>
void check(SuiteResult& out, std::string name, F body) {
  CheckResult c;
  c.name = std::move(name);
  try {
    body(c);
  } catch (const std::exception& e) {
    c.passed = false;
    c.detail = std::string("exception: ") + e.what();
  }
  out.checks.push_back(std::move(c));
}

SuiteResult roundtrip() {
  SuiteResult out{"roundtrip", {}};
  for (const auto& [name, model] : reference_models()) {
    check(out, name, [&](CheckResult& c) {
      const InverseExponent inv(model);
      double worst = 0.0;
      for (int i = 0; i < 50; ++i) {
        const double q = 100.0 * i / 49.0;
        const double back = laplace_exponent(model, inv.phi(q));
        worst = std::max(worst, q == 0.0 ? std::abs(back) : rel_err(back, q));
      }
      c.passed = worst <= 1e-10;
      c.detail = fmt("max relative error of psi(Phi(q)) - q over 50 q in [0, 100]: %.3g", worst);
    });
  }
  return out;
}

SuiteResult conjugacy() {
  SuiteResult out{"conjugacy", {}};
  for (const auto& [name, model] : reference_models()) {
    if (regime(model) == Regime::DriftsDown) continue;
    check(out, name, [&](CheckResult& c) {
      const InverseExponent inv(model);
      double worst_theta = 0.0;
      for (double theta : {0.1, 0.5, 1.0, 2.0, 5.0}) {
        worst_theta = std::max(
            worst_theta, rel_err(theta * inv.conjugate_exponent(theta), laplace_exponent(model, theta)));
      }
      double worst_eta = 0.0;
      for (double q : {0.1, 1.0, 10.0}) {
        worst_eta = std::max(worst_eta, rel_err(inv.conjugate_exponent(inv.phi(q)), inv.eta(q)));
      }
      c.passed = worst_theta <= 1e-8 && worst_eta <= 1e-8;
      c.detail = fmt("theta phi(theta) vs psi: %.3g; phi(Phi(q)) vs eta(q): %.3g", worst_theta, worst_eta);
    });
  }
  return out;
}

SuiteResult bell() {
  SuiteResult out{"bell", {}};
  for (const auto& [name, model] : reference_models()) {
    const bool in_scope = name == "brownian-up" || name == "brownian-up-wide" ||
                          name == "brownian-down" || name == "cl-exponential-up" ||
                          name == "cl-exponential-down";
    if (!in_scope) continue;
    check(out, name, [&](CheckResult& c) {
      const InverseExponent inv(model);
      auto phi = [&](double q) { return inv.phi(q); };
      double worst = 0.0;
      for (double q : {0.25, 1.0, 4.0}) {
        for (int n = 2; n <= 4; ++n) {
          // A step proportional to q keeps rounding noise / h^n below the O(h^6) bias.
          const double fd = richardson_derivative(phi, q, n, 0.15 * q);
          worst = std::max(worst, rel_err(inv.phi_derivative(q, n), fd));
        }
      }
      c.passed = worst <= 1e-5;
      c.detail = fmt("max relative gap to Richardson differences, n = 2..4: %.3g", worst);
    });
  }
  return out;
}

SuiteResult brownian_lt() {
  SuiteResult out{"brownian-lt", {}};
  for (double p : {0.5, 1.0, 2.0}) {
    const ScaleEvaluator ev(LevyModel::brownian(p));
    for (double x : {0.1, 1.0, 5.0}) {
      for (double q : {0.1, 1.0, 10.0}) {
        check(out, fmt("p=%g x=%g q=%g", p, x, q), [&](CheckResult& c) {
          const double want = std::exp(-(std::sqrt(p * p + 2.0 * q) + p) * x);
          const double err = rel_err(ev.passage_lt(q, x), want);
          c.passed = err <= 1e-6;
          c.detail = fmt("relative error %.3g", err);
        });
      }
    }
  }
  return out;
}

SuiteResult ruin() {
  SuiteResult out{"ruin", {}};
  const double p = 2.0, lambda = 1.0, mu = 1.0;
  const LevyModel model = LevyModel::cramer_lundberg(p, lambda, ClaimDistribution::exponential(mu));
  const ScaleEvaluator ev(model);
  for (double x : {0.0, 1.0, 5.0}) {
    const double closed = lambda / (p * mu) * std::exp(-(mu - lambda / p) * x);
    check(out, fmt("closed form x=%g", x), [&](CheckResult& c) {
      const double err = rel_err(ev.ruin_probability(x), closed);
      c.passed = err <= 1e-8;
      c.detail = fmt("relative error %.3g", err);
    });
    check(out, fmt("monte carlo x=%g", x), [&](CheckResult& c) {
      SimConfig cfg;
      cfg.n_paths = 200000;
      cfg.t_max = 200.0;
      cfg.seed = 20240611;
      const EmpiricalValue f = passage_frequency(sample_passage_times(model, x, cfg));
      const double z = std::abs(f.estimate - closed) / f.std_error;
      c.passed = z <= 3.0;
      c.detail = fmt("frequency %.5f vs %.5f (%.2f SE)", f.estimate, closed, z);
    });
  }
  return out;
}

SuiteResult concordance() {
  SuiteResult out{"concordance", {}};
  for (const ConcordanceCase& cc : concordance_matrix()) {
    check(out, cc.model_name + fmt(" x=%g kappa=%g", cc.x, cc.kappa), [&](CheckResult& c) {
      const MomentVerdict v = classify_moment(cc.model, cc.kappa, cc.x);
      const double m = passage_moment(ScaleEvaluator(cc.model), cc.x, cc.kappa);
      const bool contradiction = (v.verdict == Verdict::Finite && !std::isfinite(m)) ||
                                 (v.verdict == Verdict::Infinite && std::isfinite(m));
      c.passed = v.verdict != Verdict::Unknown && !contradiction;
      c.detail = std::string(to_string(v.verdict)) + " (" + v.clause + "), numerics " + fmt("%.8g", m);
    });
  }
  return out;
}

SuiteResult determinism() {
  SuiteResult out{"determinism", {}};
  const LevyModel model = LevyModel::cramer_lundberg(2.0, 1.0, ClaimDistribution::exponential(1.0));
  SimConfig cfg;
  cfg.n_paths = 20000;
  cfg.t_max = 100.0;
  cfg.seed = 7;
  std::string reference;
  for (unsigned workers : {1u, 4u, 8u}) {
    check(out, fmt("workers=%g", workers), [&](CheckResult& c) {
      cfg.workers = workers;
      std::ostringstream csv;
      write_csv(sample_passage_times(model, 1.0, cfg), csv);
      if (reference.empty()) reference = csv.str();
      c.passed = csv.str() == reference;
      c.detail = c.passed ? "CSV identical to workers=1" : "CSV differs from workers=1";
    });
  }
  return out;
}

}  // namespace

std::size_t SuiteResult::passed() const {
  std::size_t n = 0;
  for (const CheckResult& c : checks) n += c.passed ? 1 : 0;
  return n;
}

std::vector<std::string> suite_names() {
  return {"roundtrip", "conjugacy", "bell", "brownian-lt", "ruin", "concordance", "determinism"};
}

SuiteResult run_suite(const std::string& name) {
  if (name == "roundtrip") return roundtrip();
  if (name == "conjugacy") return conjugacy();
  if (name == "bell") return bell();
  if (name == "brownian-lt") return brownian_lt();
  if (name == "ruin") return ruin();
  if (name == "concordance") return concordance();
  if (name == "determinism") return determinism();
  std::string known;
  for (const std::string& s : suite_names()) known += (known.empty() ? "" : ", ") + s;
  throw InputError("unknown suite '" + name + "' (known: " + known + ")");
}

double richardson_derivative(const std::function<double(double)>& f, double x, int n, double h) {
  if (n < 1) throw DomainError("richardson_derivative: n must be >= 1");
  auto central = [&](double step) {
    // sum_i (-1)^i C(n, i) f(x + (n/2 - i) step) / step^n
    double sum = 0.0;
    double binom = 1.0;
    for (int i = 0; i <= n; ++i) {
      sum += ((i % 2 == 0) ? binom : -binom) * f(x + (0.5 * n - i) * step);
      binom = binom * (n - i) / (i + 1);
    }
    return sum / std::pow(step, n);
  };
  const double d1 = central(h);
  const double d2 = central(h / 2.0);
  const double d4 = central(h / 4.0);
  const double r1 = (4.0 * d2 - d1) / 3.0;
  const double r2 = (4.0 * d4 - d2) / 3.0;
  return (16.0 * r2 - r1) / 15.0;
}

std::vector<ConcordanceCase> concordance_matrix() {
  struct Row {
    const char* model;
    double x;
    std::vector<double> kappas;
  };
  const std::vector<Row> rows = {
      {"brownian-up", 1.0, {0.5, 1.0, 2.0}},
      {"brownian-zero", 1.0, {0.1, 0.25, 0.4, 0.5, 0.6, 0.9, 1.5}},
      {"brownian-down", 1.0, {0.5, 1.5}},
      {"cl-exponential-up", 1.0, {0.5, 1.0, 1.5, 2.0}},
      {"cl-exponential-zero", 1.0, {0.6, 1.0}},
      {"cl-exponential-down", 1.0, {0.5, 2.0}},
      {"cl-pareto-up", 2.0, {0.5, 1.0, 2.0}},
      {"cl-lognormal-up", 1.0, {0.5, 1.5}},
      {"cl-deterministic-up", 2.0, {0.5, 1.5}},
      {"jump-diffusion-up", 1.0, {0.5, 1.5}},
      {"jump-diffusion-down", 1.0, {0.5}},
      {"stable-zero", 1.0, {0.2, 0.5}},
      {"stable-up", 1.0, {0.2, 0.6}},
  };
  const std::vector<NamedModel> models = reference_models();
  std::vector<ConcordanceCase> out;
  for (const Row& row : rows) {
    for (const NamedModel& m : models) {
      if (m.name != row.model) continue;
      for (double kappa : row.kappas) out.push_back({m.name, m.model, row.x, kappa});
    }
  }
  return out;
}

}  // namespace levy
