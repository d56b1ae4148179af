// Acceptance gate: one [PASS]/[FAIL] line per criterion, nonzero exit on any
// failure. Each criterion also has a wall-clock budget.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "levy/classify.hpp"
#include "levy/cli.hpp"
#include "levy/fracmoment.hpp"
#include "levy/scale.hpp"
#include "levy/simulate.hpp"
#include "levy/verify.hpp"
#include "oracles.hpp"

using namespace levy;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool passed = true;
  std::ostringstream notes;

  void require(bool condition, const std::string& what) {
    if (!condition) {
      passed = false;
      notes << " " << what << ";";
    }
  }
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

void suite_into(const std::string& name, Outcome& o, std::size_t min_checks = 1) {
  const SuiteResult r = run_suite(name);
  o.require(r.checks.size() >= min_checks, name + ": only " + std::to_string(r.checks.size()) + " checks");
  for (const auto& c : r.checks) {
    if (!c.passed) o.require(false, c.name + " " + c.detail);
  }
  o.notes << " " << name << " " << r.passed() << "/" << r.checks.size() << ";";
}

SimConfig sim(std::size_t n, std::uint64_t seed, double t_max) {
  SimConfig c;
  c.n_paths = n;
  c.seed = seed;
  c.t_max = t_max;
  return c;
}

void ac1(Outcome& o) {
  double worst = 0.0;
  for (double p : {0.5, 1.0, 2.0}) {
    const ScaleEvaluator ev(LevyModel::brownian(p));
    for (double x : {0.1, 1.0, 5.0}) {
      for (double q : {0.1, 1.0, 10.0}) {
        const double e = oracle::relative_error(ev.passage_lt(q, x), oracle::brownian_lt(p, 1.0, q, x));
        worst = std::max(worst, e);
      }
    }
  }
  o.require(worst <= 1e-6, "relative error " + fmt(worst));
  o.notes << " max rel err " << fmt(worst) << ";";
}

void ac5(Outcome& o) {
  const ScaleEvaluator ev(LevyModel::brownian(0));
  for (double kappa : {0.1, 0.25, 0.4}) {
    const double expected = oracle::brownian_zero_moment_quadrature(1.0, kappa);
    const double value = passage_moment(ev, 1.0, kappa);
    const double e = oracle::relative_error(value, expected);
    o.require(e <= 1e-4, "kappa " + fmt(kappa) + ": " + fmt(value) + " vs " + fmt(expected));
    o.notes << " k=" << kappa << " err " << fmt(e) << ";";
  }
  for (double kappa : {0.5, 0.6, 0.9}) {
    const double value = passage_moment(ev, 1.0, kappa);
    o.require(std::isinf(value) && value > 0, "kappa " + fmt(kappa) + " gave " + fmt(value));
  }
}

void ac6(Outcome& o) {
  const auto m = LevyModel::cramer_lundberg(3, 1, ClaimDistribution::pareto(2.5, 1));
  for (double kappa : {0.5, 1.0, 1.4}) {
    o.require(classify_moment(m, kappa, 1.0).verdict == Verdict::Finite, "kappa " + fmt(kappa) + " not finite");
  }
  for (double kappa : {1.5, 2.0}) {
    o.require(classify_moment(m, kappa, 1.0).verdict == Verdict::Infinite, "kappa " + fmt(kappa) + " not infinite");
  }
  const auto s = sample_passage_times(m, 0.0, sim(1000000, 20240611, 200));
  const double hill = tail_index(s);
  o.require(hill >= 1.3 && hill <= 1.7, "tail index " + fmt(hill));
  o.notes << " tail index " << fmt(hill) << " from " << s.finite_times.size() << " passages;";
}

void ac7(Outcome& o) {
  const auto m = LevyModel::brownian(-1);
  const double abscissa = exponential_moment_abscissa(m);
  o.require(abscissa == 0.5, "abscissa " + fmt(abscissa));
  const auto a = empirical_exponential_moment(sample_passage_times(m, 1.0, sim(100000, 7, 1e4)), 0.25);
  const auto b = empirical_exponential_moment(sample_passage_times(m, 1.0, sim(200000, 7, 1e4)), 0.25);
  const double ratio = b.estimate / a.estimate;
  o.require(std::isfinite(a.estimate) && std::isfinite(b.estimate), "non-finite estimate");
  o.require(ratio >= 0.95 && ratio <= 1.05, "ratio " + fmt(ratio));
  o.notes << " E[exp(tau/4)] " << fmt(a.estimate) << " -> " << fmt(b.estimate) << ", ratio " << fmt(ratio) << ";";
}

void ac8(Outcome& o) {
  const double p = 2, lambda = 1, mu = 1;
  const auto m = LevyModel::cramer_lundberg(p, lambda, ClaimDistribution::exponential(mu));
  const ScaleEvaluator ev(m);
  for (double x : {0.0, 1.0, 5.0}) {
    const double closed = oracle::cl_exp_ruin(p, lambda, mu, x);
    const double value = ev.ruin_probability(x);
    o.require(std::abs(value - closed) <= 1e-8, "x " + fmt(x) + ": " + fmt(value) + " vs " + fmt(closed));
    const auto s = sample_passage_times(m, x, sim(200000, 20240611, 200));
    const auto f = passage_frequency(s);
    const double z = std::abs(f.estimate - value) / f.std_error;
    o.require(z <= 3.0, "x " + fmt(x) + ": Monte Carlo " + fmt(z) + " SE away");
    o.notes << " x=" << x << " " << fmt(z) << " SE;";
  }
}

void ac10(Outcome& o) {
  const fs::path dir = fs::temp_directory_path() / "levy_passage_acceptance";
  fs::create_directories(dir);
  std::string reference;
  for (const char* workers : {"1", "4", "8"}) {
    const fs::path csv = dir / (std::string("sim_") + workers + ".csv");
    std::ostringstream out, err;
    const int code = run_cli({"simulate", "--model", std::string(LEVY_MODELS_DIR) + "/cl-exponential.toml", "--x",
                              "1", "--n-paths", "100000", "--seed", "42", "--t-max", "100", "--workers", workers,
                              "--out", csv.string()},
                             out, err);
    o.require(code == kExitOk, std::string("workers ") + workers + " exit " + std::to_string(code) + " " + err.str());
    std::ifstream in(csv, std::ios::binary);
    std::stringstream bytes;
    bytes << in.rdbuf();
    if (reference.empty()) {
      reference = bytes.str();
      o.notes << " " << reference.size() << " bytes;";
    } else {
      o.require(bytes.str() == reference, std::string("workers ") + workers + " differs");
    }
  }
  o.require(!reference.empty(), "empty CSV");
}

struct Criterion {
  const char* id;
  const char* title;
  double budget_seconds;
  std::function<void(Outcome&)> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"AC1", "Brownian passage transform", 5, ac1},
      {"AC2", "inverse round trip", 5, [](Outcome& o) { suite_into("roundtrip", o); }},
      {"AC3", "conjugacy", 10, [](Outcome& o) { suite_into("conjugacy", o); }},
      {"AC4", "Bell recursion", 5, [](Outcome& o) { suite_into("bell", o); }},
      {"AC5", "fractional moment closed case", 30, ac5},
      {"AC6", "drift-up Pareto desk check", 180, ac6},
      {"AC7", "exponential moments when drifting down", 60, ac7},
      {"AC8", "ruin probabilities", 120, ac8},
      {"AC9", "classifier/numerics concordance", 300, [](Outcome& o) { suite_into("concordance", o, 20); }},
      {"AC10", "determinism across worker counts", 60, ac10},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    o.require(seconds <= c.budget_seconds, "runtime over budget");
    if (!o.passed) ++failures;
    std::cout << (o.passed ? "[PASS] " : "[FAIL] ") << c.id << " " << c.title << " (" << fmt(seconds) << " s of "
              << c.budget_seconds << " s)" << o.notes.str() << std::endl;
  }
  std::cout << (criteria.size() - failures) << "/" << criteria.size() << " acceptance criteria passed" << std::endl;
  return failures == 0 ? 0 : 1;
}
