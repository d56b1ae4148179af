#include "doctest.h"

#include <cmath>
#include <limits>

#include "json.hpp"

#include "levy/catalog.hpp"
#include "levy/classify.hpp"
#include "levy/error.hpp"
#include "levy/fracmoment.hpp"
#include "levy/verify.hpp"

using namespace levy;

namespace {
LevyModel cl_pareto() { return LevyModel::cramer_lundberg(3, 1, ClaimDistribution::pareto(2.5, 1)); }
}  // namespace

TEST_CASE("drift-up: jump moment of order kappa + 1") {
  const auto f = classify_moment(cl_pareto(), 1.0, 1.0);
  CHECK(f.verdict == Verdict::Finite);
  CHECK(f.clause == "Thm 3.1(ii)");
  CHECK(f.threshold.value() == doctest::Approx(1.5));
  const auto boundary = classify_moment(cl_pareto(), 1.5, 1.0);
  CHECK(boundary.verdict == Verdict::Infinite);
  CHECK(classify_moment(cl_pareto(), 1.4, 1.0).verdict == Verdict::Finite);
  CHECK(classify_moment(cl_pareto(), 2.0, 1.0).verdict == Verdict::Infinite);
  // independent of the level
  for (double x : {0.0, 0.5, 10.0}) {
    CHECK(classify_moment(cl_pareto(), 1.2, x).verdict == Verdict::Finite);
    CHECK(classify_moment(cl_pareto(), 1.7, x).verdict == Verdict::Infinite);
  }
}

TEST_CASE("sharp thresholds") {
  const auto bm0 = LevyModel::brownian(0);
  CHECK(classify_moment(bm0, 0.49, 1).verdict == Verdict::Finite);
  const auto half = classify_moment(bm0, 0.5, 1);
  CHECK(half.verdict == Verdict::Infinite);
  CHECK(half.clause == "Remark(i)");
  CHECK(half.threshold.value() == 0.5);

  const auto st = LevyModel::stable(1.5, 1.0);
  CHECK(classify_moment(st, 0.2, 1).verdict == Verdict::Finite);
  const auto third = classify_moment(st, 1.0 / 3.0, 1);
  CHECK(third.verdict == Verdict::Infinite);
  CHECK(third.clause == "Remark(ii)");
  CHECK(third.threshold.value() == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("oscillating models with jumps") {
  const auto cl0 = LevyModel::cramer_lundberg(1, 1, ClaimDistribution::exponential(1));
  CHECK(classify_moment(cl0, 1.0, 1).clause == "Thm 3.1(iii)");
  CHECK(classify_moment(cl0, 1.0, 1).verdict == Verdict::Infinite);
  CHECK(classify_moment(cl0, 0.6, 1).clause == "Thm 3.1(iii)(b)");
  CHECK(classify_moment(cl0, 0.3, 1).verdict == Verdict::Unknown);

  // Pareto(1.5) claims have mean 3, so p = 3 oscillates: kappa* = 0.5, psi''(0+) infinite
  const auto heavy = LevyModel::cramer_lundberg(3, 1, ClaimDistribution::pareto(1.5, 1));
  REQUIRE(regime(heavy) == Regime::Oscillates);
  const auto a = classify_moment(heavy, 0.7, 1);
  CHECK(a.verdict == Verdict::Infinite);
  CHECK(a.clause == "Thm 3.1(iii)(a)");
  CHECK(classify_moment(heavy, 0.5, 1).verdict == Verdict::Infinite);
  CHECK(classify_moment(heavy, 0.4, 1).verdict == Verdict::Unknown);
}

TEST_CASE("drift-down") {
  const auto v = classify_moment(LevyModel::brownian(-1), 5.0, 1);
  CHECK(v.verdict == Verdict::Finite);
  CHECK(v.clause == "Thm 3.1(i)");
  CHECK(exponential_moment_abscissa(LevyModel::brownian(-1)) == 0.5);
  // CL p = 1, lambda = 2, Exp(1): psi = t - 2t/(1+t), min at t = sqrt(2) - 1
  const auto cl = LevyModel::cramer_lundberg(1, 2, ClaimDistribution::exponential(1));
  const double abscissa = exponential_moment_abscissa(cl);
  CHECK(abscissa > 0.0);
  CHECK(abscissa == doctest::Approx(3.0 - 2.0 * std::sqrt(2.0)).epsilon(1e-9));
  CHECK_THROWS_AS(exponential_moment_abscissa(LevyModel::brownian(1)), DomainError);
}

TEST_CASE("errors") {
  CHECK_THROWS_AS(classify_moment(LevyModel::brownian(1), 0.0, 1), DomainError);
  CHECK_THROWS_AS(classify_moment(LevyModel::brownian(1), -1.0, 1), DomainError);
  CHECK_THROWS_AS(classify_moment(LevyModel::brownian(1), 0.5, 0.0), DomainError);
}

TEST_CASE("totality, monotonicity, Unknown only where allowed") {
  const std::vector<double> kappas{0.1, 0.2, 1.0 / 3.0, 0.45, 0.5, 0.6, 0.9, 1.0, 1.4, 1.5, 2.0, 3.0};
  for (const auto& [name, m] : reference_models()) {
    CAPTURE(name);
    bool infinite_seen = false;
    for (double kappa : kappas) {
      CAPTURE(kappa);
      const auto v = classify_moment(m, kappa, 1.0);
      if (infinite_seen) CHECK(v.verdict == Verdict::Infinite);
      if (v.verdict == Verdict::Infinite) infinite_seen = true;
      if (v.verdict == Verdict::Unknown) {
        CHECK(regime(m) == Regime::Oscillates);
        CHECK(m.has_jumps());
        CHECK(m.kind() != ModelKind::Stable);
        CHECK(kappa < 1.0);
      }
      if (v.threshold && std::isfinite(*v.threshold)) {
        if (kappa < *v.threshold) CHECK(v.verdict == Verdict::Finite);
        if (kappa > *v.threshold) CHECK(v.verdict == Verdict::Infinite);
      }
    }
  }
}

TEST_CASE("verdict JSON") {
  const auto j = nlohmann::json::parse(classify_moment(LevyModel::brownian(0), 0.2, 1).to_json());
  CHECK(j["verdict"] == "finite");
  CHECK(j["clause"] == "Remark(i)");
  CHECK(j["threshold"] == 0.5);
  const auto u = nlohmann::json::parse(
      classify_moment(LevyModel::cramer_lundberg(1, 1, ClaimDistribution::exponential(1)), 0.2, 1).to_json());
  CHECK(u["threshold"].is_null());
}

TEST_CASE("classifier and numerics agree on a sample of the matrix") {
  int checked = 0;
  for (const auto& c : concordance_matrix()) {
    if (c.model.kind() != ModelKind::Brownian) continue;
    CAPTURE(c.model_name);
    CAPTURE(c.kappa);
    const auto v = classify_moment(c.model, c.kappa, c.x);
    const double value = passage_moment(ScaleEvaluator(c.model), c.x, c.kappa);
    if (v.verdict == Verdict::Finite) CHECK(std::isfinite(value));
    if (v.verdict == Verdict::Infinite) CHECK(std::isinf(value));
    ++checked;
  }
  CHECK(checked >= 10);
}
