#include "doctest.h"

#include <cmath>
#include <limits>

#include "levy/error.hpp"
#include "levy/fracmoment.hpp"
#include "levy/simulate.hpp"
#include "oracles.hpp"

using namespace levy;

namespace {
const double kInf = std::numeric_limits<double>::infinity();

double gamma_moment_quadrature(double kappa) {
  return oracle::integrate_half_line([&](double t) { return std::pow(t, kappa) * std::exp(-t); });
}
}  // namespace

TEST_CASE("marchaud basics") {
  CHECK(marchaud([](double) { return 0.7; }, 0.4, 0.0) == 0.0);
  CHECK(marchaud([](double) { return 0.7; }, 0.9, 3.0) == 0.0);
  for (double a : {0.5, 1.0, 3.0}) {
    for (double kappa : {0.2, 0.5, 0.8}) {
      CAPTURE(a);
      CAPTURE(kappa);
      CHECK(oracle::relative_error(marchaud([&](double z) { return std::exp(-a * z); }, kappa, 0.0),
                                   std::pow(a, kappa)) < 1e-7);
    }
  }
  // at z > 0 the derivative of e^(-a z) scales by e^(-a z)
  CHECK(oracle::relative_error(marchaud([](double z) { return std::exp(-2 * z); }, 0.5, 0.3),
                               std::sqrt(2.0) * std::exp(-0.6)) < 1e-7);
  CHECK(marchaud([](double u) { return std::exp(-std::sqrt(2 * u)); }, 0.6, 0.0) == kInf);
}

TEST_CASE("marchaud errors") {
  auto f = [](double z) { return std::exp(-z); };
  CHECK_THROWS_AS(marchaud(f, 0.0, 0.0), DomainError);
  CHECK_THROWS_AS(marchaud(f, 1.0, 0.0), DomainError);
  CHECK_THROWS_AS(marchaud(f, 0.5, -1.0), DomainError);
  CHECK_THROWS_AS(marchaud([](double z) { return 0.5 + 0.4 * std::cos(z); }, 0.5, 0.0), UnsupportedError);
  MarchaudConfig bad;
  bad.ladder = {1e-3, 1e-2};
  CHECK_THROWS_AS(moment_from_laplace(f, 1.5, bad), DomainError);
}

TEST_CASE("moments from Laplace transforms") {
  const double expected = gamma_moment_quadrature(0.5);
  CHECK(expected == doctest::Approx(0.886227).epsilon(1e-6));
  CHECK(oracle::relative_error(moment_from_laplace([](double z) { return 1 / (1 + z); }, 0.5), expected) < 1e-6);
  CHECK(oracle::relative_error(moment_from_laplace([](double z) { return std::exp(-1.5 * z); }, 2.0), 2.25) < 1e-6);

  const double sqrt_case = oracle::sqrt_lt_marchaud(0.25);
  CHECK(sqrt_case == doctest::Approx(std::pow(2, 0.25) * std::tgamma(0.5) / std::tgamma(0.75)).epsilon(1e-9));
  CHECK(sqrt_case == doctest::Approx(1.719).epsilon(1e-3));
  CHECK(oracle::relative_error(
            moment_from_laplace([](double z) { return std::exp(-std::sqrt(2 * z)); }, 0.25), sqrt_case) < 1e-6);
}

TEST_CASE("Wolfe consistency on closed laws") {
  for (double kappa : {0.3, 0.7, 1.0, 1.5, 2.0}) {
    CAPTURE(kappa);
    const double mu = 2.0;
    const double exp_moment = gamma_moment_quadrature(kappa) / std::pow(mu, kappa);
    CHECK(oracle::relative_error(moment_from_laplace([&](double z) { return mu / (mu + z); }, kappa),
                                 exp_moment) < 1e-4);
    const double a = 1.7;
    CHECK(oracle::relative_error(moment_from_laplace([&](double z) { return std::exp(-a * z); }, kappa),
                                 std::pow(a, kappa)) < 1e-4);
  }
}

TEST_CASE("time scaling") {
  auto g = [](double z) { return 1.0 / std::pow(1 + z, 2.0); };  // Gamma(2, 1)
  for (double kappa : {0.4, 1.3}) {
    for (double c : {0.5, 3.0}) {
      const double base = moment_from_laplace(g, kappa);
      const double scaled = moment_from_laplace([&](double z) { return g(c * z); }, kappa);
      CHECK(oracle::relative_error(scaled, std::pow(c, kappa) * base) < 1e-4);
    }
  }
}

TEST_CASE("passage moments") {
  const ScaleEvaluator bm0(LevyModel::brownian(0));
  for (double kappa : {0.1, 0.25, 0.4}) {
    CAPTURE(kappa);
    const double q = oracle::brownian_zero_moment_quadrature(1.0, kappa);
    CHECK(q == doctest::Approx(oracle::brownian_zero_moment_closed(1.0, kappa)).epsilon(1e-8));
    CHECK(oracle::relative_error(passage_moment(bm0, 1.0, kappa), q) < 1e-4);
  }
  for (double kappa : {0.5, 0.6, 0.9, 1.5}) {
    CAPTURE(kappa);
    CHECK(passage_moment(bm0, 3.0, kappa) == kInf);
  }
  SUBCASE("self-similarity") {
    for (double kappa : {0.2, 0.35}) {
      const double one = passage_moment(bm0, 1.0, kappa);
      for (double x : {0.3, 2.0, 5.0}) {
        CHECK(oracle::relative_error(passage_moment(bm0, x, kappa), std::pow(x, 2 * kappa) * one) < 1e-3);
      }
    }
  }
  SUBCASE("drift-up Brownian: conditional law is inverse Gaussian") {
    // conditioned on passage, p = 1 behaves like drift -1: mean x, variance x
    const ScaleEvaluator bm(LevyModel::brownian(1));
    CHECK(oracle::relative_error(passage_moment(bm, 2.0, 1.0), 2.0) < 1e-5);
    CHECK(oracle::relative_error(passage_moment(bm, 2.0, 2.0), 2.0 + 4.0) < 1e-4);
  }
  SUBCASE("Cramer-Lundberg mean against Monte Carlo") {
    const auto m = LevyModel::cramer_lundberg(2, 1, ClaimDistribution::exponential(1));
    const double analytic = passage_moment(ScaleEvaluator(m), 1.0, 1.0);
    // -d/dq of the transform at 0 over the ruin probability
    CHECK(analytic == doctest::Approx(1.5).epsilon(1e-6));
    SimConfig cfg;
    cfg.n_paths = 200000;
    cfg.seed = 99;
    cfg.t_max = 400;
    const auto s = sample_passage_times(m, 1.0, cfg);
    const auto e = empirical_moment(s, 1.0);
    CHECK(std::abs(e.estimate - analytic) < 3 * e.std_error);
  }
}

TEST_CASE("upward passage moments") {
  const InverseExponent bm0(LevyModel::brownian(0));
  CHECK(oracle::relative_error(upward_passage_moment(bm0, 0.25), oracle::sqrt_lt_marchaud(0.25)) < 1e-6);
  CHECK(upward_passage_moment(bm0, 0.6) == kInf);
  CHECK_THROWS_AS(upward_passage_moment(InverseExponent(LevyModel::brownian(-1)), 0.5), DomainError);

  // E[tau_1^+] = Phi'(0+) = 1 approached as kappa -> 1
  const InverseExponent cl(LevyModel::cramer_lundberg(2, 1, ClaimDistribution::exponential(1)));
  const double a = upward_passage_moment(cl, 0.9);
  const double b = upward_passage_moment(cl, 0.95);
  const double c = upward_passage_moment(cl, 0.99);
  CHECK(std::abs(b - 1.0) < std::abs(a - 1.0));
  CHECK(std::abs(c - 1.0) < std::abs(b - 1.0));
  CHECK(std::abs(c - 1.0) < 0.02);
}
