#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "levy/catalog.hpp"
#include "levy/error.hpp"
#include "levy/inverse.hpp"
#include "levy/verify.hpp"
#include "oracles.hpp"

using namespace levy;

namespace {
LevyModel cl_exp() { return LevyModel::cramer_lundberg(2, 1, ClaimDistribution::exponential(1)); }
}  // namespace

TEST_CASE("phi closed values") {
  const InverseExponent bm(LevyModel::brownian(1));
  CHECK(bm.phi(4.0) == doctest::Approx(2.0).epsilon(1e-13));
  for (double q : {0.01, 0.5, 3.0, 90.0}) {
    CHECK(bm.phi(q) == doctest::Approx(std::sqrt(1 + 2 * q) - 1).epsilon(1e-12));
  }
  CHECK(InverseExponent(LevyModel::brownian(-1)).phi(0.0) == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(InverseExponent(LevyModel::brownian(0)).phi(0.0) == 0.0);
  CHECK(InverseExponent(cl_exp()).phi(0.0) == 0.0);
  // CL Exp: largest root of the quadratic
  const auto [r1, r2] = oracle::cl_exp_roots(2, 1, 1, 3.0);
  CHECK(InverseExponent(cl_exp()).phi(3.0) == doctest::Approx(r1).epsilon(1e-12));
}

TEST_CASE("phi(0) > 0 iff drifting down") {
  for (const auto& [name, m] : reference_models()) {
    CAPTURE(name);
    const InverseExponent inv(m);
    CHECK((inv.phi(0.0) > 0.0) == (regime(m) == Regime::DriftsDown));
  }
}

TEST_CASE("round trips and monotonicity") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> uq(0.0, 100.0);
  for (const auto& [name, m] : reference_models()) {
    CAPTURE(name);
    const InverseExponent inv(m);
    std::vector<double> qs;
    for (int i = 0; i < 20; ++i) qs.push_back(uq(rng));
    std::sort(qs.begin(), qs.end());
    double previous = -1.0;
    for (double q : qs) {
      const double th = inv.phi(q);
      CHECK(std::abs(laplace_exponent(m, th) - q) <= 1e-10 * std::max(q, 1.0));
      CHECK(th > previous);
      previous = th;
    }
    for (double th : {0.5, 2.0, 9.0}) {
      const double theta = inv.phi(0.0) + th;
      CHECK(inv.phi(laplace_exponent(m, theta)) == doctest::Approx(theta).epsilon(1e-10));
    }
  }
}

TEST_CASE("derivatives of phi") {
  CHECK(InverseExponent(cl_exp()).phi_derivative(0.0, 1) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(InverseExponent(LevyModel::brownian(1)).phi_derivative(0.0, 2) == doctest::Approx(-1.0).epsilon(1e-10));

  // Brownian p = 1: Phi(q) = sqrt(1 + 2q) - 1, Phi''' = 3 (1 + 2q)^(-5/2)
  const InverseExponent bm(LevyModel::brownian(1));
  CHECK(bm.phi_derivative(0.5, 3) == doctest::Approx(3.0 * std::pow(2.0, -2.5)).epsilon(1e-10));
  auto phi = [&](double q) { return bm.phi(q); };
  CHECK(oracle::relative_error(richardson_derivative(phi, 0.5, 3, 0.05), bm.phi_derivative(0.5, 3)) < 1e-6);

  CHECK_THROWS_AS(bm.phi_derivative(1.0, 11), DomainError);
  CHECK_THROWS_AS(InverseExponent(LevyModel::brownian(0)).phi_derivative(0.0, 1), DomainError);
}

TEST_CASE("partial Bell polynomials against set partitions") {
  const std::vector<double> xs{1.3, -0.7, 2.1, 0.4, -1.9, 0.8, 1.1};
  for (int n = 1; n <= 7; ++n) {
    for (int k = 1; k <= n; ++k) {
      CAPTURE(n);
      CAPTURE(k);
      const double expected = oracle::partial_bell_bruteforce(n, k, xs);
      CHECK(partial_bell(n, k, xs) == doctest::Approx(expected).epsilon(1e-12));
    }
  }
  const std::vector<double> ones(10, 1.0);
  CHECK(partial_bell(10, 3, ones) == 9330.0);  // Stirling number S(10, 3)
}

TEST_CASE("eta") {
  CHECK(InverseExponent(LevyModel::brownian(0)).eta(2.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(InverseExponent(LevyModel::brownian(-1)).eta(0.0) == 0.0);
  for (const auto& [name, m] : reference_models()) {
    CAPTURE(name);
    const InverseExponent inv(m);
    if (regime(m) == Regime::DriftsDown) continue;
    CHECK(inv.eta(0.0) == doctest::Approx(mean(m)).epsilon(1e-8));
    CHECK(std::abs(inv.eta(1e-12) - inv.eta(0.0)) < 1e-3 * std::max(1.0, inv.eta(0.0)));
    double previous = inv.eta(0.0);
    for (double q : {0.01, 0.1, 1.0, 10.0}) {
      CHECK(inv.eta(q) >= previous);
      previous = inv.eta(q);
    }
  }
}

TEST_CASE("conjugate exponent") {
  const InverseExponent bm(LevyModel::brownian(0.4));
  CHECK(bm.conjugate_exponent(3.0) == doctest::Approx(0.4 + 1.5));
  const InverseExponent cl(cl_exp());
  CHECK(cl.conjugate_exponent(1.0) == doctest::Approx(1.5).epsilon(1e-9));
  for (const auto& [name, m] : reference_models()) {
    if (regime(m) == Regime::DriftsDown) continue;
    CAPTURE(name);
    const InverseExponent inv(m);
    for (double theta : {0.01, 0.2, 1.0, 5.0, 50.0}) {
      CHECK(oracle::relative_error(theta * inv.conjugate_exponent(theta), laplace_exponent(m, theta)) < 1e-8);
    }
    for (double q : {0.1, 1.0, 10.0}) {
      CHECK(oracle::relative_error(inv.conjugate_exponent(inv.phi(q)), inv.eta(q)) < 1e-8);
    }
  }
}

TEST_CASE("domain errors") {
  const InverseExponent bm(LevyModel::brownian(1));
  CHECK_THROWS_AS(bm.phi(-1.0), DomainError);
  CHECK_THROWS_AS(bm.phi(std::nan("")), DomainError);
  // premium <= 0: psi is bounded, there is no right inverse
  CHECK_THROWS_AS(InverseExponent(LevyModel::cramer_lundberg(0, 1, ClaimDistribution::exponential(1))),
                  UnsupportedError);
}
