#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "json.hpp"

#include "levy/error.hpp"
#include "levy/rng.hpp"
#include "levy/scale.hpp"
#include "levy/simulate.hpp"
#include "oracles.hpp"

using namespace levy;

namespace {
LevyModel cl_exp() { return LevyModel::cramer_lundberg(2, 1, ClaimDistribution::exponential(1)); }

SimConfig config(std::size_t n, std::uint64_t seed, double t_max) {
  SimConfig c;
  c.n_paths = n;
  c.seed = seed;
  c.t_max = t_max;
  return c;
}

PassageSampleSet from_samples(std::vector<double> times) {
  PassageSampleSet s;
  s.n_paths = times.size();
  s.undershoots.assign(times.size(), 0.0);
  s.finite_times = std::move(times);
  return s;
}
}  // namespace

TEST_CASE("philox known-answer vector") {
  // Random123 kat_vectors: philox4x32_10, counter and key all zero
  const auto out = Philox4x32::generate({0, 0, 0, 0}, {0, 0});
  CHECK(out[0] == 0x6627e8d5u);
  CHECK(out[1] == 0xe169c58du);
  CHECK(out[2] == 0xbc57ac4cu);
  CHECK(out[3] == 0x9b00dbd8u);
  RandomStream a(5, 3), b(5, 3), c(5, 4);
  const double first = a.uniform();
  CHECK(first == b.uniform());
  CHECK(first != c.uniform());
  CHECK(first > 0.0);
  CHECK(first < 1.0);
}

TEST_CASE("driftless Brownian passage times") {
  const auto s = sample_passage_times(LevyModel::brownian(0), 1.0, config(200000, 3, 1e8));
  CHECK(s.sampler == "brownian-exact");
  CHECK(static_cast<double>(s.censored_count) / s.n_paths < 1e-3);
  std::vector<double> t = s.finite_times;
  std::nth_element(t.begin(), t.begin() + t.size() / 2, t.end());
  CHECK(oracle::relative_error(t[t.size() / 2], oracle::levy_median(1.0)) < 0.01);
}

TEST_CASE("Cramer-Lundberg ruin frequency and exactness") {
  const auto m = cl_exp();
  const auto s = sample_passage_times(m, 1.0, config(100000, 17, 300));
  const auto freq = passage_frequency(s);
  const double ruin = ScaleEvaluator(m).ruin_probability(1.0);
  CHECK(std::abs(freq.estimate - ruin) < 3 * freq.std_error);
  // a passage with p > 0 only happens at a claim, so every undershoot is positive
  for (double u : s.undershoots) CHECK(u > 0.0);
  CHECK(s.finite_times.size() + s.censored_count == s.n_paths);
}

TEST_CASE("censoring is monotone in t_max") {
  const auto m = cl_exp();
  const auto a = sample_passage_times(m, 1.0, config(20000, 8, 5));
  const auto b = sample_passage_times(m, 1.0, config(20000, 8, 10));
  const auto c = sample_passage_times(m, 1.0, config(20000, 8, 20));
  CHECK(b.censored_count <= a.censored_count);
  CHECK(c.censored_count <= b.censored_count);
}

TEST_CASE("empirical Laplace transform against the passage transform") {
  struct Case {
    LevyModel model;
    double x;
  };
  for (const auto& c : {Case{cl_exp(), 1.0}, Case{LevyModel::brownian(0.5), 1.0},
                        Case{LevyModel::cramer_lundberg(2, 1, ClaimDistribution::deterministic(1)), 0.5}}) {
    const auto s = sample_passage_times(c.model, c.x, config(50000, 23, 200));
    const ScaleEvaluator ev(c.model);
    for (double q : {0.5, 1.0, 2.0}) {
      CAPTURE(q);
      const auto e = empirical_laplace(s, q);
      CHECK(std::abs(e.estimate - ev.passage_lt(q, c.x)) < 4 * e.std_error);
    }
  }
}

TEST_CASE("Brownian with upward drift: conditional mean x / p") {
  const double p = 0.8, x = 1.5;
  const auto s = sample_passage_times(LevyModel::brownian(p), x, config(100000, 4, 1e6));
  const auto e = empirical_moment(s, 1.0);
  CHECK(std::abs(e.estimate - x / p) < 3 * e.std_error);
}

TEST_CASE("jump-diffusion Euler sampler is flagged") {
  SimConfig c = config(2000, 2, 20);
  c.diffusion_step = 1e-2;
  const auto s = sample_passage_times(LevyModel::jump_diffusion(2, 1, 1, ClaimDistribution::exponential(1)), 1.0, c);
  CHECK(s.approximate);
  CHECK(s.sampler == "jump-diffusion-euler");
  REQUIRE(s.bias_estimate.has_value());
  CHECK(std::abs(*s.bias_estimate) < 0.1);
}

TEST_CASE("estimators on synthetic samples") {
  const auto flat = from_samples(std::vector<double>(50, 2.0));
  const auto e = empirical_moment(flat, 1.5);
  CHECK(e.estimate == doctest::Approx(std::pow(2.0, 1.5)));
  CHECK(e.std_error == 0.0);
  CHECK_FALSE(e.divergence_suspected);

  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> pareto(200000);
  for (double& v : pareto) v = std::pow(1.0 - u(rng), -1.0 / 2.0);
  CHECK(tail_index(from_samples(pareto)) == doctest::Approx(2.0).epsilon(0.05));

  CHECK_THROWS_AS(tail_index(from_samples(std::vector<double>(10, 1.0))), DomainError);
  CHECK_THROWS_AS(empirical_moment(from_samples({1.0}), 1.0), DomainError);
}

TEST_CASE("divergent moment shows growth and is flagged") {
  const auto m = LevyModel::brownian(0);
  double previous = 0.0;
  bool flagged = false;
  for (std::size_t n : {10000u, 100000u, 1000000u}) {
    const auto s = sample_passage_times(m, 1.0, config(n, 12, 1e12));
    const auto e = empirical_moment(s, 0.6);
    CHECK(e.estimate > previous);
    previous = e.estimate;
    flagged = flagged || e.divergence_suspected;
  }
  CHECK(flagged);
}

TEST_CASE("determinism across worker counts and CSV layout") {
  SimConfig c = config(9000, 77, 50);
  std::string reference;
  for (unsigned w : {1u, 3u, 8u}) {
    c.workers = w;
    std::ostringstream os;
    write_csv(sample_passage_times(cl_exp(), 0.5, c), os);
    if (reference.empty()) reference = os.str();
    CHECK(os.str() == reference);
  }
  CHECK(reference.rfind("# sampler=cramer-lundberg-exact", 0) == 0);
  CHECK(reference.find("\ntau,undershoot\n") != std::string::npos);

  const auto j = nlohmann::json::parse(summary_json(sample_passage_times(cl_exp(), 0.5, c)));
  CHECK(j["n_paths"] == 9000);
  CHECK(j["seed"] == 77);
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(sample_passage_times(LevyModel::brownian(1), 0.0, config(10, 1, 1)), DomainError);
  CHECK_THROWS_AS(sample_passage_times(LevyModel::brownian(1), -1.0, config(10, 1, 1)), DomainError);
  CHECK_THROWS_AS(sample_passage_times(cl_exp(), 1.0, config(0, 1, 1)), DomainError);
  CHECK_THROWS_AS(sample_passage_times(cl_exp(), 1.0, config(10, 1, 0)), DomainError);
  CHECK_THROWS_AS(sample_passage_times(LevyModel::stable(1.5, 1), 1.0, config(10, 1, 1)), UnsupportedError);
  SimConfig huge = config(1000000, 1, 1e6);
  CHECK_THROWS_AS(sample_passage_times(LevyModel::jump_diffusion(2, 1, 1, ClaimDistribution::exponential(1)), 1.0, huge),
                  DomainError);
}
