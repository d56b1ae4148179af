#include "levy/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <ostream>
#include <string>
#include <thread>

#include "json.hpp"
#include "levy/error.hpp"
#include "levy/rng.hpp"

namespace levy {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
// Paths used for the step-halving bias check of the Euler sampler.
constexpr std::size_t kBiasCheckPaths = 10000;

struct Outcome {
  double tau = kInf;  // kInf: censored
  double undershoot = kNaN;
};

// Inverse Gaussian with the given mean and shape (Michael, Schucany and Haas),
// with the smaller root written in cancellation-free form.
double inverse_gaussian(RandomStream& rng, double mean, double shape) {
  const double nu = rng.normal();
  const double a = mean * nu * nu / (2.0 * shape);
  const double root = mean / (1.0 + a + std::sqrt(a * (a + 2.0)));
  return rng.uniform() <= mean / (mean + root) ? root : mean * mean / root;
}

Outcome brownian_path(RandomStream& rng, double p, double s2, double x, double t_max) {
  Outcome o;
  double tau = 0.0;
  if (p > 0.0) {
    // P(tau < inf) = exp(-2 p x / s2); given passage, tau is inverse Gaussian
    // with drift -p.
    if (rng.uniform() >= std::exp(-2.0 * p * x / s2)) return o;
    tau = inverse_gaussian(rng, x / p, x * x / s2);
  } else if (p < 0.0) {
    tau = inverse_gaussian(rng, x / -p, x * x / s2);
  } else {
    const double z = rng.normal();
    tau = x * x / (s2 * z * z);
  }
  if (tau <= t_max) {
    o.tau = tau;
    o.undershoot = 0.0;  // continuous paths hit the barrier exactly
  }
  return o;
}

Outcome cramer_lundberg_path(RandomStream& rng, double p, const CompoundPoissonJumps& jumps,
                             double x, double t_max) {
  Outcome o;
  double level = x;
  double t = 0.0;
  if (p < 0.0 && x == 0.0) {
    o.tau = 0.0;
    o.undershoot = 0.0;
    return o;
  }
  while (true) {
    const double wait = rng.exponential(jumps.rate);
    if (p < 0.0 && wait > level / -p) {
      // The linear decrease crosses 0 before the next claim.
      const double hit = t + level / -p;
      if (hit <= t_max) {
        o.tau = hit;
        o.undershoot = 0.0;
      }
      return o;
    }
    t += wait;
    if (t > t_max) return o;
    level += p * wait - jumps.claim.sample(rng);
    if (level < 0.0) {
      o.tau = t;
      o.undershoot = -level;
      return o;
    }
  }
}

Outcome jump_diffusion_path(RandomStream& rng, double p, double s2, const CompoundPoissonJumps& jumps,
                            double x, double t_max, double h) {
  Outcome o;
  const double sd = std::sqrt(s2);
  double level = x;
  double t = 0.0;
  double next_jump = rng.exponential(jumps.rate);
  while (t < t_max) {
    const double dt = std::min({h, next_jump - t, t_max - t});
    level += p * dt + sd * std::sqrt(dt) * rng.normal();
    t += dt;
    if (t >= next_jump) {
      level -= jumps.claim.sample(rng);
      next_jump = t + rng.exponential(jumps.rate);
    }
    if (level < 0.0) {
      o.tau = t;
      o.undershoot = -level;
      return o;
    }
  }
  return o;
}

template <class PathFn>
std::vector<Outcome> run_paths(std::size_t n_paths, std::uint64_t seed, unsigned workers,
                               PathFn path) {
  std::vector<Outcome> out(n_paths);
  const std::size_t blocks = (n_paths + kPathsPerBlock - 1) / kPathsPerBlock;
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t b = next++; b < blocks; b = next++) {
      const std::size_t end = std::min(n_paths, (b + 1) * kPathsPerBlock);
      for (std::size_t i = b * kPathsPerBlock; i < end; ++i) {
        RandomStream rng(seed, i);
        out[i] = path(rng);
      }
    }
  };
  const unsigned threads = static_cast<unsigned>(std::min<std::size_t>(workers, blocks));
  if (threads <= 1) {
    work();
    return out;
  }
  std::vector<std::jthread> pool;
  for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work);
  pool.clear();  // joins
  return out;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<double> sorted_times(const PassageSampleSet& s) {
  std::vector<double> v = s.finite_times;
  std::sort(v.begin(), v.end());
  return v;
}

double quantile(const std::vector<double>& sorted, double prob) {
  const double pos = prob * (sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - lo) * (sorted[hi] - sorted[lo]);
}

}  // namespace

unsigned resolve_workers(unsigned requested) {
  unsigned n = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("LEVY_PASSAGE_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && cap > 0) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
  }
  return n;
}

PassageSampleSet sample_passage_times(const LevyModel& model, double x, const SimConfig& cfg) {
  if (!(x >= 0.0) || std::isinf(x)) throw DomainError("sample_passage_times: x must be finite and >= 0");
  if (x == 0.0 && !model.bounded_variation()) {
    throw DomainError("sample_passage_times: x = 0 is excluded for unbounded variation");
  }
  if (cfg.n_paths < 1) throw DomainError("sample_passage_times: n_paths must be >= 1");
  if (!(cfg.t_max > 0.0)) throw DomainError("sample_passage_times: t_max must be > 0");
  if (!(cfg.diffusion_step > 0.0)) throw DomainError("sample_passage_times: diffusion_step must be > 0");
  if (cfg.n_paths > kSampleMemoryBudget / (2 * sizeof(double) + sizeof(Outcome))) {
    throw DomainError("sample_passage_times: n_paths exceeds the memory budget");
  }
  if (model.kind() == ModelKind::Stable) {
    throw UnsupportedError("sample_passage_times: stable models cannot be simulated");
  }

  PassageSampleSet s;
  s.n_paths = cfg.n_paths;
  s.x = x;
  s.t_max = cfg.t_max;
  s.seed = cfg.seed;
  s.model_description = model.describe();
  s.model_digest = model.digest();
  const unsigned workers = resolve_workers(cfg.workers);
  const double p = model.linear_coefficient();
  const double s2 = model.gaussian_var();

  std::vector<Outcome> outcomes;
  switch (model.kind()) {
    case ModelKind::Brownian:
      s.sampler = "brownian-exact";
      outcomes = run_paths(cfg.n_paths, cfg.seed, workers, [&](RandomStream& rng) {
        return brownian_path(rng, p, s2, x, cfg.t_max);
      });
      break;
    case ModelKind::CramerLundberg: {
      s.sampler = "cramer-lundberg-exact";
      const auto& jumps = std::get<CompoundPoissonJumps>(model.jumps());
      outcomes = run_paths(cfg.n_paths, cfg.seed, workers, [&](RandomStream& rng) {
        return cramer_lundberg_path(rng, p, jumps, x, cfg.t_max);
      });
      break;
    }
    case ModelKind::JumpDiffusion: {
      if (static_cast<double>(cfg.n_paths) * cfg.t_max / cfg.diffusion_step > kEulerStepBudget) {
        throw DomainError(
            "sample_passage_times: Euler step budget exceeded; lower n_paths or t_max, or raise "
            "diffusion_step");
      }
      s.sampler = "jump-diffusion-euler";
      s.approximate = true;
      const auto& jumps = std::get<CompoundPoissonJumps>(model.jumps());
      auto sampler = [&](double h) {
        return [&, h](RandomStream& rng) {
          return jump_diffusion_path(rng, p, s2, jumps, x, cfg.t_max, h);
        };
      };
      outcomes = run_paths(cfg.n_paths, cfg.seed, workers, sampler(cfg.diffusion_step));
      // Step-halving check on a prefix of the paths.
      const std::size_t m = std::min(cfg.n_paths, kBiasCheckPaths);
      const auto fine = run_paths(m, cfg.seed, workers, sampler(0.5 * cfg.diffusion_step));
      std::size_t coarse_hits = 0;
      std::size_t fine_hits = 0;
      for (std::size_t i = 0; i < m; ++i) {
        coarse_hits += std::isfinite(outcomes[i].tau) ? 1 : 0;
        fine_hits += std::isfinite(fine[i].tau) ? 1 : 0;
      }
      s.bias_estimate = (static_cast<double>(fine_hits) - static_cast<double>(coarse_hits)) /
                        static_cast<double>(m);
      break;
    }
    case ModelKind::Stable:
      break;
  }

  for (const Outcome& o : outcomes) {
    if (std::isfinite(o.tau)) {
      s.finite_times.push_back(o.tau);
      s.undershoots.push_back(o.undershoot);
    } else {
      ++s.censored_count;
    }
  }
  return s;
}

EmpiricalMoment empirical_moment(const PassageSampleSet& s, double kappa) {
  if (!(kappa > 0.0) || std::isinf(kappa)) throw DomainError("empirical_moment: kappa must be > 0");
  const std::size_t n = s.finite_times.size();
  if (n == 0) throw DomainError("empirical_moment: no finite passage times");
  if (n < 2) throw DomainError("empirical_moment: need at least 2 finite passage times");
  std::vector<double> terms(n);
  double sum = 0.0;
  double top = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    terms[i] = std::pow(s.finite_times[i], kappa);
    sum += terms[i];
    top = std::max(top, terms[i]);
  }
  // Jackknife over leave-one-out means: for the sample mean the deviations
  // reduce to (mean - t_i) / (n - 1). Shifting by the first term keeps a
  // constant sample exactly at zero spread.
  const double nn = static_cast<double>(n);
  double shifted = 0.0;
  for (double t : terms) shifted += t - terms[0];
  const double centre = terms[0] + shifted / nn;
  double ss = 0.0;
  for (double t : terms) {
    const double d = (t - centre) / (nn - 1.0);
    ss += d * d;
  }
  EmpiricalMoment m;
  m.estimate = sum / nn;
  m.std_error = std::sqrt((nn - 1.0) / nn * ss);
  // Either one path dominates, or the fitted tail of tau is too heavy for
  // the requested order.
  auto heavy_tail = [&] {
    try {
      return n >= 1000 && tail_index(s) <= kappa;
    } catch (const DomainError&) {
      return false;  // too many zero times for a tail fit
    }
  };
  m.divergence_suspected = top > 0.5 * sum || heavy_tail();
  m.n = n;
  return m;
}

double tail_index(const PassageSampleSet& s, double k_frac) {
  if (!(k_frac > 0.0 && k_frac < 1.0)) throw DomainError("tail_index: k_frac must lie in (0, 1)");
  const std::size_t n = s.finite_times.size();
  if (n < 100) throw DomainError("tail_index: need at least 100 finite passage times");
  const auto k = static_cast<std::size_t>(std::ceil(k_frac * static_cast<double>(n)));
  if (k < 2 || k >= n) throw DomainError("tail_index: k_frac leaves too few order statistics");
  std::vector<double> v = s.finite_times;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k), v.end(), std::greater<>());
  const double threshold = v[k];
  if (!(threshold > 0.0)) throw DomainError("tail_index: order statistic at the threshold is 0");
  double h = 0.0;
  for (std::size_t i = 0; i < k; ++i) h += std::log(v[i] / threshold);
  return static_cast<double>(k) / h;
}

EmpiricalValue empirical_laplace(const PassageSampleSet& s, double q) {
  if (!(q >= 0.0)) throw DomainError("empirical_laplace: q must be >= 0");
  const double n = static_cast<double>(s.n_paths);
  double sum = 0.0;
  double sum2 = 0.0;
  for (double t : s.finite_times) {
    const double v = std::exp(-q * t);
    sum += v;
    sum2 += v * v;
  }
  const double mean = sum / n;
  const double var = std::max(0.0, sum2 / n - mean * mean);
  return {mean, std::sqrt(var / std::max(1.0, n - 1.0))};
}

EmpiricalValue empirical_exponential_moment(const PassageSampleSet& s, double q) {
  const std::size_t n = s.finite_times.size();
  if (n < 2) throw DomainError("empirical_exponential_moment: need at least 2 finite samples");
  double sum = 0.0;
  double sum2 = 0.0;
  for (double t : s.finite_times) {
    const double v = std::exp(q * t);
    sum += v;
    sum2 += v * v;
  }
  const double nn = static_cast<double>(n);
  const double mean = sum / nn;
  const double var = std::max(0.0, sum2 / nn - mean * mean);
  return {mean, std::sqrt(var / (nn - 1.0))};
}

EmpiricalValue passage_frequency(const PassageSampleSet& s) {
  const double n = static_cast<double>(s.n_paths);
  const double p = static_cast<double>(s.finite_times.size()) / n;
  return {p, std::sqrt(p * (1.0 - p) / n)};
}

void write_csv(const PassageSampleSet& s, std::ostream& out) {
  out << "# sampler=" << s.sampler << "\n";
  out << "# model=" << s.model_description << "\n";
  out << "# model_digest=" << s.model_digest << "\n";
  out << "# x=" << format_double(s.x) << "\n";
  out << "# seed=" << s.seed << "\n";
  out << "# n_paths=" << s.n_paths << "\n";
  out << "# t_max=" << format_double(s.t_max) << "\n";
  out << "# finite=" << s.finite_times.size() << "\n";
  out << "# censored=" << s.censored_count << "\n";
  out << "# approximate=" << (s.approximate ? "true" : "false") << "\n";
  if (s.bias_estimate) out << "# bias_estimate=" << format_double(*s.bias_estimate) << "\n";
  out << "tau,undershoot\n";
  for (std::size_t i = 0; i < s.finite_times.size(); ++i) {
    out << format_double(s.finite_times[i]) << ',';
    if (!std::isnan(s.undershoots[i])) out << format_double(s.undershoots[i]);
    out << '\n';
  }
}

std::string summary_json(const PassageSampleSet& s) {
  nlohmann::json j;
  j["sampler"] = s.sampler;
  j["model"] = s.model_description;
  j["model_digest"] = s.model_digest;
  j["x"] = s.x;
  j["seed"] = s.seed;
  j["t_max"] = s.t_max;
  j["n_paths"] = s.n_paths;
  j["finite"] = s.finite_times.size();
  j["censored"] = s.censored_count;
  j["approximate"] = s.approximate;
  j["bias_estimate"] = s.bias_estimate ? nlohmann::json(*s.bias_estimate) : nlohmann::json(nullptr);
  const EmpiricalValue freq = passage_frequency(s);
  j["passage_frequency"] = {{"estimate", freq.estimate}, {"std_error", freq.std_error}};
  if (!s.finite_times.empty()) {
    const std::vector<double> sorted = sorted_times(s);
    nlohmann::json qs = nlohmann::json::object();
    for (double prob : {0.1, 0.25, 0.5, 0.75, 0.9, 0.99}) {
      qs[format_double(prob)] = quantile(sorted, prob);
    }
    j["quantiles"] = qs;
  }
  if (s.finite_times.size() >= 2) {
    nlohmann::json ms = nlohmann::json::object();
    for (double kappa : {0.5, 1.0, 2.0}) {
      const EmpiricalMoment m = empirical_moment(s, kappa);
      ms[format_double(kappa)] = {{"estimate", m.estimate},
                                  {"std_error", m.std_error},
                                  {"divergence_suspected", m.divergence_suspected}};
    }
    j["moments"] = ms;
  }
  j["tail_index"] = s.finite_times.size() >= 100 ? nlohmann::json(tail_index(s)) : nlohmann::json(nullptr);
  return j.dump(2);
}

}  // namespace levy
