#pragma once

// Monte Carlo sampling of the first passage time below -x.
//
// Reproducibility: path i draws from RandomStream(seed, i) (see rng.hpp), so
// the sample set is a function of (model, x, config) only. Paths are handed
// to workers in fixed blocks and written back by index; the worker count
// never changes a single bit of the output.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "levy/model.hpp"

namespace levy {

struct SimConfig {
  std::size_t n_paths = 10000;
  std::uint64_t seed = 1;
  double t_max = 1e4;
  double diffusion_step = 1e-3;  // Euler step for jump-diffusions
  unsigned workers = 0;          // 0: hardware concurrency, capped by LEVY_PASSAGE_THREADS
};

inline constexpr std::size_t kPathsPerBlock = 4096;
/// Upper bound on the bytes a sample set may occupy.
inline constexpr std::size_t kSampleMemoryBudget = std::size_t{2} << 30;
/// Upper bound on n_paths * t_max / diffusion_step for Euler sampling.
inline constexpr double kEulerStepBudget = 1e10;

struct PassageSampleSet {
  std::vector<double> finite_times;  // path order
  std::vector<double> undershoots;   // level below -x at passage; NaN when not observed
  std::size_t censored_count = 0;    // no passage before t_max (including never)
  std::size_t n_paths = 0;
  double x = 0.0;
  double t_max = 0.0;
  std::uint64_t seed = 0;
  std::string model_description;
  std::string model_digest;
  std::string sampler;
  bool approximate = false;               // Euler discretisation
  std::optional<double> bias_estimate;    // passage-frequency change under step halving
};

PassageSampleSet sample_passage_times(const LevyModel& model, double x, const SimConfig& cfg);

/// Number of worker threads a config resolves to.
unsigned resolve_workers(unsigned requested);

struct EmpiricalMoment {
  double estimate = 0.0;
  double std_error = 0.0;
  /// Top order statistic carries > 50% of the sum, or (n >= 1000) the Hill
  /// tail index of tau is <= kappa.
  bool divergence_suspected = false;
  std::size_t n = 0;
};

/// Mean of tau^kappa over the finite samples, jackknife standard error.
EmpiricalMoment empirical_moment(const PassageSampleSet& s, double kappa);

/// Hill estimator over the top ceil(k_frac n) finite samples.
double tail_index(const PassageSampleSet& s, double k_frac = 0.05);

struct EmpiricalValue {
  double estimate = 0.0;
  double std_error = 0.0;
};

/// Mean of exp(-q tau) over all paths; censored paths contribute 0.
EmpiricalValue empirical_laplace(const PassageSampleSet& s, double q);
/// Mean of exp(q tau) over the finite samples.
EmpiricalValue empirical_exponential_moment(const PassageSampleSet& s, double q);
/// Fraction of paths with a passage before t_max, binomial standard error.
EmpiricalValue passage_frequency(const PassageSampleSet& s);

/// Metadata rows "# key=value", a "tau,undershoot" header, one row per
/// finite sample with %.17g values.
void write_csv(const PassageSampleSet& s, std::ostream& out);
/// Counts, quantiles, moments and tail index as a JSON object.
std::string summary_json(const PassageSampleSet& s);

}  // namespace levy
