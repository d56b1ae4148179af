#pragma once

// Model files: a small TOML subset.
//
//   [model]
//   type = "cramer-lundberg"      # brownian | cramer-lundberg | jump-diffusion | stable
//   p = 2.0
//   lambda = 1.0
//   claim.type = "exponential"    # or a [model.claim] table
//   claim.mu = 1.0
//
// Keys per type:
//   brownian         p, sigma2 (default 1)
//   cramer-lundberg  p, lambda, claim.*
//   jump-diffusion   p, sigma2, lambda, claim.*
//   stable           alpha, scale (default 1), p (default 0), sigma2 (default 0)
// Claim laws:
//   exponential mu | pareto alpha, xm | lognormal m, s | deterministic a
//
// Only tables, `key = value` pairs, dotted keys, double-quoted strings,
// numbers and `#` comments are accepted. Unknown keys are errors.

#include <filesystem>
#include <string_view>

#include "levy/model.hpp"

namespace levy {

/// Throws InputError naming the offending key or line.
LevyModel parse_model(std::string_view text);
LevyModel load_model(const std::filesystem::path& path);

}  // namespace levy
