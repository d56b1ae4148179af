#pragma once

// Existence of moments of the first passage time below -x, decided exactly
// from the model parameters:
//
//   drifts down : every moment finite (even exponential moments)
//   drifts up   : E[tau^kappa; tau < inf] < inf  <=>  int_[1,inf) y^(kappa+1) Pi(dy) < inf
//   oscillates  : infinite for kappa >= 1; infinite for kappa > 1/2 when psi''(0+) < inf;
//                 infinite from kappa* = r* - 1 on when r* - 1 <= 1 (r* the order of the
//                 largest finite jump moment); sharp thresholds for driftless Brownian
//                 motion (1/2) and pure stable processes (1 - 1/alpha).

#include <optional>
#include <string>

#include "levy/model.hpp"

namespace levy {

enum class Verdict { Finite, Infinite, Unknown };

const char* to_string(Verdict verdict);

struct MomentVerdict {
  Verdict verdict = Verdict::Unknown;
  std::string clause;  // which case of the trichotomy or remark decided it
  std::string detail;
  std::optional<double> threshold;  // sup{kappa : moment finite} when known

  /// {"verdict": ..., "clause": ..., "threshold": number | null, "detail": ...}
  std::string to_json() const;
};

MomentVerdict classify_moment(const LevyModel& model, double kappa, double x);

/// sup{q : E[exp(q tau_x)] < inf} = -min psi for a model drifting down.
double exponential_moment_abscissa(const LevyModel& model);

}  // namespace levy
