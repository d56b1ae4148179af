#include "levy/catalog.hpp"

namespace levy {

std::vector<NamedModel> reference_models() {
  const auto exp1 = ClaimDistribution::exponential(1.0);
  return {
      {"brownian-up", LevyModel::brownian(1.0)},
      {"brownian-up-wide", LevyModel::brownian(0.5, 2.0)},
      {"brownian-zero", LevyModel::brownian(0.0)},
      {"brownian-down", LevyModel::brownian(-1.0)},
      {"cl-exponential-up", LevyModel::cramer_lundberg(2.0, 1.0, exp1)},
      {"cl-exponential-zero", LevyModel::cramer_lundberg(1.0, 1.0, exp1)},
      {"cl-exponential-down", LevyModel::cramer_lundberg(0.5, 1.0, exp1)},
      {"cl-pareto-up", LevyModel::cramer_lundberg(3.0, 1.0, ClaimDistribution::pareto(2.5, 1.0))},
      {"cl-lognormal-up", LevyModel::cramer_lundberg(2.0, 1.0, ClaimDistribution::lognormal(0.0, 0.5))},
      {"cl-deterministic-up", LevyModel::cramer_lundberg(2.0, 1.0, ClaimDistribution::deterministic(1.0))},
      {"jump-diffusion-up", LevyModel::jump_diffusion(2.0, 1.0, 1.0, exp1)},
      {"jump-diffusion-down", LevyModel::jump_diffusion(0.5, 0.5, 1.0, exp1)},
      {"stable-zero", LevyModel::stable(1.5, 1.0)},
      {"stable-up", LevyModel::stable(1.5, 1.0, 1.0)},
  };
}

}  // namespace levy
