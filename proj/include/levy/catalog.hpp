#pragma once

// Reference models shared by the verify suites, the tests and the acceptance run.

#include <string>
#include <vector>

#include "levy/model.hpp"

namespace levy {

struct NamedModel {
  std::string name;
  LevyModel model;
};

/// One or more models per family and regime.
std::vector<NamedModel> reference_models();

}  // namespace levy
