#pragma once

// Named property suites, run by `levy_passage verify <suite>` and the tests.

#include <functional>
#include <string>
#include <vector>

#include "levy/model.hpp"

namespace levy {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SuiteResult {
  std::string suite;
  std::vector<CheckResult> checks;

  std::size_t passed() const;
  std::size_t failed() const { return checks.size() - passed(); }
  bool ok() const { return !checks.empty() && failed() == 0; }
};

/// roundtrip, conjugacy, bell, brownian-lt, ruin, concordance, determinism.
std::vector<std::string> suite_names();

/// Throws InputError for an unknown suite name.
SuiteResult run_suite(const std::string& name);

/// n-th derivative of f at x by central differences with two Richardson
/// refinements (error O(h^6)).
double richardson_derivative(const std::function<double(double)>& f, double x, int n, double h);

struct ConcordanceCase {
  std::string model_name;
  LevyModel model;
  double x;
  double kappa;
};

/// Model / level / order triples whose verdict the classifier decides.
std::vector<ConcordanceCase> concordance_matrix();

}  // namespace levy
