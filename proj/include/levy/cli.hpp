#pragma once

// Command-line front end. Exit codes: 0 success, 1 numerical failure,
// 2 input error (bad flags, unreadable or invalid model file, unsupported
// request).

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

namespace levy {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNumerical = 1;
inline constexpr int kExitInput = 2;

/// Machine-readable result of one command; every number in `outputs`
/// carries its method tag.
struct RunReport {
  std::string command;
  std::string model_digest;
  nlohmann::json inputs = nlohmann::json::object();
  nlohmann::json outputs = nlohmann::json::object();
  std::vector<std::string> warnings;

  nlohmann::json to_json() const;
};

/// Runs one command line (without the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "a:b:n" (n evenly spaced points, ends included) or a single number.
std::vector<double> parse_grid(const std::string& text);

}  // namespace levy
