#pragma once

// Named verification suites driven by `intcurv verify <suite>`.

#include <string>
#include <vector>

#include "json.hpp"

namespace intcurv {

struct Check {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool passed = false;
};

struct SuiteResult {
  std::string suite;
  std::vector<Check> checks;
  bool passed() const;
};

// constants, stereographic, bubble, covariance, manifold, ode
const std::vector<std::string>& suite_names();

// Throws std::invalid_argument for an unknown suite.
SuiteResult run_suite(const std::string& name);

nlohmann::json to_json(const SuiteResult& result);

}  // namespace intcurv
