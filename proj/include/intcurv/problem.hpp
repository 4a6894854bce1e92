#pragma once

// Problem files for the command-line front end: configuration parsing,
// curvature presets and report serialization.

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "intcurv/functional.hpp"
#include "intcurv/manifold.hpp"
#include "intcurv/solver.hpp"

namespace intcurv {

// Raised for anything wrong with a problem file, including an R that is not
// positive on the grid.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct HarmonicTerm {
  int degree = 0;   // must be even
  int index = 0;
  double coeff = 0.0;
};

// R = offset + sum coeff * Y_{degree,index}. A preset, when set, replaces the
// harmonic list:
//   "constant":      R = offset
//   "even-harmonic": R = offset + 0.5 cos(2 theta) on S^1, offset + 0.3 Y_2 otherwise
struct CurvatureSpec {
  std::string preset;
  std::vector<HarmonicTerm> harmonics;
  double offset = 1.0;
};

struct OutputSpec {
  std::string report;  // JSON path; empty disables
  std::string fields;  // CSV path; empty disables
};

struct ProblemConfig {
  int n = 1;
  double alpha = 2.0;
  int resolution = 64;
  CurvatureSpec r;
  SolverConfig solver;
  OutputSpec output;
};

ProblemConfig parse_problem_config(const nlohmann::json& doc);
ProblemConfig load_problem_config(const std::string& path);

// Samples R on the grid, symmetrizes it and checks positivity. The error
// message names the first offending node.
GridFunction sample_curvature(const GridPtr& grid, const CurvatureSpec& spec);

// |(I f)_i - lambda f_i^q| / (lambda f_i^q) per node.
std::vector<double> pointwise_el_residual(const FunctionalContext& ctx, const GridFunction& f);

nlohmann::json report_to_json(const SolveReport& report);
// Inverse of report_to_json; the grid must match the stored field lengths.
SolveReport report_from_json(const nlohmann::json& doc, const GridPtr& grid);

// index, x1..x_{n+1}, weight, R, f, u, el_residual
void write_fields_csv(std::ostream& out, const FunctionalContext& ctx, const SolveReport& report);

// Keys: n, volumes, green (array of rows), optional coordinates (array of rows).
DiscreteManifold manifold_from_json(const nlohmann::json& doc);
nlohmann::json manifold_to_json(const DiscreteManifold& m);

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int failure = 1;
inline constexpr int not_converged = 2;
inline constexpr int invalid_config = 3;
}  // namespace exit_code

// Loads the config, solves, writes the outputs. Progress goes to `log`,
// errors to `err`.
int run_solve(const std::string& config_path, std::ostream& log, std::ostream& err);

}  // namespace intcurv
