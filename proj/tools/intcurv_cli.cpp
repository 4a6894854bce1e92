#include <cmath>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <string>

#include "CLI11.hpp"

#include "intcurv/problem.hpp"
#include "intcurv/simd.hpp"
#include "intcurv/sphere_grid.hpp"
#include "intcurv/verification.hpp"

namespace {

int grid_info(int n, int resolution) {
  intcurv::GridPtr grid;
  try {
    grid = intcurv::build_grid(n, resolution);
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid grid: " << e.what() << '\n';
    return intcurv::exit_code::invalid_config;
  }
  double total = 0.0;
  for (double w : grid->weights()) total += w;
  bool closed = true;
  for (std::size_t i = 0; i < grid->size(); ++i) {
    const std::size_t j = grid->antipode(i);
    if (grid->antipode(j) != i || grid->weight(j) != grid->weight(i)) closed = false;
    const auto a = grid->point(i);
    const auto b = grid->point(j);
    for (std::size_t k = 0; k < a.size(); ++k) {
      if (a[k] != -b[k]) closed = false;
    }
  }
  const double area = intcurv::sphere_area(n);
  std::cout << std::setprecision(16) << "n = " << n << ", resolution = " << resolution << '\n'
            << "nodes: " << grid->size() << '\n'
            << "total weight: " << total << " (|S^" << n << "| = " << area
            << ", relative error " << std::abs(total - area) / area << ")\n"
            << "antipodal closure: " << (closed ? "OK" : "BROKEN") << '\n';
  return closed ? intcurv::exit_code::ok : intcurv::exit_code::failure;
}

int verify(const std::string& suite, bool as_json) {
  intcurv::SuiteResult result;
  try {
    result = intcurv::run_suite(suite);
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "; known suites:";
    for (const auto& s : intcurv::suite_names()) std::cerr << ' ' << s;
    std::cerr << '\n';
    return intcurv::exit_code::invalid_config;
  }
  if (as_json) {
    std::cout << intcurv::to_json(result).dump(2) << '\n';
  } else {
    for (const auto& c : result.checks) {
      std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << std::setprecision(3)
                << std::scientific << c.value << " (threshold " << c.threshold << ")\n"
                << std::defaultfloat;
    }
  }
  return result.passed() ? intcurv::exit_code::ok : intcurv::exit_code::failure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Integral curvature equation solver on S^n"};
  app.require_subcommand(1);

  std::string isa;
  app.add_option("--isa", isa, "Force the kernel variant (scalar, avx2)");

  std::string config_path;
  auto* solve = app.add_subcommand("solve", "Minimize the quotient functional for a problem file");
  solve->add_option("config", config_path, "JSON problem file")->required();

  std::string suite;
  bool as_json = false;
  auto* verify_cmd = app.add_subcommand("verify", "Run a verification suite");
  verify_cmd->add_option("suite", suite, "constants | stereographic | bubble | covariance | manifold | ode")
      ->required();
  verify_cmd->add_flag("--json", as_json, "Print the result as JSON");

  int n = 0;
  int resolution = 0;
  auto* info = app.add_subcommand("grid-info", "Describe a quadrature grid");
  info->add_option("n", n, "Sphere dimension (1, 2, 3)")->required();
  info->add_option("resolution", resolution, "Even resolution >= 4")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : intcurv::exit_code::invalid_config;
  }

  try {
    if (isa == "scalar") {
      intcurv::simd::set_isa(intcurv::simd::Isa::scalar);
    } else if (isa == "avx2") {
      intcurv::simd::set_isa(intcurv::simd::Isa::avx2);
    } else if (!isa.empty()) {
      std::cerr << "unknown --isa '" << isa << "'\n";
      return intcurv::exit_code::invalid_config;
    }
    if (*solve) return intcurv::run_solve(config_path, std::cout, std::cerr);
    if (*verify_cmd) return verify(suite, as_json);
    return grid_info(n, resolution);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return intcurv::exit_code::failure;
  }
}
