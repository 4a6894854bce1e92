#include "intcurv/problem.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "intcurv/harmonics.hpp"

namespace intcurv {

namespace {

using nlohmann::json;

template <typename T>
T get_or(const json& doc, const char* key, T fallback) {
  if (!doc.contains(key)) return fallback;
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

CurvatureSpec parse_curvature(const json& doc) {
  CurvatureSpec spec;
  if (!doc.is_object()) throw ConfigError("config key 'R' must be an object");
  spec.offset = get_or(doc, "offset", 1.0);
  spec.preset = get_or(doc, "preset", std::string());
  if (!spec.preset.empty() && spec.preset != "constant" && spec.preset != "even-harmonic") {
    throw ConfigError("unknown R preset '" + spec.preset + "'");
  }
  if (doc.contains("harmonics")) {
    if (!spec.preset.empty()) throw ConfigError("R: give either a preset or harmonics, not both");
    for (const auto& term : doc.at("harmonics")) {
      HarmonicTerm t;
      t.degree = get_or(term, "degree", -1);
      t.index = get_or(term, "index", 0);
      t.coeff = get_or(term, "coeff", 0.0);
      if (t.degree < 0 || t.degree % 2 != 0) {
        throw ConfigError("R harmonics must have even degree (got " + std::to_string(t.degree) + ")");
      }
      spec.harmonics.push_back(t);
    }
  }
  if (spec.preset.empty() && !doc.contains("harmonics")) spec.preset = "constant";
  return spec;
}

std::vector<HarmonicTerm> expand(int n, const CurvatureSpec& spec) {
  if (spec.preset == "even-harmonic") {
    if (n == 1) return {{2, 0, 0.5}};
    return {{2, 0, 0.3}};
  }
  if (spec.preset == "constant") return {};
  return spec.harmonics;
}

std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

}  // namespace

ProblemConfig parse_problem_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  ProblemConfig cfg;
  for (const char* key : {"n", "alpha", "resolution"}) {
    if (!doc.contains(key)) throw ConfigError(std::string("config is missing '") + key + "'");
  }
  cfg.n = get_or(doc, "n", 0);
  cfg.alpha = get_or(doc, "alpha", 0.0);
  cfg.resolution = get_or(doc, "resolution", 0);
  if (cfg.n < 1 || cfg.n > 3) throw ConfigError("n must be 1, 2 or 3");
  if (!(cfg.alpha > cfg.n)) throw ConfigError("alpha must exceed n");
  if (cfg.resolution < 4 || cfg.resolution % 2 != 0) {
    throw ConfigError("resolution must be even and at least 4");
  }
  cfg.r = parse_curvature(doc.contains("R") ? doc.at("R") : json::object());
  for (const auto& t : cfg.r.harmonics) {
    if (t.index < 0 || t.index >= harmonic_count(cfg.n, t.degree)) {
      throw ConfigError("R harmonic index " + std::to_string(t.index) + " out of range for degree " +
                        std::to_string(t.degree));
    }
  }

  const json solver = doc.contains("solver") ? doc.at("solver") : json::object();
  SolverConfig& s = cfg.solver;
  try {
    s.method = parse_solver_method(get_or(solver, "method", to_string(s.method)));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  s.max_iterations = get_or(solver, "max_iterations", s.max_iterations);
  s.tolerance = get_or(solver, "tolerance", s.tolerance);
  s.positivity_floor = get_or(solver, "positivity_floor", s.positivity_floor);
  s.restarts = get_or(solver, "restarts", s.restarts);
  s.seed = get_or(solver, "seed", s.seed);
  if (solver.contains("step")) {
    const json& step = solver.at("step");
    s.step.initial_step = get_or(step, "initial", s.step.initial_step);
    s.step.shrink = get_or(step, "shrink", s.step.shrink);
    s.step.sufficient_decrease = get_or(step, "sufficient_decrease", s.step.sufficient_decrease);
  }
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  const json output = doc.contains("output") ? doc.at("output") : json::object();
  cfg.output.report = get_or(output, "report", std::string());
  cfg.output.fields = get_or(output, "fields", std::string());
  return cfg;
}

ProblemConfig load_problem_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_problem_config(doc);
}

GridFunction sample_curvature(const GridPtr& grid, const CurvatureSpec& spec) {
  const auto terms = expand(grid->dim(), spec);
  const int n = grid->dim();
  GridFunction r = GridFunction::sample(grid, [&](std::span<const double> xi) {
    double v = spec.offset;
    for (const auto& t : terms) v += t.coeff * spherical_harmonic(n, t.degree, t.index, xi);
    return v;
  });
  r = symmetrize(r);
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!(r[i] > 0.0)) {
      std::ostringstream msg;
      msg << "R is not positive at node " << i << " (";
      const auto xi = grid->point(i);
      for (std::size_t k = 0; k < xi.size(); ++k) msg << (k ? ", " : "") << xi[k];
      msg << "): R = " << r[i];
      throw ConfigError(msg.str());
    }
  }
  return r;
}

std::vector<double> pointwise_el_residual(const FunctionalContext& ctx, const GridFunction& f) {
  const double lambda = multiplier(ctx, f);
  const GridFunction kf = ctx.kernel().apply(f);
  std::vector<double> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double target = lambda * std::pow(f[i], ctx.q());
    out[i] = std::abs(kf[i] - target) / target;
  }
  return out;
}

json report_to_json(const SolveReport& report) {
  json doc;
  doc["J_value"] = report.J_value;
  doc["lambda"] = report.lambda;
  doc["el_residual"] = report.el_residual;
  doc["iterations"] = report.iterations;
  doc["converged"] = report.converged;
  doc["J_trace"] = report.J_trace;
  doc["f_star"] = std::vector<double>(report.f_star.values().begin(), report.f_star.values().end());
  doc["u_star"] = std::vector<double>(report.u_star.values().begin(), report.u_star.values().end());
  doc["diagnostics"] = report.diagnostics;
  return doc;
}

SolveReport report_from_json(const json& doc, const GridPtr& grid) {
  SolveReport report;
  report.J_value = doc.at("J_value").get<double>();
  report.lambda = doc.at("lambda").get<double>();
  report.el_residual = doc.at("el_residual").get<double>();
  report.iterations = doc.at("iterations").get<int>();
  report.converged = doc.at("converged").get<bool>();
  report.J_trace = doc.at("J_trace").get<std::vector<double>>();
  auto f = doc.at("f_star").get<std::vector<double>>();
  auto u = doc.at("u_star").get<std::vector<double>>();
  if (f.size() != grid->size() || u.size() != grid->size()) {
    throw std::invalid_argument("report_from_json: field length does not match the grid");
  }
  report.f_star = GridFunction(grid, std::move(f));
  report.u_star = GridFunction(grid, std::move(u));
  report.diagnostics = doc.at("diagnostics").get<std::map<std::string, double>>();
  return report;
}

void write_fields_csv(std::ostream& out, const FunctionalContext& ctx, const SolveReport& report) {
  const SphereGrid& grid = ctx.sphere();
  const auto residual = pointwise_el_residual(ctx, report.f_star);
  out << "index";
  for (int k = 1; k <= grid.ambient_dim(); ++k) out << ",x" << k;
  out << ",weight,R,f,u,el_residual\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out << i;
    for (double c : grid.point(i)) out << ',' << fmt(c);
    out << ',' << fmt(grid.weight(i)) << ',' << fmt(ctx.r()[i]) << ',' << fmt(report.f_star[i]) << ','
        << fmt(report.u_star[i]) << ',' << fmt(residual[i]) << '\n';
  }
}

DiscreteManifold manifold_from_json(const json& doc) {
  DiscreteManifold m;
  m.n = doc.at("n").get<int>();
  m.volumes = doc.at("volumes").get<std::vector<double>>();
  const auto rows = doc.at("green").get<std::vector<std::vector<double>>>();
  if (rows.size() != m.size()) throw std::invalid_argument("manifold: green must have one row per node");
  for (const auto& row : rows) {
    if (row.size() != m.size()) throw std::invalid_argument("manifold: green must be square");
    m.green.insert(m.green.end(), row.begin(), row.end());
  }
  if (doc.contains("coordinates")) {
    const auto coords = doc.at("coordinates").get<std::vector<std::vector<double>>>();
    if (coords.size() != m.size()) throw std::invalid_argument("manifold: one coordinate row per node");
    m.coordinate_dim = coords.empty() ? 0 : static_cast<int>(coords.front().size());
    for (const auto& row : coords) {
      if (static_cast<int>(row.size()) != m.coordinate_dim) {
        throw std::invalid_argument("manifold: ragged coordinates");
      }
      m.coordinates.insert(m.coordinates.end(), row.begin(), row.end());
    }
  }
  m.validate();
  return m;
}

json manifold_to_json(const DiscreteManifold& m) {
  json doc;
  doc["n"] = m.n;
  doc["volumes"] = m.volumes;
  json green = json::array();
  for (std::size_t y = 0; y < m.size(); ++y) {
    green.push_back(std::vector<double>(m.green.begin() + y * m.size(), m.green.begin() + (y + 1) * m.size()));
  }
  doc["green"] = std::move(green);
  if (m.coordinate_dim > 0) {
    json coords = json::array();
    const std::size_t d = m.coordinate_dim;
    for (std::size_t y = 0; y < m.size(); ++y) {
      coords.push_back(std::vector<double>(m.coordinates.begin() + y * d, m.coordinates.begin() + (y + 1) * d));
    }
    doc["coordinates"] = std::move(coords);
  }
  return doc;
}

int run_solve(const std::string& config_path, std::ostream& log, std::ostream& err) {
  ProblemConfig cfg;
  GridPtr grid;
  GridFunction r;
  try {
    cfg = load_problem_config(config_path);
    grid = build_grid(cfg.n, cfg.resolution);
    r = sample_curvature(grid, cfg.r);
  } catch (const ConfigError& e) {
    err << "invalid config: " << e.what() << '\n';
    return exit_code::invalid_config;
  } catch (const std::invalid_argument& e) {
    err << "invalid config: " << e.what() << '\n';
    return exit_code::invalid_config;
  }

  const FunctionalContext ctx(r, cfg.alpha);
  log << "grid: n=" << cfg.n << " resolution=" << cfg.resolution << " nodes=" << grid->size()
      << ", method " << to_string(cfg.solver.method) << '\n';
  const SolveReport report = minimize(ctx, cfg.solver);
  log << std::setprecision(12) << "J = " << report.J_value << ", lambda = " << report.lambda
      << ", el_residual = " << report.el_residual << ", iterations = " << report.iterations
      << (report.converged ? ", converged" : ", NOT converged") << '\n';

  if (!cfg.output.report.empty()) {
    std::ofstream out(cfg.output.report);
    if (!out) {
      err << "cannot write report '" << cfg.output.report << "'\n";
      return exit_code::failure;
    }
    out << report_to_json(report).dump(2) << '\n';
  }
  if (!cfg.output.fields.empty()) {
    std::ofstream out(cfg.output.fields);
    if (!out) {
      err << "cannot write fields '" << cfg.output.fields << "'\n";
      return exit_code::failure;
    }
    write_fields_csv(out, ctx, report);
  }
  return report.converged ? exit_code::ok : exit_code::not_converged;
}

}  // namespace intcurv
