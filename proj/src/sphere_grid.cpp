#include "intcurv/sphere_grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

#include "intcurv/quadrature.hpp"

namespace intcurv {

namespace {

constexpr double kPi = std::numbers::pi;

// cos/sin of 2*pi*j/count; the second half is the exact negation of the first.
void uniform_circle(int count, std::vector<double>& c, std::vector<double>& s) {
  c.assign(count, 0.0);
  s.assign(count, 0.0);
  const int half = count / 2;
  for (int j = 0; j < half; ++j) {
    const double phi = 2.0 * kPi * j / count;
    c[j] = std::cos(phi);
    s[j] = std::sin(phi);
    c[j + half] = -c[j];
    s[j + half] = -s[j];
  }
}

}  // namespace

double sphere_area(int n) {
  // 2 pi^{(n+1)/2} / Gamma((n+1)/2)
  return 2.0 * std::pow(kPi, 0.5 * (n + 1)) / std::tgamma(0.5 * (n + 1));
}

double SphereGrid::angle(std::size_t i) const {
  if (n_ != 1) throw std::logic_error("SphereGrid::angle: only defined on S^1");
  return 2.0 * kPi * static_cast<double>(i) / static_cast<double>(size());
}

GridPtr build_grid(int n, int resolution) {
  if (n < 1 || n > 3) {
    throw std::invalid_argument("build_grid: sphere dimension must be 1, 2 or 3 (got " +
                                std::to_string(n) + ")");
  }
  if (resolution < 4 || resolution % 2 != 0) {
    throw std::invalid_argument("build_grid: resolution must be even and >= 4 (got " +
                                std::to_string(resolution) + ")");
  }
  std::shared_ptr<SphereGrid> grid(new SphereGrid());
  grid->n_ = n;
  grid->resolution_ = resolution;
  const int amb = n + 1;
  auto& coords = grid->coords_;
  auto& weights = grid->weights_;
  auto& antipode = grid->antipode_;

  std::vector<double> c, s;
  uniform_circle(resolution, c, s);
  const int half = resolution / 2;

  if (n == 1) {
    const int m = resolution;
    coords.resize(static_cast<std::size_t>(m) * amb);
    weights.assign(m, 2.0 * kPi / m);
    antipode.resize(m);
    for (int i = 0; i < m; ++i) {
      coords[i * amb + 0] = c[i];
      coords[i * amb + 1] = s[i];
      antipode[i] = static_cast<std::size_t>((i + half) % m);
    }
  } else if (n == 2) {
    const int g = resolution / 2;
    const int a = resolution;
    const QuadratureRule gl = gauss_legendre(g);
    const std::size_t count = static_cast<std::size_t>(g) * a;
    coords.resize(count * amb);
    weights.resize(count);
    antipode.resize(count);
    for (int k = 0; k < g; ++k) {
      const double z = gl.nodes[k];
      const double r = std::sqrt((1.0 - z) * (1.0 + z));
      for (int j = 0; j < a; ++j) {
        const std::size_t i = static_cast<std::size_t>(k) * a + j;
        coords[i * amb + 0] = r * c[j];
        coords[i * amb + 1] = r * s[j];
        coords[i * amb + 2] = z;
        weights[i] = gl.weights[k] * (2.0 * kPi / a);
        antipode[i] = static_cast<std::size_t>(g - 1 - k) * a + (j + half) % a;
      }
    }
  } else {
    const int g = resolution / 2;
    const int a = resolution;
    const QuadratureRule gl = gauss_legendre(g, 0.0, 1.0);
    const std::size_t count = static_cast<std::size_t>(g) * a * a;
    coords.resize(count * amb);
    weights.resize(count);
    antipode.resize(count);
    const double phase_weight = 0.5 * (2.0 * kPi / a) * (2.0 * kPi / a);
    for (int k = 0; k < g; ++k) {
      const double sv = gl.nodes[k];
      const double r1 = std::sqrt(1.0 - sv);
      const double r2 = std::sqrt(sv);
      for (int j1 = 0; j1 < a; ++j1) {
        for (int j2 = 0; j2 < a; ++j2) {
          const std::size_t i = (static_cast<std::size_t>(k) * a + j1) * a + j2;
          coords[i * amb + 0] = r1 * c[j1];
          coords[i * amb + 1] = r1 * s[j1];
          coords[i * amb + 2] = r2 * c[j2];
          coords[i * amb + 3] = r2 * s[j2];
          weights[i] = gl.weights[k] * phase_weight;
          antipode[i] = (static_cast<std::size_t>(k) * a + (j1 + half) % a) * a + (j2 + half) % a;
        }
      }
    }
  }

  const std::size_t count = weights.size();
  grid->coords_soa_.resize(count * amb);
  for (std::size_t i = 0; i < count; ++i) {
    for (int d = 0; d < amb; ++d) grid->coords_soa_[d * count + i] = coords[i * amb + d];
  }
  return grid;
}

GridFunction::GridFunction(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_) throw std::invalid_argument("GridFunction: null grid");
  if (values_.size() != grid_->size()) {
    throw std::invalid_argument("GridFunction: value count " + std::to_string(values_.size()) +
                                " does not match node count " + std::to_string(grid_->size()));
  }
}

GridFunction GridFunction::constant(GridPtr grid, double value) {
  const std::size_t count = grid->size();
  return GridFunction(std::move(grid), std::vector<double>(count, value));
}

GridFunction GridFunction::sample(GridPtr grid,
                                  const std::function<double(std::span<const double>)>& fn) {
  std::vector<double> values(grid->size());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = fn(grid->point(i));
  return GridFunction(std::move(grid), std::move(values));
}

bool GridFunction::is_positive() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v > 0.0; });
}

double GridFunction::min() const { return *std::min_element(values_.begin(), values_.end()); }
double GridFunction::max() const { return *std::max_element(values_.begin(), values_.end()); }

void require_same_grid(const GridFunction& f, const GridFunction& g) {
  if (!f.grid() || f.grid() != g.grid()) {
    throw std::invalid_argument("grid mismatch: functions live on different grids");
  }
}

void require_grid(const SphereGrid& grid, const GridFunction& f) {
  if (f.grid().get() != &grid) throw std::invalid_argument("grid mismatch");
}

double integrate(const SphereGrid& grid, const GridFunction& f) {
  require_grid(grid, f);
  double total = 0.0;
  const auto w = grid.weights();
  for (std::size_t i = 0; i < w.size(); ++i) total += w[i] * f[i];
  return total;
}

double integrate(const GridFunction& f) { return integrate(*f.grid(), f); }

GridFunction symmetrize(const GridFunction& f) {
  const SphereGrid& grid = *f.grid();
  std::vector<double> out(f.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    // (a + b) / 2 with a fixed operand order so out[i] == out[antipode(i)] bitwise.
    const std::size_t j = grid.antipode(i);
    const double a = f[std::min(i, j)];
    const double b = f[std::max(i, j)];
    out[i] = 0.5 * (a + b);
  }
  return GridFunction(f.grid(), std::move(out));
}

bool is_antipodally_symmetric(const GridFunction& f, double tol) {
  const SphereGrid& grid = *f.grid();
  double worst = 0.0;
  double scale = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    worst = std::max(worst, std::abs(f[i] - f[grid.antipode(i)]));
    scale = std::max(scale, std::abs(f[i]));
  }
  return worst <= tol * scale;
}

void write_grid_csv(std::ostream& out, const SphereGrid& grid) {
  out << "index";
  for (int d = 0; d < grid.ambient_dim(); ++d) out << ",x" << d + 1;
  out << ",weight,antipode\n";
  const auto old_precision = out.precision(17);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out << i;
    for (double x : grid.point(i)) out << ',' << x;
    out << ',' << grid.weight(i) << ',' << grid.antipode(i) << '\n';
  }
  out.precision(old_precision);
}

}  // namespace intcurv
