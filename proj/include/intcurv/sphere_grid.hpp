#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

namespace intcurv {

// Surface measure |S^n|.
double sphere_area(int n);

/// Antipodally closed product quadrature grid on S^n, n in {1, 2, 3}.
///
/// Nodes come in exact pairs: point(antipode(i)) is the bitwise negation of
/// point(i), and the two weights are identical. Construction layouts:
///   n = 1: m uniform angles 2*pi*i/m, trapezoid weights.
///   n = 2: m/2 Gauss–Legendre nodes in z = cos(polar) times m uniform
///          azimuths.
///   n = 3: Hopf coordinates (cos(eta) e^{i phi1}, sin(eta) e^{i phi2}); the
///          measure is (1/2) ds dphi1 dphi2 with s = sin^2(eta), so m/2
///          Gauss–Legendre nodes in s times m x m uniform phases.
class SphereGrid {
 public:
  int dim() const { return n_; }
  int ambient_dim() const { return n_ + 1; }
  int resolution() const { return resolution_; }
  std::size_t size() const { return weights_.size(); }

  std::span<const double> point(std::size_t i) const {
    return {coords_.data() + i * ambient_dim(), static_cast<std::size_t>(ambient_dim())};
  }
  // Row-major, size() x ambient_dim().
  std::span<const double> coordinates() const { return coords_; }
  // Structure-of-arrays copy, ambient_dim() x size(); feeds the SIMD kernels.
  std::span<const double> coordinates_soa() const { return coords_soa_; }
  std::span<const double> weights() const { return weights_; }
  double weight(std::size_t i) const { return weights_[i]; }
  std::span<const std::size_t> antipodes() const { return antipode_; }
  std::size_t antipode(std::size_t i) const { return antipode_[i]; }

  // Uniform circle grids (n = 1) expose their angles; empty otherwise.
  bool is_uniform_circle() const { return n_ == 1; }
  double angle(std::size_t i) const;

 private:
  friend std::shared_ptr<const SphereGrid> build_grid(int n, int resolution);
  SphereGrid() = default;

  int n_ = 0;
  int resolution_ = 0;
  std::vector<double> coords_;
  std::vector<double> coords_soa_;
  std::vector<double> weights_;
  std::vector<std::size_t> antipode_;
};

using GridPtr = std::shared_ptr<const SphereGrid>;

// Throws std::invalid_argument for n outside {1,2,3} or an odd / too small
// resolution.
GridPtr build_grid(int n, int resolution);

/// Real values sampled at the nodes of one grid.
class GridFunction {
 public:
  GridFunction() = default;
  GridFunction(GridPtr grid, std::vector<double> values);

  static GridFunction constant(GridPtr grid, double value);
  static GridFunction sample(GridPtr grid, const std::function<double(std::span<const double>)>& fn);

  const GridPtr& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  bool is_positive() const;
  double min() const;
  double max() const;

 private:
  GridPtr grid_;
  std::vector<double> values_;
};

// Throws std::invalid_argument when f and g are not on the same grid object.
void require_same_grid(const GridFunction& f, const GridFunction& g);
void require_grid(const SphereGrid& grid, const GridFunction& f);

double integrate(const SphereGrid& grid, const GridFunction& f);
double integrate(const GridFunction& f);

GridFunction symmetrize(const GridFunction& f);

// max_i |f_i - f_{antipode(i)}| <= tol * max_i |f_i|
bool is_antipodally_symmetric(const GridFunction& f, double tol);

// index, coordinates..., weight, antipode
void write_grid_csv(std::ostream& out, const SphereGrid& grid);

}  // namespace intcurv
