#include "intcurv/manifold.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace intcurv {

namespace {

void require_size(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw std::invalid_argument(std::string(what) + ": expected " + std::to_string(want) +
                                " values, got " + std::to_string(got));
  }
}

double kernel_exponent(int n, double alpha) {
  if (n == 2) throw std::invalid_argument("manifold operator: n = 2 is excluded");
  if (alpha == static_cast<double>(n)) throw std::invalid_argument("manifold operator: alpha must differ from n");
  return (alpha - n) / (2.0 - n);
}

void check_phi(const DiscreteManifold& m, const ConformalFactor& phi) {
  require_size(phi.phi.size(), m.size(), "conformal factor");
  for (double v : phi.phi) {
    if (!(v > 0.0)) throw std::invalid_argument("conformal factor must be positive");
  }
}

// K_{xy} = G_{yx}^{e} for x != y, zero diagonal.
Eigen::MatrixXd induced_kernel(const DiscreteManifold& m, double alpha) {
  const double e = kernel_exponent(m.n, alpha);
  const std::size_t size = m.size();
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(size, size);
  for (std::size_t x = 0; x < size; ++x) {
    for (std::size_t y = 0; y < size; ++y) {
      if (x != y) k(x, y) = std::pow(m.g(y, x), e);
    }
  }
  return k;
}

}  // namespace

void DiscreteManifold::validate() const {
  if (n == 2) throw std::invalid_argument("DiscreteManifold: n = 2 is excluded");
  if (n < 1) throw std::invalid_argument("DiscreteManifold: n must be positive");
  require_size(green.size(), size() * size(), "DiscreteManifold green");
  if (coordinate_dim > 0) require_size(coordinates.size(), size() * coordinate_dim, "DiscreteManifold coordinates");
  for (double v : volumes) {
    if (!(v > 0.0)) throw std::invalid_argument("DiscreteManifold: volumes must be positive");
  }
  for (std::size_t y = 0; y < size(); ++y) {
    for (std::size_t x = 0; x < size(); ++x) {
      if (x == y) continue;
      if (!(g(y, x) > 0.0)) throw std::invalid_argument("DiscreteManifold: Green entries must be positive");
      if (g(y, x) != g(x, y)) throw std::invalid_argument("DiscreteManifold: Green matrix must be symmetric");
    }
  }
}

std::vector<double> conformal_green(const DiscreteManifold& m, const ConformalFactor& phi) {
  check_phi(m, phi);
  const std::size_t size = m.size();
  std::vector<double> g1(size * size, 0.0);
  for (std::size_t y = 0; y < size; ++y) {
    for (std::size_t x = 0; x < size; ++x) {
      // Same operand order for (y,x) and (x,y) keeps the result exactly symmetric.
      const double a = phi.phi[std::min(x, y)];
      const double b = phi.phi[std::max(x, y)];
      g1[y * size + x] = m.g(y, x) / (a * b);
    }
  }
  return g1;
}

std::vector<double> manifold_operator(const DiscreteManifold& m, double alpha,
                                      std::span<const double> f, std::span<const double> volumes) {
  const double e = kernel_exponent(m.n, alpha);
  require_size(f.size(), m.size(), "manifold_operator f");
  require_size(volumes.size(), m.size(), "manifold_operator volumes");
  std::vector<double> out(m.size(), 0.0);
  for (std::size_t x = 0; x < m.size(); ++x) {
    double acc = 0.0;
    for (std::size_t y = 0; y < m.size(); ++y) {
      if (y != x) acc += std::pow(m.g(y, x), e) * f[y] * volumes[y];
    }
    out[x] = acc;
  }
  return out;
}

CovarianceSides covariance_sides(const DiscreteManifold& m, const ConformalFactor& phi,
                                 std::span<const double> u) {
  check_phi(m, phi);
  require_size(u.size(), m.size(), "covariance u");
  const int n = m.n;
  const double alpha = phi.alpha;
  const std::size_t size = m.size();

  DiscreteManifold rescaled = m;
  rescaled.green = conformal_green(m, phi);
  std::vector<double> v1(size);
  for (std::size_t y = 0; y < size; ++y) v1[y] = std::pow(phi.phi[y], 2.0 * n / (n - alpha)) * m.volumes[y];

  CovarianceSides sides;
  sides.rescaled_metric = manifold_operator(rescaled, alpha, u, v1);

  const double outer = (alpha - n) / (n - 2.0);
  const double inner = 2.0 * n / (n - alpha) + outer;
  std::vector<double> weighted(size);
  for (std::size_t y = 0; y < size; ++y) weighted[y] = std::pow(phi.phi[y], inner) * u[y];
  sides.background_metric = manifold_operator(m, alpha, weighted, m.volumes);
  for (std::size_t x = 0; x < size; ++x) sides.background_metric[x] *= std::pow(phi.phi[x], outer);

  for (std::size_t x = 0; x < size; ++x) {
    const double a = sides.rescaled_metric[x];
    const double b = sides.background_metric[x];
    const double scale = std::max(std::abs(a), std::abs(b));
    if (scale > 0.0) sides.max_discrepancy = std::max(sides.max_discrepancy, std::abs(a - b) / scale);
  }
  return sides;
}

double verify_covariance_theorem(const DiscreteManifold& m, const ConformalFactor& phi,
                                 std::span<const double> u) {
  return covariance_sides(m, phi, u).max_discrepancy;
}

std::vector<double> q_forward(const DiscreteManifold& m, double alpha, const ConformalFactor& phi,
                              std::span<const double> q) {
  check_phi(m, phi);
  require_size(q.size(), m.size(), "q_forward q");
  const int n = m.n;
  std::vector<double> density(m.size());
  for (std::size_t y = 0; y < m.size(); ++y) {
    density[y] = q[y] * std::pow(phi.phi[y], (n + alpha) / (n - alpha));
  }
  return manifold_operator(m, alpha, density, m.volumes);
}

QExtraction solve_Q_system(const DiscreteManifold& m, double alpha, const ConformalFactor& phi,
                           std::span<const double> rhs, double regularization) {
  check_phi(m, phi);
  require_size(rhs.size(), m.size(), "solve_Q_system rhs");
  if (regularization < 0.0) throw std::invalid_argument("solve_Q_system: negative regularization");
  const int n = m.n;
  const std::size_t size = m.size();
  Eigen::MatrixXd system = induced_kernel(m, alpha);
  for (std::size_t y = 0; y < size; ++y) {
    system.col(y) *= std::pow(phi.phi[y], (n + alpha) / (n - alpha)) * m.volumes[y];
  }
  const Eigen::Map<const Eigen::VectorXd> b(rhs.data(), static_cast<Eigen::Index>(size));

  Eigen::VectorXd q;
  if (regularization > 0.0) {
    const Eigen::BDCSVD<Eigen::MatrixXd> svd(system, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sigma = svd.singularValues();
    const double damping = regularization * sigma(0);
    const Eigen::VectorXd projected = svd.matrixU().transpose() * b;
    Eigen::VectorXd filtered(sigma.size());
    for (Eigen::Index i = 0; i < sigma.size(); ++i) {
      filtered(i) = sigma(i) / (sigma(i) * sigma(i) + damping * damping) * projected(i);
    }
    q = svd.matrixV() * filtered;
  } else {
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(system);
    if (!lu.isInvertible()) throw std::runtime_error("extract_Q_alpha: singular system");
    q = lu.solve(b);
  }

  QExtraction out;
  out.q.assign(q.data(), q.data() + q.size());
  out.residual = (system * q - b).norm() / b.norm();
  return out;
}

QExtraction extract_Q_alpha(const DiscreteManifold& m, double alpha, const ConformalFactor& phi,
                            double regularization) {
  return solve_Q_system(m, alpha, phi, phi.phi, regularization);
}

DiscreteManifold random_manifold(std::size_t nodes, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> vol(0.5, 1.5);
  std::uniform_real_distribution<double> green(0.2, 2.0);
  DiscreteManifold m;
  m.n = n;
  m.volumes.resize(nodes);
  for (double& v : m.volumes) v = vol(rng);
  m.green.assign(nodes * nodes, 0.0);
  for (std::size_t y = 0; y < nodes; ++y) {
    for (std::size_t x = y + 1; x < nodes; ++x) {
      const double g = green(rng);
      m.green[y * nodes + x] = g;
      m.green[x * nodes + y] = g;
    }
  }
  return m;
}

DiscreteManifold sphere_sample_manifold(std::span<const double> points, int n,
                                        std::span<const double> volumes, double scale) {
  const std::size_t dim = static_cast<std::size_t>(n + 1);
  if (points.size() % dim != 0) throw std::invalid_argument("sphere_sample_manifold: bad point array");
  const std::size_t size = points.size() / dim;
  require_size(volumes.size(), size, "sphere_sample_manifold volumes");
  DiscreteManifold m;
  m.n = n;
  m.volumes.assign(volumes.begin(), volumes.end());
  m.coordinates.assign(points.begin(), points.end());
  m.coordinate_dim = static_cast<int>(dim);
  m.green.assign(size * size, 0.0);
  for (std::size_t y = 0; y < size; ++y) {
    for (std::size_t x = y + 1; x < size; ++x) {
      double d2 = 0.0;
      for (std::size_t k = 0; k < dim; ++k) {
        const double d = points[y * dim + k] - points[x * dim + k];
        d2 += d * d;
      }
      const double g = scale * std::pow(d2, 0.5 * (2.0 - n));
      m.green[y * size + x] = g;
      m.green[x * size + y] = g;
    }
  }
  return m;
}

std::vector<double> six_hundred_cell_vertices() {
  std::vector<double> v;
  auto push = [&v](double a, double b, double c, double d) { v.insert(v.end(), {a, b, c, d}); };
  for (int axis = 0; axis < 4; ++axis) {
    for (double s : {1.0, -1.0}) {
      std::array<double, 4> p{};
      p[axis] = s;
      push(p[0], p[1], p[2], p[3]);
    }
  }
  for (int mask = 0; mask < 16; ++mask) {
    push(mask & 1 ? -0.5 : 0.5, mask & 2 ? -0.5 : 0.5, mask & 4 ? -0.5 : 0.5, mask & 8 ? -0.5 : 0.5);
  }
  // Even permutations of (phi, 1, 1/phi, 0) / 2 with all sign choices.
  const double golden = std::numbers::phi;
  const std::array<double, 4> base{golden / 2.0, 0.5, 0.5 / golden, 0.0};
  std::array<int, 4> perm{0, 1, 2, 3};
  do {
    int inversions = 0;
    for (int i = 0; i < 4; ++i) {
      for (int j = i + 1; j < 4; ++j) inversions += perm[i] > perm[j] ? 1 : 0;
    }
    if (inversions % 2 != 0) continue;
    for (int mask = 0; mask < 8; ++mask) {
      std::array<double, 4> p{};
      for (int k = 0; k < 4; ++k) {
        const int src = perm[k];
        double value = base[src];
        if (src < 3 && (mask >> src) & 1) value = -value;
        p[k] = value;
      }
      push(p[0], p[1], p[2], p[3]);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return v;
}

}  // namespace intcurv
