#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "intcurv/kernel_ops.hpp"
#include "intcurv/manifold.hpp"
#include "intcurv/problem.hpp"

using namespace intcurv;

namespace {

constexpr double pi = std::numbers::pi;

std::vector<double> uniform(std::size_t size, std::uint64_t seed, double lo, double hi) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> v(size);
  for (double& x : v) x = d(rng);
  return v;
}

DiscreteManifold six_hundred_cell() {
  const auto vertices = six_hundred_cell_vertices();
  const std::size_t size = vertices.size() / 4;
  return sphere_sample_manifold(vertices, 3, std::vector<double>(size, 2 * pi * pi / size));
}

}  // namespace

TEST_CASE("600-cell vertices") {
  const auto v = six_hundred_cell_vertices();
  REQUIRE(v.size() == 480);
  for (std::size_t i = 0; i < 120; ++i) {
    double norm = 0.0;
    for (int k = 0; k < 4; ++k) norm += v[4 * i + k] * v[4 * i + k];
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-15));
  }
  // Each vertex has 12 nearest neighbours at distance 1/phi.
  for (std::size_t i = 0; i < 120; i += 17) {
    int close = 0;
    for (std::size_t j = 0; j < 120; ++j) {
      double d2 = 0.0;
      for (int k = 0; k < 4; ++k) d2 += (v[4 * i + k] - v[4 * j + k]) * (v[4 * i + k] - v[4 * j + k]);
      if (std::abs(std::sqrt(d2) - 1.0 / std::numbers::phi) < 1e-12) ++close;
    }
    CHECK(close == 12);
  }
}

TEST_CASE("conformal Green matrix") {
  const auto m = random_manifold(15, 3, 1);
  const ConformalFactor one{std::vector<double>(15, 1.0), 4.0, 3};
  CHECK(conformal_green(m, one) == m.green);
  const ConformalFactor two{std::vector<double>(15, 2.0), 4.0, 3};
  const auto g2 = conformal_green(m, two);
  for (std::size_t k = 0; k < g2.size(); ++k) CHECK(g2[k] == doctest::Approx(m.green[k] / 4.0).epsilon(1e-15));
  const ConformalFactor random{uniform(15, 2, 0.3, 3.0), 4.0, 3};
  const auto g1 = conformal_green(m, random);
  for (std::size_t y = 0; y < 15; ++y) {
    for (std::size_t x = 0; x < 15; ++x) {
      CHECK(g1[y * 15 + x] == g1[x * 15 + y]);
      if (x != y) CHECK(g1[y * 15 + x] > 0.0);
    }
  }
  ConformalFactor bad = random;
  bad.phi[4] = 0.0;
  CHECK_THROWS_AS(conformal_green(m, bad), std::invalid_argument);
}

TEST_CASE("manifold operator basics") {
  const auto m = random_manifold(12, 3, 3);
  const auto zero = manifold_operator(m, 4.0, std::vector<double>(12, 0.0), m.volumes);
  for (double v : zero) CHECK(v == 0.0);
  const auto f = uniform(12, 4, 0.0, 1.0);
  const auto base = manifold_operator(m, 4.0, f, m.volumes);
  std::vector<double> doubled = m.volumes;
  for (double& v : doubled) v *= 2.0;
  const auto twice = manifold_operator(m, 4.0, f, doubled);
  for (std::size_t i = 0; i < 12; ++i) CHECK(twice[i] == doctest::Approx(2.0 * base[i]).epsilon(1e-15));
  CHECK_THROWS_AS(manifold_operator(m, 3.0, f, m.volumes), std::invalid_argument);
  DiscreteManifold flat = m;
  flat.n = 2;
  CHECK_THROWS_AS(manifold_operator(flat, 4.0, f, m.volumes), std::invalid_argument);
}

TEST_CASE("covariance identity is exact") {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 10; ++k) {
    const auto m = random_manifold(20, 3, 50 + k);
    const ConformalFactor phi{uniform(20, 60 + k, 0.5, 2.0), 4.0, 3};
    const auto u = uniform(20, 70 + k, 0.1, 3.0);
    CHECK(verify_covariance_theorem(m, phi, u) <= 1e-12);
  }
  // Other dimensions and exponents, including n = 1.
  for (auto [n, alpha] : {std::pair{1, 2.0}, {1, 3.5}, {3, 5.0}, {5, 6.0}}) {
    const auto m = random_manifold(20, n, 90);
    const ConformalFactor phi{uniform(20, 91, 0.5, 2.0), alpha, n};
    CHECK(verify_covariance_theorem(m, phi, uniform(20, 92, 0.1, 3.0)) <= 1e-12);
  }
  const auto m = random_manifold(20, 3, 1);
  const ConformalFactor one{std::vector<double>(20, 1.0), 4.0, 3};
  CHECK(verify_covariance_theorem(m, one, uniform(20, 93, 0.1, 3.0)) == 0.0);

  const auto sphere = six_hundred_cell();
  ConformalFactor phi{std::vector<double>(120), 4.0, 3};
  std::vector<double> u(120);
  for (std::size_t i = 0; i < 120; ++i) {
    const double* xi = sphere.coordinates.data() + 4 * i;
    phi.phi[i] = 1.0 + 0.3 * xi[3] + 0.1 * xi[0] * xi[1];
    u[i] = 2.0 + xi[2];
  }
  CHECK(verify_covariance_theorem(sphere, phi, u) <= 1e-12);
}

TEST_CASE("sphere-sampled operator matches the normalized sphere operator up to a constant") {
  const auto grid = build_grid(3, 8);
  const auto sphere = sphere_sample_manifold(grid->coordinates(), 3, grid->weights());
  const auto h = GridFunction::sample(grid, [](std::span<const double> x) { return 1.0 + 0.5 * x[0] * x[3]; });
  const auto mine = manifold_operator(sphere, 4.0, h.values(), sphere.volumes);
  const auto reference = apply_tilde_I(h, 4.0, DiagonalRule::zero);
  const double constant = reference[0] / mine[0];
  CHECK(constant == doctest::Approx(normalization_constant(3, 4.0)).epsilon(1e-12));
  for (std::size_t i = 0; i < grid->size(); ++i) CHECK(std::abs(constant * mine[i] - reference[i]) <= 1e-8 * reference[i]);
}

TEST_CASE("Q extraction on the round sphere") {
  const auto sphere = six_hundred_cell();
  const ConformalFactor one{std::vector<double>(120, 1.0), 4.0, 3};
  const auto q = extract_Q_alpha(sphere, 4.0, one);
  double mean = 0.0;
  for (double v : q.q) mean += v / 120;
  double var = 0.0;
  for (double v : q.q) var += (v - mean) * (v - mean) / 120;
  CHECK(std::sqrt(var) / mean <= 1e-6);
  // The constant is the reciprocal row sum.
  const auto row = manifold_operator(sphere, 4.0, std::vector<double>(120, 1.0), sphere.volumes);
  CHECK(mean == doctest::Approx(1.0 / row[0]).epsilon(1e-10));
  CHECK(q.residual <= 1e-10);

  // Rescaling G so that rows sum to one gives Q = 1.
  DiscreteManifold normalized = sphere;
  for (double& g : normalized.green) g *= row[0];  // exponent (alpha-n)/(2-n) = -1 for n = 3, alpha = 4
  const auto q1 = extract_Q_alpha(normalized, 4.0, one);
  for (double v : q1.q) CHECK(v == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(q1.residual <= 1e-10);
}

TEST_CASE("Q extraction round trip") {
  const auto sphere = six_hundred_cell();
  ConformalFactor phi{std::vector<double>(120), 4.0, 3};
  std::vector<double> q_true(120);
  for (std::size_t i = 0; i < 120; ++i) {
    const double* xi = sphere.coordinates.data() + 4 * i;
    phi.phi[i] = 1.0 + 0.2 * xi[0] - 0.1 * xi[2] * xi[3];
    q_true[i] = 1.5 + 0.4 * xi[1] + 0.2 * xi[0] * xi[3];
  }
  const auto rhs = q_forward(sphere, 4.0, phi, q_true);
  const auto back = solve_Q_system(sphere, 4.0, phi, rhs, 1e-10);
  for (std::size_t i = 0; i < 120; ++i) CHECK(back.q[i] == doctest::Approx(q_true[i]).epsilon(1e-6));
  const auto exact = solve_Q_system(sphere, 4.0, phi, rhs, 0.0);
  for (std::size_t i = 0; i < 120; ++i) CHECK(exact.q[i] == doctest::Approx(q_true[i]).epsilon(1e-10));

  // Self-consistency on a random instance: forward(q) reproduces phi within the residual.
  const auto m = random_manifold(30, 3, 8);
  const ConformalFactor rphi{uniform(30, 9, 0.5, 2.0), 4.0, 3};
  const auto q = extract_Q_alpha(m, 4.0, rphi);
  const auto again = q_forward(m, 4.0, rphi, q.q);
  double err = 0.0;
  double norm = 0.0;
  for (std::size_t i = 0; i < 30; ++i) {
    err += (again[i] - rphi.phi[i]) * (again[i] - rphi.phi[i]);
    norm += rphi.phi[i] * rphi.phi[i];
  }
  CHECK(std::sqrt(err / norm) <= q.residual * (1 + 1e-6) + 1e-14);
}

TEST_CASE("singular system without regularization") {
  // Four nodes on a cycle: the induced kernel (G^-1 for n = 3, alpha = 4) is the
  // circulant (0, 1, 2, 1), whose alternating eigenvector has eigenvalue 0.
  DiscreteManifold cycle;
  cycle.n = 3;
  cycle.volumes = {1.0, 1.0, 1.0, 1.0};
  cycle.green = {0.0, 1.0, 0.5, 1.0, 1.0, 0.0, 1.0, 0.5, 0.5, 1.0, 0.0, 1.0, 1.0, 0.5, 1.0, 0.0};
  CHECK_NOTHROW(cycle.validate());
  const ConformalFactor one{std::vector<double>(4, 1.0), 4.0, 3};
  CHECK_THROWS_AS(extract_Q_alpha(cycle, 4.0, one, 0.0), std::runtime_error);
  const auto ridge = extract_Q_alpha(cycle, 4.0, one);
  for (double v : ridge.q) CHECK(v == doctest::Approx(0.25).epsilon(1e-8));
  CHECK(ridge.residual <= 1e-9);
}

TEST_CASE("manifold validation and JSON round trip") {
  auto m = random_manifold(6, 3, 20);
  m.coordinates = uniform(6 * 2, 21, -1.0, 1.0);
  m.coordinate_dim = 2;
  CHECK_NOTHROW(m.validate());
  const auto back = manifold_from_json(manifold_to_json(m));
  CHECK(back.volumes == m.volumes);
  CHECK(back.green == m.green);
  CHECK(back.coordinates == m.coordinates);
  CHECK(back.coordinate_dim == 2);

  auto asym = m;
  asym.green[1] += 0.1;
  CHECK_THROWS_AS(asym.validate(), std::invalid_argument);
  auto two = m;
  two.n = 2;
  CHECK_THROWS_AS(two.validate(), std::invalid_argument);
  auto neg = m;
  neg.volumes[0] = -1.0;
  CHECK_THROWS_AS(neg.validate(), std::invalid_argument);
  nlohmann::json ragged = manifold_to_json(m);
  ragged["green"][2].push_back(1.0);
  CHECK_THROWS_AS(manifold_from_json(ragged), std::invalid_argument);
}
