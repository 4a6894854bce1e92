#pragma once

#include <vector>

namespace intcurv {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss–Legendre rule on [-1, 1]. Nodes are ascending and mirrored exactly:
// nodes[k] == -nodes[count-1-k] and the matching weights are equal bitwise.
QuadratureRule gauss_legendre(int count);

// Gauss–Legendre rule mapped affinely onto [a, b].
QuadratureRule gauss_legendre(int count, double a, double b);

}  // namespace intcurv
