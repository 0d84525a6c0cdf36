#pragma once

#include "curlmhd/common.hpp"

#include <vector>

namespace curlmhd {

/// Rule on the reference triangle {(x, y) : x, y >= 0, x + y <= 1}; weights sum to 1/2.
struct TriangleRule {
  std::vector<Vec2> points;
  std::vector<double> weights;
  int exactness_degree = 0;
  int size() const { return static_cast<int>(points.size()); }
};

/// Gauss-Legendre rule on [0, 1]; weights sum to 1.
struct EdgeRule {
  std::vector<double> points;
  std::vector<double> weights;
  int exactness_degree = 0;
  int size() const { return static_cast<int>(points.size()); }
};

/// Exact for total degree <= `degree`, 1 <= degree <= 10. Degrees 1-5 use the classical
/// symmetric rules, higher degrees a collapsed Gauss product rule.
TriangleRule triangle_rule(int degree);

/// Exact for degree <= `degree`, 1 <= degree <= 12.
EdgeRule edge_rule(int degree);

}  // namespace curlmhd
