#include "curlmhd/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace curlmhd {

namespace {

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration on P_m.
void gauss_legendre(int m, std::vector<double>& x, std::vector<double>& w) {
  x.assign(m, 0.0);
  w.assign(m, 0.0);
  for (int i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int j = 2; j <= m; ++j) {
        const double p2 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      if (m == 1) p0 = 1.0, p1 = z;
      dp = m * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    double p0 = 1.0, p1 = z;
    for (int j = 2; j <= m; ++j) {
      const double p2 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p0) / j;
      p0 = p1;
      p1 = p2;
    }
    dp = m * (z * p1 - p0) / (z * z - 1.0);
    x[i] = z;
    w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
}

void add_orbit3(TriangleRule& r, double a, double w) {
  const double b = 1.0 - 2.0 * a;
  r.points.emplace_back(a, a);
  r.points.emplace_back(b, a);
  r.points.emplace_back(a, b);
  for (int i = 0; i < 3; ++i) r.weights.push_back(0.5 * w);
}

}  // namespace

EdgeRule edge_rule(int degree) {
  if (degree < 1 || degree > 12) throw std::invalid_argument("edge_rule: unsupported degree " + std::to_string(degree));
  const int m = (degree + 2) / 2;
  std::vector<double> x, w;
  gauss_legendre(m, x, w);
  EdgeRule r;
  r.exactness_degree = 2 * m - 1;
  for (int i = m - 1; i >= 0; --i) {
    r.points.push_back(0.5 * (x[i] + 1.0));
    r.weights.push_back(0.5 * w[i]);
  }
  return r;
}

TriangleRule triangle_rule(int degree) {
  if (degree < 1 || degree > 10) throw std::invalid_argument("triangle_rule: unsupported degree " + std::to_string(degree));
  TriangleRule r;
  if (degree == 1) {
    r.points.emplace_back(1.0 / 3.0, 1.0 / 3.0);
    r.weights.push_back(0.5);
    r.exactness_degree = 1;
  } else if (degree == 2) {
    add_orbit3(r, 1.0 / 6.0, 1.0 / 3.0);
    r.exactness_degree = 2;
  } else if (degree <= 4) {
    add_orbit3(r, 0.445948490915965, 0.223381589678011);
    add_orbit3(r, 0.091576213509771, 0.109951743655322);
    r.exactness_degree = 4;
  } else if (degree == 5) {
    const double s15 = std::sqrt(15.0);
    r.points.emplace_back(1.0 / 3.0, 1.0 / 3.0);
    r.weights.push_back(0.5 * 9.0 / 40.0);
    add_orbit3(r, (6.0 - s15) / 21.0, (155.0 - s15) / 1200.0);
    add_orbit3(r, (6.0 + s15) / 21.0, (155.0 + s15) / 1200.0);
    r.exactness_degree = 5;
  } else {
    // Collapsed coordinates: x = a, y = b (1 - a), Jacobian (1 - a).
    const int m = (degree + 3) / 2;
    std::vector<double> x, w;
    gauss_legendre(m, x, w);
    for (int i = 0; i < m; ++i) {
      const double a = 0.5 * (x[i] + 1.0), wa = 0.5 * w[i];
      for (int j = 0; j < m; ++j) {
        const double b = 0.5 * (x[j] + 1.0), wb = 0.5 * w[j];
        r.points.emplace_back(a, b * (1.0 - a));
        r.weights.push_back(wa * wb * (1.0 - a));
      }
    }
    r.exactness_degree = 2 * m - 2;
  }
  return r;
}

}  // namespace curlmhd
