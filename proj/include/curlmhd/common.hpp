#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <stdexcept>
#include <string>

namespace curlmhd {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;
using Vector = Eigen::VectorXd;
using SpMat = Eigen::SparseMatrix<double>;

// Planar conventions: curl v = dx v2 - dy v1, (w) x u = w rot90(u),
// u x B = u1 B2 - u2 B1, v x n = v . t with t = rot90(n).
inline Vec2 rot90(const Vec2& a) { return {-a.y(), a.x()}; }
inline double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

/// Mesh or dof-map topology is inconsistent (non-manifold edge, unmatched seam, ...).
class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Linear or nonlinear solve failed.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid user configuration; `key` names the offending entry.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

}  // namespace curlmhd
