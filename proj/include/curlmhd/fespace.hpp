#pragma once

#include "curlmhd/common.hpp"
#include "curlmhd/mesh.hpp"

#include <array>
#include <memory>
#include <utility>
#include <vector>

namespace curlmhd {

enum class SpaceKind { hcurl_nedelec2, h1_lagrange };

/// Local basis evaluated at one physical point. Rows are local dofs.
struct PointEval {
  Eigen::MatrixXd value;  // ndof x ncomp (2 for hcurl, 1 for h1)
  Eigen::MatrixXd grad;   // ndof x 2*ncomp, columns (d0/dx, d0/dy, d1/dx, d1/dy)
  Eigen::VectorXd curl;   // hcurl only: dx v2 - dy v1
};

/// A directed segment whose line integral defines one H(curl) dof.
struct DofSegment {
  Vec2 from, to;
};

/// Nedelec second kind (full P_k^2, k in {1,2}) or continuous Lagrange (P_p, p in {2,3}).
///
/// H(curl) dofs are the line integrals of v along the k+1 equal sub-segments of every edge,
/// traversed in the global edge orientation, plus (k=2) the three integrals along the
/// segments centroid -> vertex. With Lagrange nodes at the segment endpoints this makes the
/// canonical interpolant commute with the gradient exactly.
class FESpace {
 public:
  static FESpace build(std::shared_ptr<const Mesh> mesh, SpaceKind kind, int degree);

  SpaceKind kind() const { return kind_; }
  int degree() const { return degree_; }
  int num_dofs() const { return ndofs_; }
  int local_dim() const { return local_dim_; }
  int num_components() const { return kind_ == SpaceKind::hcurl_nedelec2 ? 2 : 1; }
  const Mesh& mesh() const { return *mesh_; }
  std::shared_ptr<const Mesh> mesh_ptr() const { return mesh_; }

  /// Global dof indices of the local basis of `cell`.
  const int* cell_dofs(int cell) const { return &cell_dofs_[static_cast<std::size_t>(cell) * local_dim_]; }
  const std::vector<int>& boundary_dofs() const { return boundary_dofs_; }

  /// Evaluate the local basis at a physical point of `cell` (covariant map is implicit:
  /// the basis is built directly on the physical cell).
  void evaluate(int cell, const Vec2& x, PointEval& out, bool with_grad = false) const;
  /// Evaluate at reference coordinates of `cell` (x = v0 + (v1-v0) r + (v2-v0) s).
  PointEval evaluate_basis(int cell, const Vec2& ref_point, bool with_grad = false) const;
  Vec2 map_to_physical(int cell, const Vec2& ref_point) const;

  /// One-sided traces at edge parameters s in [0,1] (from face.v[0] towards face.v[1]).
  /// Boundary faces return a single valid side unless `allow_boundary` is false, in which
  /// case they are rejected.
  struct Trace {
    int cell = -1;
    std::vector<PointEval> at;
  };
  std::array<Trace, 2> face_trace_pair(int face, const std::vector<double>& s, bool with_grad = false,
                                       bool allow_boundary = false) const;

  /// H(curl): the defining segment of each local dof of `cell`.
  std::vector<DofSegment> dof_segments(int cell) const;
  /// H1: physical positions of the local nodes of `cell`.
  std::vector<Vec2> node_points(int cell) const;

  /// Field value / curl from coefficients at a physical point of `cell`.
  Vec2 field_value(const Vector& coeffs, int cell, const Vec2& x) const;
  double field_curl(const Vector& coeffs, int cell, const Vec2& x) const;
  double scalar_value(const Vector& coeffs, int cell, const Vec2& x) const;

 private:
  std::shared_ptr<const Mesh> mesh_;
  SpaceKind kind_ = SpaceKind::h1_lagrange;
  int degree_ = 0;
  int ndofs_ = 0;
  int local_dim_ = 0;
  std::vector<int> cell_dofs_;
  std::vector<int> boundary_dofs_;
  std::vector<Eigen::MatrixXd> coeff_;  // per cell: basis i = sum_j coeff(i, j) monomial_j
  std::vector<Vec2> center_;
  std::vector<double> scale_;
};

/// Discrete gradient: Lagrange P_{k+1} coefficients -> H(curl) degree-k coefficients,
/// an incidence matrix with entries +-1.
SpMat discrete_gradient(const FESpace& hcurl, const FESpace& h1);

}  // namespace curlmhd
