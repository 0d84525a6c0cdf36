#pragma once

#include "curlmhd/common.hpp"
#include "curlmhd/fespace.hpp"

#include <functional>

namespace curlmhd {

/// Time-parametrized vector field. `curl` and `grad` are optional; grad(i, j) = d v_i / d x_j.
struct VectorField {
  std::function<Vec2(const Vec2&, double)> value;
  std::function<double(const Vec2&, double)> curl;
  std::function<Mat2(const Vec2&, double)> grad;
};

struct ScalarField {
  std::function<double(const Vec2&, double)> value;
  std::function<Vec2(const Vec2&, double)> grad;
};

/// Field whose value is the gradient of `phi` (curl 0).
VectorField gradient_field(const ScalarField& phi);

/// Mass matrix of a single space.
SpMat mass_matrix(const FESpace& space, int quad_degree = -1);

/// Load vector (field, basis_i) with quadrature of degree `quad_degree` (default 2k+2).
Vector load_vector(const FESpace& space, const VectorField& field, double t, int quad_degree = -1);

/// L2-orthogonal projection into the H(curl) space.
Vector l2_project_hcurl(const FESpace& space, const VectorField& field, double t);

/// Canonical interpolant: dof-wise line integrals of the field.
Vector canonical_interpolate_hcurl(const FESpace& space, const VectorField& field, double t,
                                   int edge_degree = 12);

/// Lagrange interpolant at the nodes.
Vector nodal_interpolate_h1(const FESpace& space, const ScalarField& field, double t);

/// Discrete Leray projection: removes the discrete-gradient part of `v` so that
/// (v, grad q_h) = 0 for every Lagrange q_h. `G` is discrete_gradient(hcurl, h1).
class LerayProjector {
 public:
  LerayProjector(const SpMat& mass, const SpMat& G);
  Vector apply(const Vector& v) const;

 private:
  SpMat mass_;
  SpMat G_;
  Eigen::SimplicialLDLT<SpMat> solver_;
};

}  // namespace curlmhd
