#include "curlmhd/interpolate.hpp"

#include "curlmhd/quadrature.hpp"

#include <string>

namespace curlmhd {

namespace {

int default_degree(const FESpace& s) {
  return s.kind() == SpaceKind::hcurl_nedelec2 ? 2 * s.degree() + 2 : 2 * s.degree();
}

}  // namespace

VectorField gradient_field(const ScalarField& phi) {
  VectorField f;
  f.value = phi.grad;
  f.curl = [](const Vec2&, double) { return 0.0; };
  return f;
}

SpMat mass_matrix(const FESpace& space, int quad_degree) {
  const TriangleRule rule = triangle_rule(quad_degree > 0 ? quad_degree : default_degree(space));
  const Mesh& mesh = space.mesh();
  const int nl = space.local_dim();
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(mesh.cells.size() * nl * nl);
  PointEval e;
  Eigen::MatrixXd Ke(nl, nl);
  for (int c = 0; c < static_cast<int>(mesh.cells.size()); ++c) {
    Ke.setZero();
    const double jac = 2.0 * mesh.cells[c].area;
    for (int q = 0; q < rule.size(); ++q) {
      space.evaluate(c, space.map_to_physical(c, rule.points[q]), e);
      Ke.noalias() += (rule.weights[q] * jac) * e.value * e.value.transpose();
    }
    const int* d = space.cell_dofs(c);
    for (int i = 0; i < nl; ++i)
      for (int j = 0; j < nl; ++j) trip.emplace_back(d[i], d[j], Ke(i, j));
  }
  SpMat M(space.num_dofs(), space.num_dofs());
  M.setFromTriplets(trip.begin(), trip.end());
  return M;
}

Vector load_vector(const FESpace& space, const VectorField& field, double t, int quad_degree) {
  if (space.kind() != SpaceKind::hcurl_nedelec2) throw std::invalid_argument("load_vector: needs an H(curl) space");
  const TriangleRule rule = triangle_rule(quad_degree > 0 ? quad_degree : default_degree(space));
  const Mesh& mesh = space.mesh();
  Vector b = Vector::Zero(space.num_dofs());
  PointEval e;
  for (int c = 0; c < static_cast<int>(mesh.cells.size()); ++c) {
    const double jac = 2.0 * mesh.cells[c].area;
    const int* d = space.cell_dofs(c);
    for (int q = 0; q < rule.size(); ++q) {
      const Vec2 x = space.map_to_physical(c, rule.points[q]);
      space.evaluate(c, x, e);
      const Vec2 f = field.value(x, t);
      for (int i = 0; i < space.local_dim(); ++i)
        b[d[i]] += rule.weights[q] * jac * (e.value(i, 0) * f.x() + e.value(i, 1) * f.y());
    }
  }
  return b;
}

Vector l2_project_hcurl(const FESpace& space, const VectorField& field, double t) {
  const SpMat M = mass_matrix(space);
  Eigen::SimplicialLDLT<SpMat> ldlt(M);
  if (ldlt.info() != Eigen::Success) throw SolverError("l2_project_hcurl: mass matrix factorization failed");
  return ldlt.solve(load_vector(space, field, t, 2 * space.degree() + 4));
}

Vector canonical_interpolate_hcurl(const FESpace& space, const VectorField& field, double t, int edge_degree) {
  if (space.kind() != SpaceKind::hcurl_nedelec2)
    throw std::invalid_argument("canonical_interpolate_hcurl: needs an H(curl) space");
  const EdgeRule er = edge_rule(edge_degree);
  const Mesh& mesh = space.mesh();
  Vector v = Vector::Zero(space.num_dofs());
  std::vector<bool> done(space.num_dofs(), false);
  for (int c = 0; c < static_cast<int>(mesh.cells.size()); ++c) {
    const auto segs = space.dof_segments(c);
    const int* d = space.cell_dofs(c);
    for (int i = 0; i < space.local_dim(); ++i) {
      if (done[d[i]]) continue;
      const Vec2 dir = segs[i].to - segs[i].from;
      double s = 0.0;
      for (int q = 0; q < er.size(); ++q) s += er.weights[q] * field.value(segs[i].from + er.points[q] * dir, t).dot(dir);
      v[d[i]] = s;
      done[d[i]] = true;
    }
  }
  return v;
}

Vector nodal_interpolate_h1(const FESpace& space, const ScalarField& field, double t) {
  if (space.kind() != SpaceKind::h1_lagrange) throw std::invalid_argument("nodal_interpolate_h1: needs a Lagrange space");
  const Mesh& mesh = space.mesh();
  Vector v = Vector::Zero(space.num_dofs());
  std::vector<bool> done(space.num_dofs(), false);
  for (int c = 0; c < static_cast<int>(mesh.cells.size()); ++c) {
    const auto nodes = space.node_points(c);
    const int* d = space.cell_dofs(c);
    for (int i = 0; i < space.local_dim(); ++i) {
      if (done[d[i]]) continue;
      v[d[i]] = field.value(nodes[i], t);
      done[d[i]] = true;
    }
  }
  return v;
}

LerayProjector::LerayProjector(const SpMat& mass, const SpMat& G) : mass_(mass), G_(G) {
  SpMat K = SpMat(G.transpose()) * mass * G;
  // Constants span the kernel of K and the right-hand side is orthogonal to them, so
  // pinning one entry leaves the solution of K q = r unchanged.
  K.coeffRef(0, 0) += 1.0;
  solver_.compute(K);
  if (solver_.info() != Eigen::Success) throw SolverError("LerayProjector: gradient Laplacian factorization failed");
}

Vector LerayProjector::apply(const Vector& v) const {
  const Vector r = G_.transpose() * (mass_ * v);
  const Vector q = solver_.solve(r);
  return v - G_ * q;
}

}  // namespace curlmhd
