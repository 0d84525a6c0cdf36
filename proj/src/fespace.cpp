#include "curlmhd/fespace.hpp"

#include "curlmhd/quadrature.hpp"

#include <string>
#include <utility>

namespace curlmhd {

namespace {

std::vector<std::pair<int, int>> exponents(int degree) {
  std::vector<std::pair<int, int>> e;
  for (int d = 0; d <= degree; ++d)
    for (int b = 0; b <= d; ++b) e.emplace_back(d - b, b);
  return e;
}

double ipow(double x, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

// Scaled monomials (x - c)/h and their x-derivatives.
void monomials(const std::vector<std::pair<int, int>>& ex, const Vec2& x, const Vec2& c, double h,
               Eigen::VectorXd& m, Eigen::VectorXd* mx, Eigen::VectorXd* my) {
  const Vec2 xi = (x - c) / h;
  const int n = static_cast<int>(ex.size());
  m.resize(n);
  if (mx) mx->resize(n);
  if (my) my->resize(n);
  for (int i = 0; i < n; ++i) {
    const auto [a, b] = ex[i];
    const double pa = ipow(xi.x(), a), pb = ipow(xi.y(), b);
    m[i] = pa * pb;
    if (mx) (*mx)[i] = a > 0 ? a * ipow(xi.x(), a - 1) * pb / h : 0.0;
    if (my) (*my)[i] = b > 0 ? b * pa * ipow(xi.y(), b - 1) / h : 0.0;
  }
}

}  // namespace

FESpace FESpace::build(std::shared_ptr<const Mesh> mesh_ptr, SpaceKind kind, int degree) {
  if (!mesh_ptr) throw StructuralError("FESpace::build: null mesh");
  const Mesh& mesh = *mesh_ptr;
  if (kind == SpaceKind::hcurl_nedelec2 && degree != 1 && degree != 2)
    throw std::invalid_argument("FESpace::build: unsupported H(curl) degree " + std::to_string(degree));
  if (kind == SpaceKind::h1_lagrange && degree != 2 && degree != 3)
    throw std::invalid_argument("FESpace::build: unsupported Lagrange degree " + std::to_string(degree));

  FESpace sp;
  sp.mesh_ = std::move(mesh_ptr);
  sp.kind_ = kind;
  sp.degree_ = degree;
  const int nc = static_cast<int>(mesh.cells.size());
  const int nf = static_cast<int>(mesh.faces.size());
  const auto ex = exponents(degree);
  const int np = static_cast<int>(ex.size());

  sp.center_.resize(nc);
  sp.scale_.resize(nc);
  for (int c = 0; c < nc; ++c) {
    sp.center_[c] = mesh.centroid(c);
    sp.scale_[c] = mesh.cells[c].diameter;
  }

  if (kind == SpaceKind::hcurl_nedelec2) {
    const int k = degree;
    sp.local_dim_ = 2 * np;
    sp.ndofs_ = nf * (k + 1) + (k == 2 ? 3 * nc : 0);
    sp.cell_dofs_.resize(static_cast<std::size_t>(nc) * sp.local_dim_);
    for (int c = 0; c < nc; ++c) {
      const auto& t = mesh.cells[c];
      int* d = &sp.cell_dofs_[static_cast<std::size_t>(c) * sp.local_dim_];
      int i = 0;
      for (int l = 0; l < 3; ++l)
        for (int j = 0; j <= k; ++j) d[i++] = t.faces[l] * (k + 1) + j;
      if (k == 2)
        for (int m = 0; m < 3; ++m) d[i++] = nf * (k + 1) + 3 * c + m;
    }
    for (int f = 0; f < nf; ++f)
      if (mesh.faces[f].boundary)
        for (int j = 0; j <= k; ++j) sp.boundary_dofs_.push_back(f * (k + 1) + j);

    const EdgeRule er = edge_rule(2 * k);
    sp.coeff_.resize(nc);
    for (int c = 0; c < nc; ++c) {
      const auto segs = sp.dof_segments(c);
      Eigen::MatrixXd V = Eigen::MatrixXd::Zero(sp.local_dim_, sp.local_dim_);
      Eigen::VectorXd m;
      for (int l = 0; l < sp.local_dim_; ++l) {
        const Vec2 d = segs[l].to - segs[l].from;
        for (int q = 0; q < er.size(); ++q) {
          monomials(ex, segs[l].from + er.points[q] * d, sp.center_[c], sp.scale_[c], m, nullptr, nullptr);
          V.row(l).head(np) += er.weights[q] * d.x() * m.transpose();
          V.row(l).tail(np) += er.weights[q] * d.y() * m.transpose();
        }
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(V);
      if (!lu.isInvertible())
        throw StructuralError("FESpace::build: H(curl) dof matrix singular on cell " + std::to_string(c));
      sp.coeff_[c] = lu.inverse().transpose();
    }
  } else {
    const int p = degree;
    const int nclass = mesh.num_vertex_classes;
    sp.local_dim_ = np;
    sp.ndofs_ = nclass + nf * (p - 1) + (p == 3 ? nc : 0);
    sp.cell_dofs_.resize(static_cast<std::size_t>(nc) * sp.local_dim_);
    for (int c = 0; c < nc; ++c) {
      const auto& t = mesh.cells[c];
      int* d = &sp.cell_dofs_[static_cast<std::size_t>(c) * sp.local_dim_];
      int i = 0;
      for (int l = 0; l < 3; ++l) d[i++] = mesh.vertex_class[t.v[l]];
      for (int l = 0; l < 3; ++l)
        for (int a = 1; a < p; ++a)
          d[i++] = nclass + t.faces[l] * (p - 1) + (t.face_sign[l] > 0 ? a - 1 : p - 1 - a);
      if (p == 3) d[i++] = nclass + nf * (p - 1) + c;
    }
    std::vector<bool> on_boundary(sp.ndofs_, false);
    for (int f = 0; f < nf; ++f) {
      const auto& F = mesh.faces[f];
      if (!F.boundary) continue;
      on_boundary[mesh.vertex_class[F.v[0]]] = on_boundary[mesh.vertex_class[F.v[1]]] = true;
      for (int a = 0; a < p - 1; ++a) on_boundary[nclass + f * (p - 1) + a] = true;
    }
    for (int i = 0; i < sp.ndofs_; ++i)
      if (on_boundary[i]) sp.boundary_dofs_.push_back(i);

    sp.coeff_.resize(nc);
    for (int c = 0; c < nc; ++c) {
      const auto nodes = sp.node_points(c);
      Eigen::MatrixXd V(np, np);
      Eigen::VectorXd m;
      for (int l = 0; l < np; ++l) {
        monomials(ex, nodes[l], sp.center_[c], sp.scale_[c], m, nullptr, nullptr);
        V.row(l) = m.transpose();
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(V);
      if (!lu.isInvertible())
        throw StructuralError("FESpace::build: Lagrange node matrix singular on cell " + std::to_string(c));
      sp.coeff_[c] = lu.inverse().transpose();
    }
  }
  return sp;
}

std::vector<DofSegment> FESpace::dof_segments(int cell) const {
  if (kind_ != SpaceKind::hcurl_nedelec2) throw std::logic_error("dof_segments: not an H(curl) space");
  const auto& t = mesh_->cells.at(cell);
  const auto& x = mesh_->vertices;
  const int k = degree_;
  std::vector<DofSegment> segs;
  segs.reserve(local_dim_);
  for (int l = 0; l < 3; ++l) {
    Vec2 a = x[t.v[l]], b = x[t.v[(l + 1) % 3]];
    if (t.face_sign[l] < 0) std::swap(a, b);
    for (int j = 0; j <= k; ++j)
      segs.push_back({a + (static_cast<double>(j) / (k + 1)) * (b - a), a + (static_cast<double>(j + 1) / (k + 1)) * (b - a)});
  }
  if (k == 2) {
    const Vec2 g = mesh_->centroid(cell);
    for (int m = 0; m < 3; ++m) segs.push_back({g, x[t.v[m]]});
  }
  return segs;
}

std::vector<Vec2> FESpace::node_points(int cell) const {
  if (kind_ != SpaceKind::h1_lagrange) throw std::logic_error("node_points: not a Lagrange space");
  const auto& t = mesh_->cells.at(cell);
  const auto& x = mesh_->vertices;
  const int p = degree_;
  std::vector<Vec2> nodes;
  nodes.reserve(local_dim_);
  for (int l = 0; l < 3; ++l) nodes.push_back(x[t.v[l]]);
  for (int l = 0; l < 3; ++l) {
    const Vec2 a = x[t.v[l]], b = x[t.v[(l + 1) % 3]];
    for (int i = 1; i < p; ++i) nodes.push_back(a + (static_cast<double>(i) / p) * (b - a));
  }
  if (p == 3) nodes.push_back(mesh_->centroid(cell));
  return nodes;
}

void FESpace::evaluate(int cell, const Vec2& x, PointEval& out, bool with_grad) const {
  if (cell < 0 || cell >= static_cast<int>(coeff_.size()))
    throw std::out_of_range("FESpace::evaluate: cell index " + std::to_string(cell) + " out of range");
  static thread_local std::vector<std::pair<int, int>> ex;
  static thread_local int ex_degree = -1;
  if (ex_degree != degree_) {
    ex = exponents(degree_);
    ex_degree = degree_;
  }
  Eigen::VectorXd m, mx, my;
  monomials(ex, x, center_[cell], scale_[cell], m, &mx, &my);
  const Eigen::MatrixXd& C = coeff_[cell];
  const int np = static_cast<int>(m.size());
  if (kind_ == SpaceKind::hcurl_nedelec2) {
    const auto Cl = C.leftCols(np);
    const auto Cr = C.rightCols(np);
    out.value.resize(local_dim_, 2);
    out.value.col(0).noalias() = Cl * m;
    out.value.col(1).noalias() = Cr * m;
    out.curl.noalias() = Cr * mx - Cl * my;
    if (with_grad) {
      out.grad.resize(local_dim_, 4);
      out.grad.col(0).noalias() = Cl * mx;
      out.grad.col(1).noalias() = Cl * my;
      out.grad.col(2).noalias() = Cr * mx;
      out.grad.col(3).noalias() = Cr * my;
    }
  } else {
    out.value.resize(local_dim_, 1);
    out.value.col(0).noalias() = C * m;
    out.curl.resize(0);
    out.grad.resize(local_dim_, 2);
    out.grad.col(0).noalias() = C * mx;
    out.grad.col(1).noalias() = C * my;
  }
}

Vec2 FESpace::map_to_physical(int cell, const Vec2& r) const {
  const auto& t = mesh_->cells.at(cell);
  const auto& x = mesh_->vertices;
  return x[t.v[0]] + r.x() * (x[t.v[1]] - x[t.v[0]]) + r.y() * (x[t.v[2]] - x[t.v[0]]);
}

PointEval FESpace::evaluate_basis(int cell, const Vec2& ref_point, bool with_grad) const {
  if (cell < 0 || cell >= static_cast<int>(mesh_->cells.size()))
    throw std::out_of_range("FESpace::evaluate_basis: cell index " + std::to_string(cell) + " out of range");
  PointEval e;
  evaluate(cell, map_to_physical(cell, ref_point), e, with_grad);
  return e;
}

std::array<FESpace::Trace, 2> FESpace::face_trace_pair(int face, const std::vector<double>& s, bool with_grad,
                                                       bool allow_boundary) const {
  const Face& F = mesh_->faces.at(face);
  if (F.boundary && !allow_boundary)
    throw std::invalid_argument("face_trace_pair: face " + std::to_string(face) + " is a boundary face");
  std::array<Trace, 2> tr;
  for (int side = 0; side < 2; ++side) {
    tr[side].cell = F.cells[side];
    if (tr[side].cell < 0) continue;
    const Vec2 shift = side == 0 ? Vec2::Zero() : F.shift;
    tr[side].at.resize(s.size());
    for (std::size_t q = 0; q < s.size(); ++q)
      evaluate(tr[side].cell, F.point(mesh_->vertices, s[q]) + shift, tr[side].at[q], with_grad);
  }
  return tr;
}

Vec2 FESpace::field_value(const Vector& coeffs, int cell, const Vec2& x) const {
  PointEval e;
  evaluate(cell, x, e);
  const int* d = cell_dofs(cell);
  Vec2 v = Vec2::Zero();
  for (int i = 0; i < local_dim_; ++i) v += coeffs[d[i]] * e.value.row(i).transpose().head<2>();
  return v;
}

double FESpace::field_curl(const Vector& coeffs, int cell, const Vec2& x) const {
  PointEval e;
  evaluate(cell, x, e);
  const int* d = cell_dofs(cell);
  double w = 0.0;
  for (int i = 0; i < local_dim_; ++i) w += coeffs[d[i]] * e.curl[i];
  return w;
}

double FESpace::scalar_value(const Vector& coeffs, int cell, const Vec2& x) const {
  PointEval e;
  evaluate(cell, x, e);
  const int* d = cell_dofs(cell);
  double v = 0.0;
  for (int i = 0; i < local_dim_; ++i) v += coeffs[d[i]] * e.value(i, 0);
  return v;
}

SpMat discrete_gradient(const FESpace& hc, const FESpace& h1) {
  if (hc.kind() != SpaceKind::hcurl_nedelec2 || h1.kind() != SpaceKind::h1_lagrange || h1.degree() != hc.degree() + 1)
    throw std::invalid_argument("discrete_gradient: needs H(curl) degree k and Lagrange degree k+1");
  const Mesh& mesh = hc.mesh();
  const int k = hc.degree();
  const int nclass = mesh.num_vertex_classes;
  const int nf = static_cast<int>(mesh.faces.size());
  std::vector<Eigen::Triplet<double>> trip;
  for (int f = 0; f < nf; ++f) {
    const auto& F = mesh.faces[f];
    auto node = [&](int pos) {
      if (pos == 0) return mesh.vertex_class[F.v[0]];
      if (pos == k + 1) return mesh.vertex_class[F.v[1]];
      return nclass + f * k + (pos - 1);
    };
    for (int j = 0; j <= k; ++j) {
      trip.emplace_back(f * (k + 1) + j, node(j + 1), 1.0);
      trip.emplace_back(f * (k + 1) + j, node(j), -1.0);
    }
  }
  if (k == 2) {
    for (int c = 0; c < static_cast<int>(mesh.cells.size()); ++c)
      for (int m = 0; m < 3; ++m) {
        const int row = nf * 3 + 3 * c + m;
        trip.emplace_back(row, mesh.vertex_class[mesh.cells[c].v[m]], 1.0);
        trip.emplace_back(row, nclass + nf * k + c, -1.0);
      }
  }
  SpMat G(hc.num_dofs(), h1.num_dofs());
  G.setFromTriplets(trip.begin(), trip.end());
  return G;
}

}  // namespace curlmhd
