#include "curlmhd/forms.hpp"

#include "curlmhd/quadrature.hpp"

#include <algorithm>
#include <string>

namespace curlmhd {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

void scatter(Triplets& trip, const int* rows, int nr, const int* cols, int nc, const Eigen::MatrixXd& Ke) {
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nc; ++j) trip.emplace_back(rows[i], cols[j], Ke(i, j));
}

SpMat from_triplets(int rows, int cols, const Triplets& trip) {
  SpMat A(rows, cols);
  A.setFromTriplets(trip.begin(), trip.end());
  return A;
}

// Coefficient-weighted value/curl of an H(curl) field from a cached local evaluation.
Vec2 value_at(const PointEval& e, const Vector& c, const int* d, int nl) {
  Vec2 v = Vec2::Zero();
  for (int i = 0; i < nl; ++i) v += c[d[i]] * Vec2(e.value(i, 0), e.value(i, 1));
  return v;
}

double curl_at(const PointEval& e, const Vector& c, const int* d, int nl) {
  double w = 0.0;
  for (int i = 0; i < nl; ++i) w += c[d[i]] * e.curl[i];
  return w;
}

}  // namespace

FormContext::FormContext(std::shared_ptr<const Mesh> mesh, int k, FormParams params, int quad_degree)
    : mesh_(mesh),
      hcurl_(FESpace::build(mesh, SpaceKind::hcurl_nedelec2, k)),
      h1_(FESpace::build(mesh, SpaceKind::h1_lagrange, k + 1)),
      params_(params),
      quad_degree_(quad_degree > 0 ? quad_degree : 2 * k + 2) {
  const TriangleRule tr = triangle_rule(quad_degree_);
  const EdgeRule er = edge_rule(quad_degree_);
  cells_.resize(mesh_->cells.size());
  for (int c = 0; c < static_cast<int>(cells_.size()); ++c) {
    auto& cd = cells_[c];
    const double jac = 2.0 * mesh_->cells[c].area;
    cd.w.resize(tr.size());
    cd.x.resize(tr.size());
    cd.hc.resize(tr.size());
    cd.h1.resize(tr.size());
    for (int q = 0; q < tr.size(); ++q) {
      cd.w[q] = tr.weights[q] * jac;
      cd.x[q] = hcurl_.map_to_physical(c, tr.points[q]);
      hcurl_.evaluate(c, cd.x[q], cd.hc[q], false);
      h1_.evaluate(c, cd.x[q], cd.h1[q], false);
    }
  }
  faces_.resize(mesh_->faces.size());
  for (int f = 0; f < static_cast<int>(faces_.size()); ++f) {
    auto& fd = faces_[f];
    const Face& F = mesh_->faces[f];
    fd.s = er.points;
    fd.w.resize(er.size());
    fd.x.resize(er.size());
    for (int q = 0; q < er.size(); ++q) {
      fd.w[q] = er.weights[q] * F.length;
      fd.x[q] = F.point(mesh_->vertices, er.points[q]);
    }
    auto tr2 = hcurl_.face_trace_pair(f, fd.s, true, true);
    for (int side = 0; side < 2; ++side) {
      fd.cell[side] = tr2[side].cell;
      fd.hc[side] = std::move(tr2[side].at);
    }
  }
}

SpMat assemble_bilinear(const FormContext& ctx, BilinearKind kind) {
  const Mesh& mesh = ctx.mesh();
  const FESpace& V = ctx.hcurl();
  const FESpace& Q = ctx.h1();
  const int nl = V.local_dim(), ml = Q.local_dim();
  Triplets trip;
  if (kind == BilinearKind::mass || kind == BilinearKind::a_curlcurl || kind == BilinearKind::b_grad) {
    const int cols_local = kind == BilinearKind::b_grad ? ml : nl;
    Eigen::MatrixXd Ke(nl, cols_local);
    for (int c = 0; c < static_cast<int>(mesh.cells.size()); ++c) {
      const auto& cd = ctx.cell(c);
      Ke.setZero();
      for (std::size_t q = 0; q < cd.w.size(); ++q) {
        const auto& e = cd.hc[q];
        if (kind == BilinearKind::mass)
          Ke.noalias() += cd.w[q] * e.value * e.value.transpose();
        else if (kind == BilinearKind::a_curlcurl)
          Ke.noalias() += cd.w[q] * e.curl * e.curl.transpose();
        else
          Ke.noalias() += cd.w[q] * e.value * cd.h1[q].grad.transpose();
      }
      scatter(trip, V.cell_dofs(c), nl, kind == BilinearKind::b_grad ? Q.cell_dofs(c) : V.cell_dofs(c), cols_local, Ke);
    }
    return from_triplets(V.num_dofs(), kind == BilinearKind::b_grad ? Q.num_dofs() : V.num_dofs(), trip);
  }
  // d_nitsche
  const double alpha = ctx.params().alpha;
  Eigen::MatrixXd Ke(nl, nl);
  Eigen::VectorXd tr(nl);
  for (int f = 0; f < static_cast<int>(mesh.faces.size()); ++f) {
    const Face& F = mesh.faces[f];
    if (!F.boundary) continue;
    const auto& fd = ctx.face(f);
    Ke.setZero();
    for (std::size_t q = 0; q < fd.w.size(); ++q) {
      const auto& e = fd.hc[0][q];
      tr = e.value * F.tangent;
      Ke.noalias() -= fd.w[q] * (tr * e.curl.transpose() + e.curl * tr.transpose());
      Ke.noalias() += (fd.w[q] * alpha / F.length) * tr * tr.transpose();
    }
    const int* d = V.cell_dofs(fd.cell[0]);
    scatter(trip, d, nl, d, nl, Ke);
  }
  return from_triplets(V.num_dofs(), V.num_dofs(), trip);
}

Vector lagrange_mean_row(const FormContext& ctx) {
  const FESpace& Q = ctx.h1();
  Vector m = Vector::Zero(Q.num_dofs());
  for (int c = 0; c < static_cast<int>(ctx.mesh().cells.size()); ++c) {
    const auto& cd = ctx.cell(c);
    const int* d = Q.cell_dofs(c);
    for (std::size_t q = 0; q < cd.w.size(); ++q)
      for (int i = 0; i < Q.local_dim(); ++i) m[d[i]] += cd.w[q] * cd.h1[q].value(i, 0);
  }
  return m;
}

SpMat assemble_convection(const FormContext& ctx, const Vector& w, ConvectionPattern pattern) {
  const FESpace& V = ctx.hcurl();
  if (w.size() != V.num_dofs()) throw std::invalid_argument("assemble_convection: coefficient vector has wrong size");
  const int nl = V.local_dim();
  Triplets trip;
  trip.reserve(ctx.mesh().cells.size() * nl * nl);
  Eigen::MatrixXd Ke(nl, nl), R(nl, 2);
  for (int c = 0; c < static_cast<int>(ctx.mesh().cells.size()); ++c) {
    const auto& cd = ctx.cell(c);
    const int* d = V.cell_dofs(c);
    Ke.setZero();
    for (std::size_t q = 0; q < cd.w.size(); ++q) {
      const auto& e = cd.hc[q];
      if (pattern == ConvectionPattern::c_w_uv) {
        // C(i, j) = omega_w rot90(phi_j) . phi_i
        const double om = curl_at(e, w, d, nl);
        R.col(0) = -e.value.col(1);
        R.col(1) = e.value.col(0);
        Ke.noalias() += (cd.w[q] * om) * e.value * R.transpose();
      } else {
        // K(i, j) = curl phi_i rot90(w) . phi_j
        const Vec2 rw = rot90(value_at(e, w, d, nl));
        Ke.noalias() += cd.w[q] * e.curl * (e.value * rw).transpose();
      }
    }
    scatter(trip, d, nl, d, nl, Ke);
  }
  return from_triplets(V.num_dofs(), V.num_dofs(), trip);
}

void apply_nonlinear(const FormContext& ctx, const Vector& u, const Vector& B, Vector& ru, Vector& rB) {
  const FESpace& V = ctx.hcurl();
  const int nl = V.local_dim();
  ru = Vector::Zero(V.num_dofs());
  rB = Vector::Zero(V.num_dofs());
  Eigen::VectorXd lu(nl), lB(nl);
  for (int c = 0; c < static_cast<int>(ctx.mesh().cells.size()); ++c) {
    const auto& cd = ctx.cell(c);
    const int* d = V.cell_dofs(c);
    for (int i = 0; i < nl; ++i) lu[i] = u[d[i]], lB[i] = B[d[i]];
    for (std::size_t q = 0; q < cd.w.size(); ++q) {
      const auto& e = cd.hc[q];
      const Vec2 uv = e.value.transpose() * lu, Bv = e.value.transpose() * lB;
      const double wu = e.curl.dot(lu), wB = e.curl.dot(lB);
      const Vec2 fu = cd.w[q] * (wu * rot90(uv) - wB * rot90(Bv));
      const double fB = cd.w[q] * rot90(Bv).dot(uv);
      for (int i = 0; i < nl; ++i) {
        ru[d[i]] += e.value(i, 0) * fu.x() + e.value(i, 1) * fu.y();
        rB[d[i]] += e.curl[i] * fB;
      }
    }
  }
}

std::vector<double> face_weights(const FormContext& ctx, const Vector& w, const Vector* z) {
  const FESpace& V = ctx.hcurl();
  const int nl = V.local_dim();
  std::vector<double> g(ctx.mesh().faces.size(), ctx.params().c_s);
  for (int f = 0; f < static_cast<int>(g.size()); ++f) {
    const auto& fd = ctx.face(f);
    double m = ctx.params().c_s;
    for (int side = 0; side < 2; ++side) {
      if (fd.cell[side] < 0) continue;
      const int* d = V.cell_dofs(fd.cell[side]);
      for (const auto& e : fd.hc[side]) {
        m = std::max(m, value_at(e, w, d, nl).norm());
        if (z) m = std::max(m, value_at(e, *z, d, nl).norm());
      }
    }
    g[f] = m;
  }
  return g;
}

SpMat assemble_cip(const FormContext& ctx, const std::vector<double>& weights, CipKind kind) {
  const Mesh& mesh = ctx.mesh();
  const FESpace& V = ctx.hcurl();
  const int nl = V.local_dim();
  if (weights.size() != mesh.faces.size()) throw std::invalid_argument("assemble_cip: one weight per face required");
  Triplets trip;
  std::vector<int> dofs(2 * nl);
  Eigen::MatrixXd Ke(2 * nl, 2 * nl), J;
  for (int f = 0; f < static_cast<int>(mesh.faces.size()); ++f) {
    const Face& F = mesh.faces[f];
    const auto& fd = ctx.face(f);
    if (F.boundary) {
      if (kind != CipKind::stilde_jump) continue;
      Ke.topLeftCorner(nl, nl).setZero();
      for (std::size_t q = 0; q < fd.w.size(); ++q) {
        const Eigen::VectorXd un = fd.hc[0][q].value * F.normal;
        Ke.topLeftCorner(nl, nl).noalias() += (fd.w[q] * weights[f]) * un * un.transpose();
      }
      const int* d = V.cell_dofs(fd.cell[0]);
      scatter(trip, d, nl, d, nl, Ke.topLeftCorner(nl, nl));
      continue;
    }
    const double h = F.length;
    double scale = weights[f];
    if (kind == CipKind::s_jump) scale /= h;
    if (kind == CipKind::sigma_gradjump || kind == CipKind::tau_curljump) scale *= h * h;
    std::copy_n(V.cell_dofs(fd.cell[0]), nl, dofs.begin());
    std::copy_n(V.cell_dofs(fd.cell[1]), nl, dofs.begin() + nl);
    Ke.setZero();
    for (std::size_t q = 0; q < fd.w.size(); ++q) {
      const auto& e0 = fd.hc[0][q];
      const auto& e1 = fd.hc[1][q];
      if (kind == CipKind::tau_curljump) {
        J.resize(2 * nl, 1);
        J.col(0) << e0.curl, -e1.curl;
      } else if (kind == CipKind::sigma_gradjump) {
        J.resize(2 * nl, 4);
        J << e0.grad, -e1.grad;
      } else {
        J.resize(2 * nl, 2);
        J << e0.value, -e1.value;
      }
      Ke.noalias() += (fd.w[q] * scale) * J * J.transpose();
    }
    scatter(trip, dofs.data(), 2 * nl, dofs.data(), 2 * nl, Ke);
  }
  return from_triplets(V.num_dofs(), V.num_dofs(), trip);
}

Vector apply_cip(const FormContext& ctx, const std::vector<double>& weights, CipKind kind, const Vector& v) {
  const Mesh& mesh = ctx.mesh();
  const FESpace& V = ctx.hcurl();
  const int nl = V.local_dim();
  if (weights.size() != mesh.faces.size()) throw std::invalid_argument("apply_cip: one weight per face required");
  Vector out = Vector::Zero(V.num_dofs());
  Eigen::VectorXd l0(nl), l1(nl);
  for (int f = 0; f < static_cast<int>(mesh.faces.size()); ++f) {
    const Face& F = mesh.faces[f];
    const auto& fd = ctx.face(f);
    const int* d0 = V.cell_dofs(fd.cell[0]);
    for (int i = 0; i < nl; ++i) l0[i] = v[d0[i]];
    if (F.boundary) {
      if (kind != CipKind::stilde_jump) continue;
      for (std::size_t q = 0; q < fd.w.size(); ++q) {
        const Eigen::VectorXd un = fd.hc[0][q].value * F.normal;
        const double a = fd.w[q] * weights[f] * un.dot(l0);
        for (int i = 0; i < nl; ++i) out[d0[i]] += a * un[i];
      }
      continue;
    }
    const int* d1 = V.cell_dofs(fd.cell[1]);
    for (int i = 0; i < nl; ++i) l1[i] = v[d1[i]];
    const double h = F.length;
    double scale = weights[f];
    if (kind == CipKind::s_jump) scale /= h;
    if (kind == CipKind::sigma_gradjump || kind == CipKind::tau_curljump) scale *= h * h;
    for (std::size_t q = 0; q < fd.w.size(); ++q) {
      const auto& e0 = fd.hc[0][q];
      const auto& e1 = fd.hc[1][q];
      const double a = fd.w[q] * scale;
      if (kind == CipKind::tau_curljump) {
        const double j = a * (e0.curl.dot(l0) - e1.curl.dot(l1));
        for (int i = 0; i < nl; ++i) out[d0[i]] += j * e0.curl[i], out[d1[i]] -= j * e1.curl[i];
      } else {
        const Eigen::MatrixXd& m0 = kind == CipKind::sigma_gradjump ? e0.grad : e0.value;
        const Eigen::MatrixXd& m1 = kind == CipKind::sigma_gradjump ? e1.grad : e1.value;
        const Eigen::VectorXd j = a * (m0.transpose() * l0 - m1.transpose() * l1);
        const Eigen::VectorXd a0 = m0 * j, a1 = m1 * j;
        for (int i = 0; i < nl; ++i) out[d0[i]] += a0[i], out[d1[i]] -= a1[i];
      }
    }
  }
  return out;
}

SpMat assemble_cip(const FormContext& ctx, const Vector& w, const Vector* z, CipKind kind) {
  return assemble_cip(ctx, face_weights(ctx, w, z), kind);
}

Vector nitsche_rhs(const FormContext& ctx, const std::function<double(const Vec2& x, const Vec2& tangent)>& g_t) {
  const FESpace& V = ctx.hcurl();
  const int nl = V.local_dim();
  const double alpha = ctx.params().alpha;
  Vector r = Vector::Zero(V.num_dofs());
  for (int f = 0; f < static_cast<int>(ctx.mesh().faces.size()); ++f) {
    const Face& F = ctx.mesh().faces[f];
    if (!F.boundary) continue;
    const auto& fd = ctx.face(f);
    const int* d = V.cell_dofs(fd.cell[0]);
    for (std::size_t q = 0; q < fd.w.size(); ++q) {
      const double g = g_t(fd.x[q], F.tangent);
      const auto& e = fd.hc[0][q];
      for (int i = 0; i < nl; ++i) {
        const double vt = e.value(i, 0) * F.tangent.x() + e.value(i, 1) * F.tangent.y();
        r[d[i]] += fd.w[q] * g * (-e.curl[i] + alpha / F.length * vt);
      }
    }
  }
  return r;
}

Vector hcurl_load(const FormContext& ctx, const VectorField& f, double t) {
  const FESpace& V = ctx.hcurl();
  const int nl = V.local_dim();
  Vector b = Vector::Zero(V.num_dofs());
  for (int c = 0; c < static_cast<int>(ctx.mesh().cells.size()); ++c) {
    const auto& cd = ctx.cell(c);
    const int* d = V.cell_dofs(c);
    for (std::size_t q = 0; q < cd.w.size(); ++q) {
      const Vec2 val = f.value(cd.x[q], t);
      for (int i = 0; i < nl; ++i) b[d[i]] += cd.w[q] * (cd.hc[q].value(i, 0) * val.x() + cd.hc[q].value(i, 1) * val.y());
    }
  }
  return b;
}

double sharp_norm_sq(const FormContext& ctx, const Vector& v) {
  const FESpace& V = ctx.hcurl();
  const int nl = V.local_dim();
  double s = 0.0;
  for (int c = 0; c < static_cast<int>(ctx.mesh().cells.size()); ++c) {
    const auto& cd = ctx.cell(c);
    const int* d = V.cell_dofs(c);
    for (std::size_t q = 0; q < cd.w.size(); ++q) {
      const double w = curl_at(cd.hc[q], v, d, nl);
      s += cd.w[q] * w * w;
    }
  }
  for (int f = 0; f < static_cast<int>(ctx.mesh().faces.size()); ++f) {
    const Face& F = ctx.mesh().faces[f];
    if (!F.boundary) continue;
    const auto& fd = ctx.face(f);
    const int* d = V.cell_dofs(fd.cell[0]);
    for (std::size_t q = 0; q < fd.w.size(); ++q) {
      const double vt = value_at(fd.hc[0][q], v, d, nl).dot(F.tangent);
      s += fd.w[q] * vt * vt / F.length;
    }
  }
  return s;
}

}  // namespace curlmhd
