#include "curlmhd/analysis.hpp"

#include "curlmhd/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace curlmhd {

ErrorAccumulator::ErrorAccumulator(const MhdSystem& sys, int quad_degree)
    : sys_(sys), quad_degree_(quad_degree > 0 ? quad_degree : 2 * (sys.config().k + 1) + 2) {
  if (!sys.scenario().has_exact || !sys.scenario().u.value || !sys.scenario().B.value || !sys.scenario().u.curl ||
      !sys.scenario().B.curl)
    throw std::invalid_argument("ErrorAccumulator: scenario '" + sys.scenario().name + "' has no exact solution");
  const FESpace& V = sys.context().hcurl();
  const Mesh& mesh = V.mesh();
  const TriangleRule tr = triangle_rule(std::min(quad_degree_, 10));
  cells_.resize(mesh.cells.size());
  for (int c = 0; c < static_cast<int>(mesh.cells.size()); ++c) {
    auto& cc = cells_[c];
    for (int q = 0; q < tr.size(); ++q) {
      cc.w.push_back(tr.weights[q] * 2.0 * mesh.cells[c].area);
      cc.x.push_back(V.map_to_physical(c, tr.points[q]));
      cc.e.emplace_back();
      V.evaluate(c, cc.x.back(), cc.e.back());
    }
  }
  const EdgeRule er = edge_rule(std::min(quad_degree_, 12));
  for (int f = 0; f < static_cast<int>(mesh.faces.size()); ++f) {
    const Face& F = mesh.faces[f];
    if (!F.boundary) continue;
    bface_ids_.push_back(f);
    Cache fc;
    for (int q = 0; q < er.size(); ++q) {
      fc.w.push_back(er.weights[q] * F.length);
      fc.x.push_back(F.point(mesh.vertices, er.points[q]));
      fc.e.emplace_back();
      V.evaluate(F.cells[0], fc.x.back(), fc.e.back());
    }
    bfaces_.push_back(std::move(fc));
  }
}

ErrorAccumulator::NodeErrors ErrorAccumulator::node_errors(const SystemState& s) const {
  const Scenario& sc = sys_.scenario();
  const FESpace& V = sys_.context().hcurl();
  const Mesh& mesh = V.mesh();
  const int nl = V.local_dim();
  NodeErrors ne;
  ne.t = s.t;
  double curl_eu_sq = 0.0, bnd_sq = 0.0;
  for (int c = 0; c < static_cast<int>(cells_.size()); ++c) {
    const auto& cc = cells_[c];
    const int* d = V.cell_dofs(c);
    for (std::size_t q = 0; q < cc.w.size(); ++q) {
      Vec2 uh = Vec2::Zero(), Bh = Vec2::Zero();
      double wu = 0.0, wB = 0.0;
      for (int i = 0; i < nl; ++i) {
        const Vec2 phi(cc.e[q].value(i, 0), cc.e[q].value(i, 1));
        uh += s.u[d[i]] * phi;
        Bh += s.B[d[i]] * phi;
        wu += s.u[d[i]] * cc.e[q].curl[i];
        wB += s.B[d[i]] * cc.e[q].curl[i];
      }
      const Vec2& x = cc.x[q];
      ne.eu_l2_sq += cc.w[q] * (sc.u.value(x, s.t) - uh).squaredNorm();
      ne.eB_l2_sq += cc.w[q] * (sc.B.value(x, s.t) - Bh).squaredNorm();
      curl_eu_sq += cc.w[q] * std::pow(sc.u.curl(x, s.t) - wu, 2);
      ne.curl_eB_sq += cc.w[q] * std::pow(sc.B.curl(x, s.t) - wB, 2);
    }
  }
  for (std::size_t b = 0; b < bface_ids_.size(); ++b) {
    const Face& F = mesh.faces[bface_ids_[b]];
    const auto& fc = bfaces_[b];
    const int* d = V.cell_dofs(F.cells[0]);
    for (std::size_t q = 0; q < fc.w.size(); ++q) {
      Vec2 uh = Vec2::Zero();
      for (int i = 0; i < nl; ++i) uh += s.u[d[i]] * Vec2(fc.e[q].value(i, 0), fc.e[q].value(i, 1));
      const double et = (sc.u.value(fc.x[q], s.t) - uh).dot(F.tangent);
      bnd_sq += fc.w[q] * et * et / F.length;
    }
  }
  ne.eu_sharp_sq = curl_eu_sq + bnd_sq;
  const StabWeights w = sys_.weights_of(s.u, s.B);
  ne.stab_sq = sys_.stab_seminorm_sq(s.u, s.B, w);
  return ne;
}

void ErrorAccumulator::add(const SystemState& s) { nodes_.push_back(node_errors(s)); }

Observer ErrorAccumulator::observer() {
  return [this](int, const SystemState& s, const MhdSystem&, int) { add(s); };
}

ErrorEntry ErrorAccumulator::report() const {
  ErrorEntry r;
  r.h = sys_.context().mesh().h_max();
  r.dofs = sys_.size();
  const double nu_s = sys_.config().params.nu_s, nu_m = sys_.config().params.nu_m;
  double mu = 0.0, mB = 0.0, is = 0.0, ic = 0.0, ist = 0.0;
  for (std::size_t n = 0; n < nodes_.size(); ++n) {
    mu = std::max(mu, nodes_[n].eu_l2_sq);
    mB = std::max(mB, nodes_[n].eB_l2_sq);
    if (n == 0) continue;
    const double dt = nodes_[n].t - nodes_[n - 1].t;
    is += 0.5 * dt * nu_s * (nodes_[n].eu_sharp_sq + nodes_[n - 1].eu_sharp_sq);
    ic += 0.5 * dt * nu_m * (nodes_[n].curl_eB_sq + nodes_[n - 1].curl_eB_sq);
    ist += 0.5 * dt * (nodes_[n].stab_sq + nodes_[n - 1].stab_sq);
  }
  r.err_u_linf_l2 = std::sqrt(mu);
  r.err_B_linf_l2 = std::sqrt(mB);
  r.err_u_sharp = std::sqrt(is);
  r.err_curlB = std::sqrt(ic);
  r.err_stab = std::sqrt(ist);
  r.err_total = std::sqrt(mu + mB + is + ic + ist);
  return r;
}

double eoc(double e1, double h1, double e2, double h2) {
  if (!(e1 > 0.0) || !(e2 > 0.0)) throw std::invalid_argument("eoc: errors must be positive");
  if (!(h1 > h2) || !(h2 > 0.0)) throw std::invalid_argument("eoc: requires h1 > h2 > 0");
  return std::log(e1 / e2) / std::log(h1 / h2);
}

Invariants monitor_invariants(const MhdSystem& sys, const SystemState& s) {
  const SpMat& M = sys.mass();
  Invariants iv;
  const Vector Mu = M * s.u, MB = M * s.B;
  const double uu = s.u.dot(Mu), BB = s.B.dot(MB);
  iv.energy = 0.5 * (uu + BB);
  iv.cross_helicity = s.u.dot(MB);
  const Vector bu = sys.grad_coupling().transpose() * s.u;
  const Vector bB = sys.grad_coupling().transpose() * s.B;
  const double nu = std::sqrt(std::max(uu, 0.0)), nB = std::sqrt(std::max(BB, 0.0));
  iv.div_u = bu.size() ? bu.cwiseAbs().maxCoeff() / (nu > 0.0 ? nu : 1.0) : 0.0;
  iv.div_B = bB.size() ? bB.cwiseAbs().maxCoeff() / (nB > 0.0 ? nB : 1.0) : 0.0;
  return iv;
}

}  // namespace curlmhd
