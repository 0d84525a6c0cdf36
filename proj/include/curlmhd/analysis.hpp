#pragma once

#include "curlmhd/system.hpp"
#include "curlmhd/timestep.hpp"

#include <vector>

namespace curlmhd {

/// One row of a convergence table. Error components are square roots of the
/// corresponding parts of the total norm, so err_total^2 is the sum of their squares.
struct ErrorEntry {
  double h = 0.0;
  int dofs = 0;
  double err_u_linf_l2 = 0.0;  // max_n ||u - u_h||
  double err_B_linf_l2 = 0.0;  // max_n ||B - B_h||
  double err_u_sharp = 0.0;    // (int nu_S ||u - u_h||_#^2)^1/2
  double err_curlB = 0.0;      // (int nu_M ||curl(B - B_h)||^2)^1/2
  double err_stab = 0.0;       // (int |(u - u_h, B - B_h)|_stab^2)^1/2
  double err_total = 0.0;
};

/// Accumulates the time-discrete total error norm: maxima over the time nodes and
/// trapezoidal time integrals. The exact fields of the scenario are continuous and the
/// exact velocity vanishes on the boundary, so the stabilization seminorm of the error
/// reduces to that of the discrete fields, with weights from the discrete fields.
class ErrorAccumulator {
 public:
  explicit ErrorAccumulator(const MhdSystem& sys, int quad_degree = -1);

  struct NodeErrors {
    double t = 0.0;
    double eu_l2_sq = 0.0, eB_l2_sq = 0.0, eu_sharp_sq = 0.0, curl_eB_sq = 0.0, stab_sq = 0.0;
  };
  NodeErrors node_errors(const SystemState& s) const;
  void add(const SystemState& s);
  Observer observer();
  ErrorEntry report() const;
  const std::vector<NodeErrors>& nodes() const { return nodes_; }

 private:
  const MhdSystem& sys_;
  int quad_degree_;
  struct Cache {
    std::vector<double> w;
    std::vector<Vec2> x;
    std::vector<PointEval> e;
  };
  std::vector<Cache> cells_;
  std::vector<Cache> bfaces_;
  std::vector<int> bface_ids_;
  std::vector<NodeErrors> nodes_;
};

/// log(e1/e2) / log(h1/h2); requires h1 > h2 > 0 and positive errors.
double eoc(double e1, double h1, double e2, double h2);

struct Invariants {
  double energy = 0.0;          // (||u||^2 + ||B||^2) / 2
  double cross_helicity = 0.0;  // (u, B)
  double div_u = 0.0;           // max_j |b(u, q_j)| / ||u||
  double div_B = 0.0;
};

Invariants monitor_invariants(const MhdSystem& sys, const SystemState& s);

}  // namespace curlmhd
