#pragma once

#include "curlmhd/system.hpp"

#include <functional>
#include <vector>

namespace curlmhd {

/// Uniform time grid with steps * dt = T.
struct TimeGrid {
  double T = 1.0;
  double dt = 0.1;
  int steps = 10;

  /// Rounds T/dt up to an integer number of steps and shrinks dt to hit T exactly.
  static TimeGrid fixed(double T, double dt);
  /// dt = h^((k+1)/2) / 10, adjusted as in fixed().
  static TimeGrid from_mesh_size(double T, double h, int k);
};

struct NewtonOptions {
  double tol_rel = 1e-10;
  double tol_abs = 1e-12;
  int max_iter = 30;
  bool damping = false;         // halve the update up to 8 times if the residual grows
  bool reuse_jacobian = true;  // keep the factorization while the contraction is fast
};

struct NewtonResult {
  SystemState state;
  int iterations = 0;             // linear solves
  int factorizations = 0;
  std::vector<double> history;    // residual norms, starting with the initial guess
};

/// Solves one implicit-midpoint step starting from `old`. Stabilization weights are
/// refreshed from the current iterate before every residual and Jacobian evaluation.
/// `lu` may carry the symbolic analysis (and, with reuse_jacobian, the factors) across steps.
NewtonResult newton_solve(MhdSystem& sys, const SystemState& old, double dt, const NewtonOptions& opts = {},
                          LUSolver* lu = nullptr);

/// Observer called after the initial state (step 0, iterations 0) and after every step.
using Observer = std::function<void(int step, const SystemState& state, const MhdSystem& sys, int newton_iterations)>;

struct TransientResult {
  SystemState final_state;
  std::vector<int> newton_iterations;  // per step
};

TransientResult run_transient(MhdSystem& sys, const TimeGrid& grid, const std::vector<Observer>& observers,
                              const NewtonOptions& opts = {});
TransientResult run_transient(MhdSystem& sys, const SystemState& initial, const TimeGrid& grid,
                              const std::vector<Observer>& observers, const NewtonOptions& opts = {});

}  // namespace curlmhd
