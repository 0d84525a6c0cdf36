#include "curlmhd/timestep.hpp"

#include <cmath>
#include <sstream>

namespace curlmhd {

TimeGrid TimeGrid::fixed(double T, double dt) {
  if (!(T > 0.0) || !(dt > 0.0)) throw ConfigError("time", "T and dt must be positive");
  TimeGrid g;
  g.T = T;
  g.steps = std::max(1, static_cast<int>(std::ceil(T / dt - 1e-9)));
  g.dt = T / g.steps;
  return g;
}

TimeGrid TimeGrid::from_mesh_size(double T, double h, int k) {
  return fixed(T, 0.1 * std::pow(h, 0.5 * (k + 1)));
}

NewtonResult newton_solve(MhdSystem& sys, const SystemState& old, double dt, const NewtonOptions& opts, LUSolver* lu) {
  LUSolver local;
  LUSolver& solver = lu ? *lu : local;
  sys.begin_step(old, dt);
  Vector x = sys.pack(old);
  StabWeights w = sys.weights(x);
  Vector R = sys.residual(x, w);
  NewtonResult res;
  double rn = R.norm();
  res.history.push_back(rn);
  const double tol = std::max(opts.tol_rel * rn, opts.tol_abs);
  bool fresh = false;
  bool need_factor = !opts.reuse_jacobian || !solver.factorized();
  while (rn > tol) {
    if (res.iterations >= opts.max_iter) {
      std::ostringstream os;
      os << "Newton did not converge in " << opts.max_iter << " iterations; residual history:";
      for (double h : res.history) os << ' ' << h;
      throw SolverError(os.str());
    }
    if (need_factor) {
      solver.factorize(sys.jacobian(x, w));
      ++res.factorizations;
      fresh = true;
      need_factor = !opts.reuse_jacobian;
    } else {
      fresh = false;
    }
    const Vector dx = solver.solve(-R);
    double step = 1.0;
    Vector xn = x + dx;
    StabWeights wn = sys.weights(xn);
    Vector Rn = sys.residual(xn, wn);
    if (opts.damping) {
      for (int h = 0; h < 8 && Rn.norm() >= rn; ++h) {
        step *= 0.5;
        xn = x + step * dx;
        wn = sys.weights(xn);
        Rn = sys.residual(xn, wn);
      }
    }
    ++res.iterations;
    const double rnew = Rn.norm();
    if (opts.reuse_jacobian && rnew > 0.25 * rn) need_factor = true;
    if (!std::isfinite(rnew)) throw SolverError("Newton produced a non-finite residual");
    if (opts.reuse_jacobian && !fresh && rnew >= rn) {
      // Stale factors diverged: retry this iteration with a fresh Jacobian.
      need_factor = true;
      res.history.push_back(rnew);
      continue;
    }
    x = std::move(xn);
    w = std::move(wn);
    R = std::move(Rn);
    rn = rnew;
    res.history.push_back(rn);
  }
  res.state = sys.unpack(x, old.t + dt);
  sys.normalize_mean(res.state);
  return res;
}

TransientResult run_transient(MhdSystem& sys, const TimeGrid& grid, const std::vector<Observer>& observers,
                              const NewtonOptions& opts) {
  return run_transient(sys, sys.initial_state(), grid, observers, opts);
}

TransientResult run_transient(MhdSystem& sys, const SystemState& initial, const TimeGrid& grid,
                              const std::vector<Observer>& observers, const NewtonOptions& opts) {
  TransientResult out;
  SystemState s = initial;
  for (const auto& ob : observers) ob(0, s, sys, 0);
  LUSolver lu;
  for (int n = 1; n <= grid.steps; ++n) {
    NewtonResult r;
    try {
      r = newton_solve(sys, s, grid.dt, opts, &lu);
    } catch (const SolverError& e) {
      throw SolverError("step " + std::to_string(n) + " (t = " + std::to_string(s.t + grid.dt) + "): " + e.what());
    }
    s = std::move(r.state);
    if (n == grid.steps) s.t = grid.T;
    out.newton_iterations.push_back(r.iterations);
    for (const auto& ob : observers) ob(n, s, sys, r.iterations);
  }
  out.final_state = std::move(s);
  return out;
}

}  // namespace curlmhd
