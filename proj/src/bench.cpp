#include "curlmhd/bench.hpp"

#include <atomic>
#include <cmath>
#include <iomanip>
#include <limits>
#include <mutex>
#include <numbers>
#include <ostream>
#include <thread>

namespace curlmhd {

namespace {

constexpr double kPi = std::numbers::pi;

// curl of the scalar u x B = u1 B2 - u2 B1: (dy s, -dx s).
Vec2 curl_cross(const Vec2& u, const Mat2& gu, const Vec2& B, const Mat2& gB) {
  Vec2 ds;
  for (int j = 0; j < 2; ++j) ds[j] = gu(0, j) * B.y() + u.x() * gB(1, j) - gu(1, j) * B.x() - u.y() * gB(0, j);
  return {ds.y(), -ds.x()};
}

}  // namespace

Scenario scenario_smooth(double nu_s, double nu_m) {
  Scenario sc;
  sc.name = "smooth";
  sc.domain = Domain::unit_square;
  sc.boundary = BoundaryMode::nitsche_dirichlet;
  sc.has_exact = true;
  sc.nu_s = nu_s;
  sc.nu_m = nu_m;
  sc.T = 1.0;
  sc.resolutions = {8, 16, 32};
  auto E = [](double t) { return std::exp(-0.5 * t); };
  auto s = [](double a) { return std::sin(kPi * a); };

  sc.u.value = [=](const Vec2& x, double t) {
    return Vec2(-kPi * E(t) * s(x.x()) * s(x.x()) * std::sin(2 * kPi * x.y()),
                kPi * E(t) * std::sin(2 * kPi * x.x()) * s(x.y()) * s(x.y()));
  };
  auto u_grad = [=](const Vec2& x, double t) {
    const double e = E(t), pi2 = kPi * kPi;
    Mat2 g;
    g(0, 0) = -pi2 * e * std::sin(2 * kPi * x.x()) * std::sin(2 * kPi * x.y());
    g(0, 1) = -2 * pi2 * e * s(x.x()) * s(x.x()) * std::cos(2 * kPi * x.y());
    g(1, 0) = 2 * pi2 * e * std::cos(2 * kPi * x.x()) * s(x.y()) * s(x.y());
    g(1, 1) = pi2 * e * std::sin(2 * kPi * x.x()) * std::sin(2 * kPi * x.y());
    return g;
  };
  sc.u.grad = u_grad;
  sc.u.curl = [=](const Vec2& x, double t) {
    const Mat2 g = u_grad(x, t);
    return g(1, 0) - g(0, 1);
  };
  auto u_curlcurl = [=](const Vec2& x, double t) {
    const double c = 2 * kPi * kPi * kPi * E(t);
    return Vec2(c * std::sin(2 * kPi * x.y()) * (2 * std::cos(2 * kPi * x.x()) - 1),
                -c * std::sin(2 * kPi * x.x()) * (2 * std::cos(2 * kPi * x.y()) - 1));
  };

  sc.B.value = [=](const Vec2& x, double t) {
    return Vec2(-kPi * E(t) * s(x.x()) * std::cos(kPi * x.y()), kPi * E(t) * std::cos(kPi * x.x()) * s(x.y()));
  };
  auto B_grad = [=](const Vec2& x, double t) {
    const double e = kPi * kPi * E(t);
    const double cx = std::cos(kPi * x.x()), cy = std::cos(kPi * x.y());
    Mat2 g;
    g(0, 0) = -e * cx * cy;
    g(0, 1) = e * s(x.x()) * s(x.y());
    g(1, 0) = -e * s(x.x()) * s(x.y());
    g(1, 1) = e * cx * cy;
    return g;
  };
  sc.B.grad = B_grad;
  sc.B.curl = [=](const Vec2& x, double t) { return -2 * kPi * kPi * E(t) * s(x.x()) * s(x.y()); };

  sc.p.value = [=](const Vec2& x, double t) { return -E(t) * std::sin(2 * kPi * x.x()) * std::cos(2 * kPi * x.y()); };
  sc.p.grad = [=](const Vec2& x, double t) {
    return Vec2(-2 * kPi * E(t) * std::cos(2 * kPi * x.x()) * std::cos(2 * kPi * x.y()),
                2 * kPi * E(t) * std::sin(2 * kPi * x.x()) * std::sin(2 * kPi * x.y()));
  };

  const VectorField u = sc.u, B = sc.B;
  const ScalarField p = sc.p;
  sc.f.value = [=](const Vec2& x, double t) {
    const Vec2 uv = u.value(x, t), Bv = B.value(x, t);
    return Vec2(-0.5 * uv + nu_s * u_curlcurl(x, t) + u.curl(x, t) * rot90(uv) - B.curl(x, t) * rot90(Bv) -
                p.grad(x, t));
  };
  sc.g.value = [=](const Vec2& x, double t) {
    const Vec2 uv = u.value(x, t), Bv = B.value(x, t);
    return Vec2(-0.5 * Bv + nu_m * 2 * kPi * kPi * Bv - curl_cross(uv, u.grad(x, t), Bv, B.grad(x, t)));
  };
  sc.u0.value = [=](const Vec2& x, double) { return u.value(x, 0.0); };
  sc.B0.value = [=](const Vec2& x, double) { return B.value(x, 0.0); };
  sc.u_tangent = [=](const Vec2& x, const Vec2& tf, double t) { return u.value(x, t).dot(tf); };
  return sc;
}

Scenario scenario_lshape(double nu_s, double nu_m) {
  Scenario sc;
  sc.name = "lshape";
  sc.domain = Domain::lshape;
  sc.boundary = BoundaryMode::inhomogeneous_nitsche;
  sc.has_exact = true;
  sc.nu_s = nu_s;
  sc.nu_m = nu_m;
  sc.T = 1.0;
  sc.resolutions = {8, 16, 32};
  sc.solenoidal_u0 = true;
  sc.solenoidal_B0 = false;  // B.n does not vanish on the boundary
  const Scenario sm = scenario_smooth(1.0, 1.0);
  const double a = -1.0 / (2.0 * kPi);
  const VectorField us = sm.u;
  sc.u.value = [=](const Vec2& x, double) { return Vec2(a * us.value(x, 0.0)); };
  sc.u.grad = [=](const Vec2& x, double) { return Mat2(a * us.grad(x, 0.0)); };
  sc.u.curl = [=](const Vec2& x, double) { return a * us.curl(x, 0.0); };
  auto u_curlcurl = [=](const Vec2& x) {
    const double c = a * 2 * kPi * kPi * kPi;
    return Vec2(c * std::sin(2 * kPi * x.y()) * (2 * std::cos(2 * kPi * x.x()) - 1),
                -c * std::sin(2 * kPi * x.x()) * (2 * std::cos(2 * kPi * x.y()) - 1));
  };

  sc.B.value = [](const Vec2& x, double) {
    const double r = x.norm();
    if (r == 0.0) return Vec2(0.0, 0.0);
    const double th = std::atan2(x.y(), x.x());
    const double c = (2.0 / 3.0) * std::pow(r, -1.0 / 3.0);
    return Vec2(-c * std::sin(th / 3.0), c * std::cos(th / 3.0));
  };
  sc.B.grad = [](const Vec2& x, double) {
    const double r = x.norm();
    Mat2 g = Mat2::Zero();
    if (r == 0.0) return g;
    const double th = std::atan2(x.y(), x.x());
    const double c = (2.0 / 9.0) * std::pow(r, -4.0 / 3.0);
    g(0, 0) = c * std::sin(4.0 * th / 3.0);
    g(0, 1) = -c * std::cos(4.0 * th / 3.0);
    g(1, 0) = -c * std::cos(4.0 * th / 3.0);
    g(1, 1) = -c * std::sin(4.0 * th / 3.0);
    return g;
  };
  sc.B.curl = [](const Vec2&, double) { return 0.0; };
  sc.p.value = [](const Vec2&, double) { return 0.0; };
  sc.p.grad = [](const Vec2&, double) { return Vec2(0.0, 0.0); };

  const VectorField u = sc.u, B = sc.B;
  sc.f.value = [=](const Vec2& x, double t) {
    const Vec2 uv = u.value(x, t);
    return Vec2(nu_s * u_curlcurl(x) + u.curl(x, t) * rot90(uv));
  };
  sc.g.value = [=](const Vec2& x, double t) {
    return Vec2(-curl_cross(u.value(x, t), u.grad(x, t), B.value(x, t), B.grad(x, t)));
  };
  sc.u0.value = [=](const Vec2& x, double) { return u.value(x, 0.0); };
  sc.B0.value = [=](const Vec2& x, double) { return B.value(x, 0.0); };
  sc.u_tangent = [=](const Vec2& x, const Vec2& tf, double t) { return u.value(x, t).dot(tf); };
  return sc;
}

Scenario scenario_field_loop() {
  Scenario sc;
  sc.name = "field_loop";
  sc.domain = Domain::periodic_square;
  sc.boundary = BoundaryMode::periodic;
  sc.nu_s = sc.nu_m = 1e-8;
  sc.T = 1.0;
  sc.dt = 1e-3;
  sc.n = 80;
  sc.style = MeshStyle::unstructured;
  sc.u0.value = [](const Vec2&, double) { return Vec2(1.0, 1.0); };
  sc.B0.value = [](const Vec2& x, double) {
    const Vec2 d = x - Vec2(0.5, 0.5);
    const double r = d.norm();
    if (r >= 0.3 || r == 0.0) return Vec2(0.0, 0.0);
    return Vec2(1e-3 * Vec2(-d.y() / r, d.x() / r));
  };
  return sc;
}

Scenario scenario_orszag_tang() {
  Scenario sc;
  sc.name = "orszag_tang";
  sc.domain = Domain::periodic_square;
  sc.boundary = BoundaryMode::periodic;
  sc.nu_s = sc.nu_m = 1e-14;
  sc.T = 0.4;
  sc.dt = 1e-2;
  sc.n = 50;
  sc.style = MeshStyle::unstructured;
  sc.u0.value = [](const Vec2& x, double) {
    return Vec2(-std::sin(2 * kPi * x.y()), std::sin(2 * kPi * x.x()));
  };
  sc.B0.value = [](const Vec2& x, double) {
    return Vec2(-std::sin(2 * kPi * x.y()), std::sin(4 * kPi * x.x()));
  };
  return sc;
}

Scenario make_scenario(const std::string& name, double nu_s, double nu_m) {
  Scenario sc;
  if (name == "smooth") {
    sc = scenario_smooth(nu_s > -1.0 ? nu_s : 1.0, nu_m > -1.0 ? nu_m : 1.0);
  } else if (name == "lshape") {
    sc = scenario_lshape(nu_s > -1.0 ? nu_s : 1e-8, nu_m > -1.0 ? nu_m : 1e-8);
  } else if (name == "field_loop") {
    sc = scenario_field_loop();
  } else if (name == "orszag_tang") {
    sc = scenario_orszag_tang();
  } else {
    throw ConfigError("scenario", "unknown scenario '" + name + "'");
  }
  if (!sc.has_exact) {
    if (nu_s > -1.0) sc.nu_s = nu_s;
    if (nu_m > -1.0) sc.nu_m = nu_m;
  }
  return sc;
}

Mesh scenario_mesh(const Scenario& sc, int n, std::uint64_t seed) {
  return generate_mesh(sc.domain, n, sc.style, seed);
}

TimeGrid scenario_time_grid(const Scenario& sc, const Mesh& mesh, int k) {
  if (sc.dt > 0.0) return TimeGrid::fixed(sc.T, sc.dt);
  return TimeGrid::from_mesh_size(sc.T, mesh.h_max(), k);
}

StudyRow run_error_case(const std::string& name, Variant method, int k, double nu_s, double nu_m, int n,
                        const StudyOptions& opts) {
  StudyRow row;
  row.scenario = name;
  row.method = method;
  row.k = k;
  row.nu_s = nu_s;
  row.nu_m = nu_m;
  row.n = n;
  row.eoc = std::numeric_limits<double>::quiet_NaN();
  Scenario sc = make_scenario(name, nu_s, nu_m);
  if (opts.T > 0.0) sc.T = opts.T;
  if (opts.dt > 0.0) sc.dt = opts.dt;
  if (opts.style) sc.style = *opts.style;
  auto mesh = std::make_shared<const Mesh>(scenario_mesh(sc, n, opts.seed));
  MethodConfig cfg;
  cfg.variant = method;
  cfg.k = k;
  cfg.params = opts.params;
  cfg.params.nu_s = nu_s;
  cfg.params.nu_m = nu_m;
  cfg.boundary = sc.boundary;
  MhdSystem sys(mesh, cfg, sc);
  const TimeGrid grid = scenario_time_grid(sc, *mesh, k);
  ErrorAccumulator acc(sys);
  run_transient(sys, grid, {acc.observer()}, opts.newton);
  row.steps = grid.steps;
  row.err = acc.report();
  return row;
}

std::vector<StudyRow> run_convergence_study(const std::string& scenario, const StudyOptions& opts) {
  struct Job {
    Variant m;
    int k;
    double ns, nm;
    int n;
  };
  std::vector<Job> jobs;
  for (Variant m : opts.methods)
    for (int k : opts.degrees)
      for (const auto& [ns, nm] : opts.nus)
        for (int n : opts.resolutions) jobs.push_back({m, k, ns, nm, n});
  std::vector<StudyRow> rows(jobs.size());
  std::atomic<std::size_t> next{0};
  std::mutex report;
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      const Job& j = jobs[i];
      try {
        rows[i] = run_error_case(scenario, j.m, j.k, j.ns, j.nm, j.n, opts);
      } catch (const std::exception& e) {
        rows[i].scenario = scenario;
        rows[i].method = j.m;
        rows[i].k = j.k;
        rows[i].nu_s = j.ns;
        rows[i].nu_m = j.nm;
        rows[i].n = j.n;
        rows[i].eoc = std::numeric_limits<double>::quiet_NaN();
        rows[i].failure = e.what();
      }
      if (opts.on_row) {
        std::lock_guard<std::mutex> lock(report);
        opts.on_row(rows[i]);
      }
    }
  };
  const int nthreads = std::max(1, std::min<int>(opts.threads, static_cast<int>(jobs.size())));
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto &a = rows[i - 1], &b = rows[i];
    if (a.method == b.method && a.k == b.k && a.nu_s == b.nu_s && a.nu_m == b.nu_m && a.failure.empty() &&
        b.failure.empty() && a.err.h > b.err.h && a.err.err_total > 0.0 && b.err.err_total > 0.0)
      rows[i].eoc = eoc(a.err.err_total, a.err.h, b.err.err_total, b.err.h);
  }
  return rows;
}

void write_study_csv(const std::vector<StudyRow>& rows, std::ostream& os) {
  os << "method,k,nu_s,nu_m,n,h,dofs,err_u_linf_l2,err_B_linf_l2,err_u_sharp,err_curlB,err_stab,err_total,eoc\n";
  os << std::setprecision(10);
  for (const auto& r : rows) {
    os << to_string(r.method) << ',' << r.k << ',' << r.nu_s << ',' << r.nu_m << ',' << r.n << ',';
    if (!r.failure.empty()) {
      os << "nan,nan,nan,nan,nan,nan,nan,nan,nan\n";
      continue;
    }
    os << r.err.h << ',' << r.err.dofs << ',' << r.err.err_u_linf_l2 << ',' << r.err.err_B_linf_l2 << ','
       << r.err.err_u_sharp << ',' << r.err.err_curlB << ',' << r.err.err_stab << ',' << r.err.err_total << ',';
    if (std::isnan(r.eoc))
      os << "nan";
    else
      os << r.eoc;
    os << '\n';
  }
}

}  // namespace curlmhd
