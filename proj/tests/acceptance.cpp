#include "curlmhd/bench.hpp"
#include "curlmhd/output.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iomanip>
#include <iostream>
#include <limits>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

using namespace curlmhd;

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

Vector random_vector(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Vector v(n);
  for (auto& x : v) x = nd(rng);
  return v;
}

std::shared_ptr<const Mesh> make_mesh(Domain d, int n, MeshStyle s = MeshStyle::structured, std::uint64_t seed = 1) {
  return std::make_shared<const Mesh>(generate_mesh(d, n, s, seed));
}

MethodConfig method(Variant v, const Scenario& sc, int k = 1) {
  MethodConfig cfg;
  cfg.variant = v;
  cfg.k = k;
  cfg.params.nu_s = sc.nu_s;
  cfg.params.nu_m = sc.nu_m;
  cfg.boundary = sc.boundary;
  return cfg;
}

Outcome commuting_diagram() {
  std::vector<ScalarField> phis(3);
  phis[0].value = [](const Vec2& x, double) { return std::sin(pi * x.x()) * std::cos(2 * pi * x.y()); };
  phis[0].grad = [](const Vec2& x, double) {
    return Vec2(pi * std::cos(pi * x.x()) * std::cos(2 * pi * x.y()),
                -2 * pi * std::sin(pi * x.x()) * std::sin(2 * pi * x.y()));
  };
  phis[1].value = [](const Vec2& x, double) { return std::exp(x.x() * x.y()); };
  phis[1].grad = [](const Vec2& x, double) -> Vec2 { return Vec2(x.y(), x.x()) * std::exp(x.x() * x.y()); };
  phis[2].value = [](const Vec2& x, double) { return std::pow(x.x(), 3) - 2 * x.x() * x.y() * x.y() + x.y(); };
  phis[2].grad = [](const Vec2& x, double) {
    return Vec2(3 * x.x() * x.x() - 2 * x.y() * x.y(), -4 * x.x() * x.y() + 1);
  };
  const std::vector<std::shared_ptr<const Mesh>> meshes{make_mesh(Domain::unit_square, 6),
                                                        make_mesh(Domain::unit_square, 7, MeshStyle::unstructured, 3),
                                                        make_mesh(Domain::lshape, 4, MeshStyle::unstructured, 5)};
  double worst = 0.0;
  for (const auto& m : meshes)
    for (int k : {1, 2}) {
      const FESpace V = FESpace::build(m, SpaceKind::hcurl_nedelec2, k);
      const FESpace Q = FESpace::build(m, SpaceKind::h1_lagrange, k + 1);
      const SpMat G = discrete_gradient(V, Q);
      for (const auto& phi : phis) {
        const Vector d = canonical_interpolate_hcurl(V, gradient_field(phi), 0.0) - G * nodal_interpolate_h1(Q, phi, 0.0);
        worst = std::max(worst, d.cwiseAbs().maxCoeff());
      }
    }
  return {worst <= 1e-11, "max |I_curl grad(phi) - grad I_grad(phi)| = " + fmt(worst) + " (3 potentials, 3 meshes, k=1,2)"};
}

Outcome pressure_robustness() {
  Scenario sc;
  sc.name = "gradient_forcing";
  ScalarField phi;
  phi.value = [](const Vec2& x, double) { return 25.0 * std::sin(pi * x.x()) * std::cos(pi * x.y()) + x.x() * x.x(); };
  phi.grad = [](const Vec2& x, double) {
    return Vec2(25.0 * pi * std::cos(pi * x.x()) * std::cos(pi * x.y()) + 2 * x.x(),
                -25.0 * pi * std::sin(pi * x.x()) * std::sin(pi * x.y()));
  };
  sc.f = gradient_field(phi);
  sc.nu_s = 1e-6;
  sc.nu_m = 1.0;
  MhdSystem sys(make_mesh(Domain::unit_square, 8), method(Variant::method1, sc), sc);
  double umax = 0.0;
  run_transient(sys, TimeGrid::fixed(0.1, 0.01), {[&](int, const SystemState& s, const MhdSystem& sy, int) {
                  umax = std::max(umax, std::sqrt(s.u.dot(sy.mass() * s.u)));
                }});
  return {umax <= 1e-9, "||u_h||_{Linf L2} = " + fmt(umax) + " (f = grad phi, method1, k=1, n=8, 10 steps)"};
}

Outcome conservation() {
  Scenario sc = scenario_orszag_tang();
  sc.nu_s = sc.nu_m = 0.0;
  MhdSystem sys(make_mesh(sc.domain, 16, sc.style), method(Variant::unstabilized, sc), sc);
  double e0 = 0.0, c0 = 0.0, de = 0.0, dc = 0.0;
  run_transient(sys, TimeGrid::fixed(0.4, 0.01), {[&](int n, const SystemState& s, const MhdSystem& sy, int) {
                  const Invariants iv = monitor_invariants(sy, s);
                  if (n == 0) e0 = iv.energy, c0 = iv.cross_helicity;
                  de = std::max(de, std::abs(iv.energy / e0 - 1.0));
                  dc = std::max(dc, std::abs(iv.cross_helicity / c0 - 1.0));
                }});
  return {de <= 1e-9 && dc <= 1e-9, "max relative drift: energy " + fmt(de) + ", cross-helicity " + fmt(dc) +
                                        " (Orszag-Tang, n=16, 40 steps of 0.01, nu=0)"};
}

double max_field_magnitude(const FESpace& V, const Vector& B) {
  const Mesh& m = V.mesh();
  double mx = 0.0;
  for (int c = 0; c < static_cast<int>(m.cells.size()); ++c) {
    const auto& t = m.cells[c];
    std::vector<Vec2> pts{m.centroid(c)};
    for (int l = 0; l < 3; ++l) {
      const Vec2 a = m.vertices[t.v[l]], b = m.vertices[t.v[(l + 1) % 3]];
      pts.push_back(a);
      pts.push_back(0.5 * (a + b));
    }
    for (const auto& x : pts) mx = std::max(mx, V.field_value(B, c, x).norm());
  }
  return mx;
}

struct LoopRun {
  double max_div = 0.0;
  double overshoot = 0.0;
};

LoopRun field_loop(Variant v) {
  const Scenario sc = scenario_field_loop();
  MhdSystem sys(make_mesh(sc.domain, 20, sc.style, 7), method(v, sc), sc);
  LoopRun r;
  const auto res = run_transient(sys, TimeGrid::fixed(1.0, 0.02), {[&](int, const SystemState& s, const MhdSystem& sy, int) {
                                   r.max_div = std::max(r.max_div, monitor_invariants(sy, s).div_B);
                                 }});
  r.overshoot = max_field_magnitude(sys.context().hcurl(), res.final_state.B) - 1e-3;
  return r;
}

struct Series {
  std::vector<StudyRow> rows;
  std::string describe() const {
    std::ostringstream os;
    for (const auto& r : rows) {
      os << " n=" << r.n << ":" << (r.failure.empty() ? fmt(r.err.err_total) : "failed");
      if (std::isfinite(r.eoc)) os << "(eoc " << std::fixed << std::setprecision(2) << r.eoc << std::defaultfloat << ")";
    }
    return os.str();
  }
  bool ok() const {
    for (const auto& r : rows)
      if (!r.failure.empty()) return false;
    return !rows.empty();
  }
  double final_eoc() const { return rows.empty() ? std::nan("") : rows.back().eoc; }
};

Series study(const std::string& scenario, Variant v, double nu_s, double nu_m, const std::vector<int>& ns) {
  StudyOptions o;
  o.methods = {v};
  o.nus = {{nu_s, nu_m}};
  o.resolutions = ns;
  o.on_row = [](const StudyRow& r) {
    std::cout << "    " << r.scenario << " " << to_string(r.method) << " nu=(" << r.nu_s << "," << r.nu_m << ") n=" << r.n
              << " steps=" << r.steps << " dofs=" << r.err.dofs << " err_total=" << fmt(r.err.err_total)
              << (r.failure.empty() ? "" : " FAILED: " + r.failure) << std::endl;
  };
  return {run_convergence_study(scenario, o)};
}

Outcome rate_criterion(Variant v, const std::vector<std::pair<double, double>>& nus, double lo, double hi) {
  Outcome o{true, ""};
  for (const auto& [ns, nm] : nus) {
    const Series s = study("smooth", v, ns, nm, {8, 16, 32});
    const double e = s.final_eoc();
    const bool ok = s.ok() && e >= lo && e <= hi;
    o.pass = o.pass && ok;
    o.detail += "nu_S=" + fmt(ns) + " nu_M=" + fmt(nm) + ":" + s.describe() + "; ";
  }
  return o;
}

Outcome lshape_contrast() {
  const Series m3 = study("lshape", Variant::method3, 1e-8, 1e-8, {8, 16, 32});
  const Series m2 = study("lshape", Variant::method2, 1e-8, 1e-8, {8, 16, 32});
  bool dec3 = m3.ok(), dec2 = m2.ok();
  for (std::size_t i = 1; i < m3.rows.size(); ++i) dec3 = dec3 && m3.rows[i].err.err_total < m3.rows[i - 1].err.err_total;
  for (std::size_t i = 1; i < m2.rows.size(); ++i) dec2 = dec2 && m2.rows[i].err.err_total < m2.rows[i - 1].err.err_total;
  return {m3.ok() && m2.ok() && dec3 && !dec2,
          "method3" + m3.describe() + (dec3 ? " (decreasing)" : " (not decreasing)") + "; method2" + m2.describe() +
              (dec2 ? " (decreasing)" : " (not monotone)")};
}

Outcome jacobian_check() {
  std::mt19937_64 rng(2024);
  double worst = 0.0;
  for (Variant v : {Variant::unstabilized, Variant::method1, Variant::method2, Variant::method3})
    for (const Scenario& sc : {scenario_smooth(1e-2, 1e-3), scenario_orszag_tang()}) {
      MhdSystem sys(make_mesh(sc.domain, 4), method(v, sc), sc);
      sys.begin_step(sys.unpack(random_vector(sys.size(), rng), 0.0), 0.01);
      const Vector x = random_vector(sys.size(), rng), d = random_vector(sys.size(), rng);
      const StabWeights w = sys.weights(x);
      const Vector Jd = sys.jacobian(x, w) * d;
      const double eps = 1e-5;
      const Vector fd = (sys.residual(x + eps * d, w) - sys.residual(x - eps * d, w)) / (2 * eps);
      worst = std::max(worst, (Jd - fd).norm() / Jd.norm());
    }
  return {worst <= 1e-6, "max relative |J d - FD| = " + fmt(worst) + " (4 variants, Dirichlet and periodic, n=4, k=1)"};
}

Outcome coercivity() {
  std::mt19937_64 rng(99);
  double worst = std::numeric_limits<double>::infinity();
  for (int n : {4, 8}) {
    FormParams p;
    p.alpha = 10.0;
    FormContext ctx(make_mesh(Domain::unit_square, n, MeshStyle::unstructured, 11), 1, p);
    const SpMat M = assemble_bilinear(ctx, BilinearKind::mass);
    const SpMat AD = assemble_bilinear(ctx, BilinearKind::a_curlcurl) + assemble_bilinear(ctx, BilinearKind::d_nitsche);
    const LerayProjector P(M, discrete_gradient(ctx.hcurl(), ctx.h1()));
    for (int r = 0; r < 20; ++r) {
      const Vector v = P.apply(random_vector(ctx.hcurl().num_dofs(), rng));
      worst = std::min(worst, v.dot(AD * v) / sharp_norm_sq(ctx, v));
    }
  }
  return {worst >= 0.05, "min (a+d)(v,v)/||v||_#^2 = " + fmt(worst) + " over 20 kernel vectors on n=4 and n=8"};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::vector<int> only;
  app.add_option("--only", only, "criterion numbers to run (default: all)");
  CLI11_PARSE(app, argc, argv);
  const std::set<int> chosen(only.begin(), only.end());
  auto want = [&](int i) { return chosen.empty() || chosen.count(i); };

  int failures = 0;
  auto report = [&](int id, const std::string& name, const std::function<Outcome()>& run) {
    if (!want(id)) return;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << id << "] " << name << ": " << o.detail << " [" << std::fixed
              << std::setprecision(1) << sec << " s]" << std::defaultfloat << std::endl;
  };

  LoopRun loop1, loop3;
  bool loop_done = false;
  auto loops = [&] {
    if (!loop_done) loop1 = field_loop(Variant::method1), loop3 = field_loop(Variant::method3), loop_done = true;
  };

  report(1, "commuting diagram", commuting_diagram);
  report(2, "pressure robustness", pressure_robustness);
  report(3, "energy and cross-helicity conservation", conservation);
  report(4, "discrete solenoidality on the field loop", [&] {
    loops();
    return Outcome{loop1.max_div <= 1e-8 && loop3.max_div <= 1e-8,
                   "max |b(B_h, psi)|/||B_h||: method1 " + fmt(loop1.max_div) + ", method3 " + fmt(loop3.max_div) +
                       " (n=20, 50 steps)"};
  });
  report(5, "convergence rate, method1", [] { return rate_criterion(Variant::method1, {{1.0, 1.0}, {1e-8, 1.0}}, 0.85, 1.4); });
  report(6, "convergence rate, method2", [] { return rate_criterion(Variant::method2, {{1.0, 1.0}, {1e-8, 1e-8}}, 0.85, 1.4); });
  report(7, "convergence rate, method3", [] { return rate_criterion(Variant::method3, {{1e-8, 1e-8}}, 1.35, 1e9); });
  report(8, "L-shape robustness contrast", lshape_contrast);
  report(9, "field-loop overshoot", [&] {
    loops();
    return Outcome{loop3.overshoot <= 0.5 * loop1.overshoot && loop1.overshoot > 0.0,
                   "max|B_h| - 1e-3 at T=1: method1 " + fmt(loop1.overshoot) + ", method3 " + fmt(loop3.overshoot)};
  });
  report(10, "Jacobian correctness", jacobian_check);
  report(11, "coercivity on the discrete kernel", coercivity);

  std::cout << (failures == 0 ? "ALL CRITERIA PASSED" : std::to_string(failures) + " CRITERIA FAILED") << std::endl;
  return failures == 0 ? 0 : 1;
}
