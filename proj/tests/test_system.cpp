#include "curlmhd/analysis.hpp"
#include "curlmhd/bench.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace curlmhd;

namespace {

constexpr double pi = std::numbers::pi;

Vector random_vector(int n, std::uint64_t seed, double scale = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, scale);
  Vector v(n);
  for (auto& x : v) x = nd(rng);
  return v;
}

MhdSystem make_system(const Scenario& sc, Variant v, int n, int k = 1, MeshStyle style = MeshStyle::structured) {
  auto mesh = std::make_shared<const Mesh>(generate_mesh(sc.domain, n, style, 1));
  MethodConfig cfg;
  cfg.variant = v;
  cfg.k = k;
  cfg.params.nu_s = sc.nu_s;
  cfg.params.nu_m = sc.nu_m;
  cfg.boundary = sc.boundary;
  return MhdSystem(mesh, cfg, sc);
}

const Variant kAll[] = {Variant::unstabilized, Variant::method1, Variant::method2, Variant::method3};

// Central differences of the exact fields, independent of the analytic derivatives in the scenario.
struct FD {
  const Scenario& sc;
  double h = 1e-4;
  Vec2 u(const Vec2& x, double t) const { return sc.u.value(x, t); }
  Vec2 B(const Vec2& x, double t) const { return sc.B.value(x, t); }
  double curl(bool mag, const Vec2& x, double t) const {
    auto f = [&](const Vec2& y) { return mag ? B(y, t) : u(y, t); };
    const Vec2 ex(h, 0.0), ey(0.0, h);
    return (f(x + ex).y() - f(x - ex).y() - f(x + ey).x() + f(x - ey).x()) / (2 * h);
  }
  Vec2 curl_of(const std::function<double(const Vec2&)>& s, const Vec2& x) const {
    const Vec2 ex(h, 0.0), ey(0.0, h);
    return {(s(x + ey) - s(x - ey)) / (2 * h), -(s(x + ex) - s(x - ex)) / (2 * h)};
  }
};

}  // namespace

TEST(Scenario, ManufacturedSourcesMatchStrongEquations) {
  for (const Scenario& sc : {scenario_smooth(0.7, 0.3), scenario_lshape(0.2, 0.4)}) {
    FD fd{sc};
    const double t = 0.3, ht = 1e-5;
    for (const Vec2& x : {Vec2(0.31, 0.62), Vec2(0.77, 0.18), Vec2(-0.4, 0.55)}) {
      if (sc.domain == Domain::unit_square && x.x() < 0.0) continue;
      const Vec2 dtu = (fd.u(x, t + ht) - fd.u(x, t - ht)) / (2 * ht);
      const Vec2 dtB = (fd.B(x, t + ht) - fd.B(x, t - ht)) / (2 * ht);
      const Vec2 ccu = fd.curl_of([&](const Vec2& y) { return fd.curl(false, y, t); }, x);
      const Vec2 ccB = fd.curl_of([&](const Vec2& y) { return fd.curl(true, y, t); }, x);
      const Vec2 f = dtu + sc.nu_s * ccu + fd.curl(false, x, t) * rot90(fd.u(x, t)) -
                     fd.curl(true, x, t) * rot90(fd.B(x, t)) - sc.p.grad(x, t);
      const Vec2 g = dtB + sc.nu_m * ccB -
                     fd.curl_of([&](const Vec2& y) { return cross(fd.u(y, t), fd.B(y, t)); }, x);
      EXPECT_LT((f - sc.f.value(x, t)).norm(), 1e-4 * (1.0 + f.norm())) << sc.name;
      EXPECT_LT((g - sc.g.value(x, t)).norm(), 1e-4 * (1.0 + g.norm())) << sc.name;
      EXPECT_NEAR(fd.curl(false, x, t), sc.u.curl(x, t), 1e-5 * (1.0 + std::abs(sc.u.curl(x, t))));
      EXPECT_NEAR(fd.curl(true, x, t), sc.B.curl(x, t), 1e-5 * (1.0 + std::abs(sc.B.curl(x, t))));
      // solenoidal exact fields
      const Vec2 ex(1e-4, 0.0), ey(0.0, 1e-4);
      EXPECT_NEAR((fd.u(x + ex, t).x() - fd.u(x - ex, t).x() + fd.u(x + ey, t).y() - fd.u(x - ey, t).y()) / 2e-4, 0.0, 1e-5);
      EXPECT_NEAR((fd.B(x + ex, t).x() - fd.B(x - ex, t).x() + fd.B(x + ey, t).y() - fd.B(x - ey, t).y()) / 2e-4, 0.0, 1e-5);
    }
  }
}

TEST(System, PackUnpackRoundTrip) {
  MhdSystem sys = make_system(scenario_smooth(), Variant::method2, 3);
  const Vector x = random_vector(sys.size(), 4);
  EXPECT_EQ((sys.pack(sys.unpack(x, 0.5)) - x).norm(), 0.0);
  EXPECT_EQ(sys.size(), 2 * sys.context().hcurl().num_dofs() + 2 * sys.context().h1().num_dofs() + 2);
  MhdSystem s1 = make_system(scenario_smooth(), Variant::method1, 3);
  EXPECT_EQ(s1.size(), 2 * s1.context().hcurl().num_dofs() + s1.context().h1().num_dofs() + 1);
}

TEST(System, InitialDataIsDiscretelySolenoidal) {
  for (const Scenario& sc : {scenario_smooth(), scenario_orszag_tang(), scenario_field_loop()}) {
    MhdSystem sys = make_system(sc, Variant::method1, 6);
    const SystemState s = sys.initial_state();
    const Invariants iv = monitor_invariants(sys, s);
    EXPECT_LT(iv.div_u, 1e-11) << sc.name;
    EXPECT_LT(iv.div_B, 1e-11) << sc.name;
  }
}

TEST(System, JacobianMatchesFiniteDifferences) {
  for (int k : {1, 2})
    for (Variant v : kAll)
      for (const Scenario& sc : {scenario_smooth(0.5, 0.2), scenario_lshape(0.3, 0.1)}) {
        MhdSystem sys = make_system(sc, v, k == 1 ? 4 : 2, k);
        SystemState old = sys.unpack(random_vector(sys.size(), 1), 0.0);
        sys.begin_step(old, 0.05);
        const Vector x = random_vector(sys.size(), 2);
        const Vector d = random_vector(sys.size(), 3);
        const StabWeights w = sys.weights(x);
        const Vector Jd = sys.jacobian(x, w) * d;
        const double eps = 1e-5;
        const Vector fd = (sys.residual(x + eps * d, w) - sys.residual(x - eps * d, w)) / (2 * eps);
        EXPECT_LT((Jd - fd).norm(), 1e-6 * Jd.norm()) << to_string(v) << " k=" << k << " " << sc.name;
      }
}

TEST(System, PressureRobustnessUnderGradientForcing) {
  Scenario sc;
  sc.name = "gradient_forcing";
  ScalarField phi;
  phi.value = [](const Vec2& x, double) { return std::sin(pi * x.x()) * std::exp(x.y()); };
  phi.grad = [](const Vec2& x, double) {
    return Vec2(pi * std::cos(pi * x.x()) * std::exp(x.y()), std::sin(pi * x.x()) * std::exp(x.y()));
  };
  sc.f = gradient_field(phi);
  sc.nu_s = 1e-3;
  sc.nu_m = 1.0;
  MhdSystem sys = make_system(sc, Variant::method1, 4, 1, MeshStyle::unstructured);
  double umax = 0.0;
  run_transient(sys, TimeGrid::fixed(0.3, 0.1), {[&](int, const SystemState& s, const MhdSystem& sy, int) {
                  umax = std::max(umax, std::sqrt(s.u.dot(sy.mass() * s.u)));
                }});
  EXPECT_LT(umax, 1e-10);
}

TEST(System, UnstabilizedMidpointConservesInvariants) {
  Scenario sc = scenario_orszag_tang();
  sc.nu_s = sc.nu_m = 0.0;
  MhdSystem sys = make_system(sc, Variant::unstabilized, 5);
  std::vector<Invariants> inv;
  run_transient(sys, TimeGrid::fixed(0.04, 0.01), {[&](int, const SystemState& s, const MhdSystem& sy, int) {
                  inv.push_back(monitor_invariants(sy, s));
                }});
  ASSERT_EQ(inv.size(), 5u);
  for (const auto& i : inv) {
    EXPECT_NEAR(i.energy / inv[0].energy, 1.0, 1e-10);
    EXPECT_NEAR(i.cross_helicity / inv[0].cross_helicity, 1.0, 1e-10);
    EXPECT_LT(i.div_u, 1e-10);
    EXPECT_LT(i.div_B, 1e-10);
  }
}

TEST(System, StabilizationDissipatesEnergy) {
  Scenario sc = scenario_orszag_tang();
  sc.nu_s = sc.nu_m = 0.0;
  for (Variant v : {Variant::method1, Variant::method3}) {
    MhdSystem sys = make_system(sc, v, 5);
    std::vector<double> e;
    run_transient(sys, TimeGrid::fixed(0.03, 0.01), {[&](int, const SystemState& s, const MhdSystem& sy, int) {
                    e.push_back(monitor_invariants(sy, s).energy);
                  }});
    for (std::size_t i = 1; i < e.size(); ++i) EXPECT_LT(e[i], e[i - 1]) << to_string(v);
  }
}

TEST(System, Method2EnforcesDivergenceReference) {
  MhdSystem sys = make_system(scenario_lshape(), Variant::method2, 2);
  SystemState s = sys.initial_state();
  const NewtonResult r = newton_solve(sys, s, 0.05);
  const Vector res = sys.grad_coupling().transpose() * r.state.B - sys.divergence_reference();
  EXPECT_LT(res.cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_NEAR(sys.mean_row().dot(r.state.p), 0.0, 1e-12);
  EXPECT_NEAR(sys.mean_row().dot(r.state.phi), 0.0, 1e-12);
}

TEST(System, NewtonReportsResidualHistory) {
  MhdSystem sys = make_system(scenario_smooth(), Variant::method1, 3);
  NewtonOptions o;
  o.max_iter = 1;
  o.tol_rel = 1e-30;
  o.tol_abs = 0.0;
  try {
    newton_solve(sys, sys.initial_state(), 0.1, o);
    FAIL() << "expected SolverError";
  } catch (const SolverError& e) {
    EXPECT_NE(std::string(e.what()).find("residual history"), std::string::npos);
  }
}

TEST(System, ExactNewtonAndChordAgree) {
  MhdSystem sys = make_system(scenario_smooth(1e-2, 1e-2), Variant::method3, 4);
  NewtonOptions exact, chord;
  exact.reuse_jacobian = false;
  chord.reuse_jacobian = true;
  const auto a = run_transient(sys, TimeGrid::fixed(0.05, 0.0125), {}, exact).final_state;
  const auto b = run_transient(sys, TimeGrid::fixed(0.05, 0.0125), {}, chord).final_state;
  EXPECT_LT((a.u - b.u).norm(), 1e-8 * a.u.norm());
  EXPECT_LT((a.B - b.B).norm(), 1e-8 * a.B.norm());
}

TEST(System, InvalidConfigurationThrows) {
  Scenario sc = scenario_smooth();
  auto mesh = std::make_shared<const Mesh>(generate_mesh(Domain::unit_square, 2));
  MethodConfig cfg;
  cfg.k = 3;
  EXPECT_THROW(MhdSystem(mesh, cfg, sc), ConfigError);
  EXPECT_THROW(variant_from_string("method9"), ConfigError);
}

TEST(TimeGridTest, StepCountsCoverFinalTime) {
  const TimeGrid a = TimeGrid::fixed(1.0, 0.3);
  EXPECT_EQ(a.steps, 4);
  EXPECT_NEAR(a.dt * a.steps, 1.0, 1e-15);
  const TimeGrid b = TimeGrid::from_mesh_size(1.0, 0.25, 1);
  EXPECT_EQ(b.steps, 40);
  const TimeGrid c = TimeGrid::from_mesh_size(1.0, 0.25, 2);
  EXPECT_NEAR(c.dt, 0.0125, 1e-15);
}
