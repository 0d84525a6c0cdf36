#include "curlmhd/analysis.hpp"
#include "curlmhd/bench.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace curlmhd;

TEST(Analysis, EocExamples) {
  EXPECT_NEAR(eoc(1.0, 0.1, 0.25, 0.05), 2.0, 1e-14);
  EXPECT_NEAR(eoc(0.2, 0.5, 0.1, 0.25), 1.0, 1e-14);
  EXPECT_NEAR(eoc(1.0, 1.0, 1.0 / std::pow(2.0, 1.5), 0.5), 1.5, 1e-14);
  EXPECT_THROW(eoc(0.0, 0.1, 0.1, 0.05), std::invalid_argument);
  EXPECT_THROW(eoc(1.0, 0.05, 0.5, 0.1), std::invalid_argument);
}

TEST(Analysis, RequiresExactSolution) {
  const Scenario sc = scenario_orszag_tang();
  auto mesh = std::make_shared<const Mesh>(generate_mesh(sc.domain, 4));
  MethodConfig cfg;
  cfg.boundary = sc.boundary;
  const MhdSystem sys(mesh, cfg, sc);
  EXPECT_THROW(ErrorAccumulator acc(sys), std::invalid_argument);
}

TEST(Analysis, ProjectionErrorsConverge) {
  // Errors of the L2 projection of the exact fields at t = 0 shrink at the interpolation rate.
  double prev_u = 0.0, prev_c = 0.0;
  for (int n : {4, 8, 16}) {
    const Scenario sc = scenario_smooth();
    auto mesh = std::make_shared<const Mesh>(generate_mesh(sc.domain, n));
    MethodConfig cfg;
    cfg.variant = Variant::unstabilized;
    cfg.boundary = sc.boundary;
    const MhdSystem sys(mesh, cfg, sc);
    const ErrorAccumulator acc(sys);
    const auto e = acc.node_errors(sys.initial_state());
    const double eu = std::sqrt(e.eu_l2_sq), ec = std::sqrt(e.curl_eB_sq);
    if (prev_u > 0.0) {
      EXPECT_NEAR(std::log2(prev_u / eu), 2.0, 0.3);
      EXPECT_NEAR(std::log2(prev_c / ec), 1.0, 0.2);
    }
    prev_u = eu;
    prev_c = ec;
  }
}

TEST(Analysis, TotalNormCombinesComponents) {
  const Scenario sc = scenario_smooth(0.5, 0.25);
  auto mesh = std::make_shared<const Mesh>(generate_mesh(sc.domain, 3));
  MethodConfig cfg;
  cfg.variant = Variant::method1;
  cfg.params.nu_s = 0.5;
  cfg.params.nu_m = 0.25;
  cfg.boundary = sc.boundary;
  MhdSystem sys(mesh, cfg, sc);
  ErrorAccumulator acc(sys);
  run_transient(sys, TimeGrid::fixed(0.1, 0.05), {acc.observer()});
  const ErrorEntry e = acc.report();
  ASSERT_EQ(acc.nodes().size(), 3u);
  double mu = 0.0;
  for (const auto& n : acc.nodes()) mu = std::max(mu, n.eu_l2_sq);
  EXPECT_NEAR(e.err_u_linf_l2, std::sqrt(mu), 1e-15);
  const auto& N = acc.nodes();
  const double sharp = 0.5 * 0.05 * 0.5 * (N[0].eu_sharp_sq + 2 * N[1].eu_sharp_sq + N[2].eu_sharp_sq);
  EXPECT_NEAR(e.err_u_sharp, std::sqrt(sharp), 1e-12);
  EXPECT_NEAR(e.err_total * e.err_total,
              e.err_u_linf_l2 * e.err_u_linf_l2 + e.err_B_linf_l2 * e.err_B_linf_l2 + e.err_u_sharp * e.err_u_sharp +
                  e.err_curlB * e.err_curlB + e.err_stab * e.err_stab,
              1e-12);
  EXPECT_GT(e.err_stab, 0.0);
  EXPECT_EQ(e.dofs, sys.size());
}

TEST(Bench, StudyComputesEocAndCsv) {
  StudyOptions o;
  o.methods = {Variant::method1};
  o.nus = {{1.0, 1.0}};
  o.resolutions = {2, 4};
  o.T = 0.05;
  const auto rows = run_convergence_study("smooth", o);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_TRUE(std::isnan(rows[0].eoc));
  EXPECT_TRUE(std::isfinite(rows[1].eoc));
  EXPECT_NEAR(rows[1].eoc, eoc(rows[0].err.err_total, rows[0].err.h, rows[1].err.err_total, rows[1].err.h), 1e-14);
  std::ostringstream os;
  write_study_csv(rows, os);
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')),
            "method,k,nu_s,nu_m,n,h,dofs,err_u_linf_l2,err_B_linf_l2,err_u_sharp,err_curlB,err_stab,err_total,eoc");
}

TEST(Bench, StudyRecordsFailuresAndContinues) {
  StudyOptions o;
  o.methods = {Variant::method1};
  o.resolutions = {2, 3};
  o.T = 0.05;
  o.newton.max_iter = 1;
  o.newton.tol_rel = 1e-30;
  o.newton.tol_abs = 0.0;
  const auto rows = run_convergence_study("smooth", o);
  ASSERT_EQ(rows.size(), 2u);
  for (const auto& r : rows) EXPECT_FALSE(r.failure.empty());
}

TEST(Bench, StudyHonoursMeshStyleAndParams) {
  StudyOptions o;
  o.T = 0.02;
  const StudyRow a = run_error_case("smooth", Variant::method1, 1, 1.0, 1.0, 4, o);
  o.style = MeshStyle::unstructured;
  o.seed = 5;
  const StudyRow b = run_error_case("smooth", Variant::method1, 1, 1.0, 1.0, 4, o);
  EXPECT_NE(a.err.h, b.err.h);
  o.params.mu_s = 10.0;
  const StudyRow c = run_error_case("smooth", Variant::method1, 1, 1.0, 1.0, 4, o);
  EXPECT_NE(b.err.err_stab, c.err.err_stab);
}

TEST(Bench, UnknownScenarioThrows) { EXPECT_THROW(make_scenario("vortex"), ConfigError); }

TEST(Bench, FieldLoopInitialMagnitude) {
  const Scenario sc = scenario_field_loop();
  EXPECT_NEAR(sc.B0.value(Vec2(0.6, 0.5), 0.0).norm(), 1e-3, 1e-18);
  EXPECT_EQ(sc.B0.value(Vec2(0.9, 0.5), 0.0).norm(), 0.0);
}
