#include "curlmhd/bench.hpp"
#include "curlmhd/config.hpp"
#include "curlmhd/output.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <numbers>
#include <random>

using namespace curlmhd;

namespace {

struct Overrides {
  std::string config, out;
  int threads = 0;
  long long seed = -1;
};

RunConfig load(const Overrides& o) {
  if (o.config.empty()) throw ConfigError("--config", "a config file is required");
  RunConfig c = parse_config_file(o.config);
  if (!o.out.empty()) c.out_dir = o.out;
  if (o.threads > 0) c.threads = o.threads;
  if (o.seed >= 0) c.seed = static_cast<std::uint64_t>(o.seed);
  return c;
}

std::ofstream open_out(const std::string& dir, const std::string& name) {
  std::filesystem::create_directories(dir);
  const std::string path = (std::filesystem::path(dir) / name).string();
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  std::cout << "  wrote " << path << "\n";
  return f;
}

int cmd_run(const Overrides& o) {
  const RunConfig c = load(o);
  for (Variant method : c.methods) {
    const double ns = c.nus.empty() ? -1.0 : c.nus.front().first;
    const double nm = c.nus.empty() ? -1.0 : c.nus.front().second;
    Scenario sc = make_scenario(c.scenario, ns, nm);
    if (c.T > 0.0) sc.T = c.T;
    if (c.dt > 0.0) sc.dt = c.dt;
    if (c.style) sc.style = *c.style;
    const int n = c.resolutions.empty() ? sc.n : c.resolutions.front();
    const int k = c.degrees.front();
    auto mesh = std::make_shared<const Mesh>(scenario_mesh(sc, n, c.seed));
    MethodConfig cfg;
    cfg.variant = method;
    cfg.k = k;
    cfg.params = c.params;
    cfg.params.nu_s = sc.nu_s;
    cfg.params.nu_m = sc.nu_m;
    cfg.boundary = sc.boundary;
    MhdSystem sys(mesh, cfg, sc);
    const TimeGrid grid = scenario_time_grid(sc, *mesh, k);
    std::cout << c.scenario << " / " << to_string(method) << ": k=" << k << " n=" << n << " unknowns=" << sys.size()
              << " steps=" << grid.steps << " dt=" << grid.dt << "\n";
    std::vector<SeriesRow> series;
    std::vector<Observer> obs{[&](int step, const SystemState& s, const MhdSystem& sy, int it) {
      series.push_back({step, s.t, monitor_invariants(sy, s), it});
    }};
    std::unique_ptr<ErrorAccumulator> acc;
    if (sc.has_exact) {
      acc = std::make_unique<ErrorAccumulator>(sys);
      obs.push_back(acc->observer());
    }
    const TransientResult res = run_transient(sys, grid, obs, c.newton);
    const std::string stem = c.scenario + "_" + to_string(method);
    if (c.series) {
      auto f = open_out(c.out_dir, stem + "_series.csv");
      write_series_csv(series, f);
    }
    if (c.vtk) {
      auto f = open_out(c.out_dir, stem + "_final.vtk");
      write_vtk(sys, res.final_state, f);
    }
    if (c.contours) {
      const auto B = vertex_average(sys.context().hcurl(), res.final_state.B);
      std::vector<double> mag(B.size());
      for (std::size_t i = 0; i < B.size(); ++i) mag[i] = B[i].norm();
      auto f = open_out(c.out_dir, stem + "_contours.txt");
      write_contours(contour_lines(*mesh, mag, loop_contour_levels()), f);
    }
    const auto& first = series.front().inv;
    const auto& last = series.back().inv;
    std::cout << "  energy " << first.energy << " -> " << last.energy << ", cross helicity " << first.cross_helicity
              << " -> " << last.cross_helicity << "\n";
    if (acc) {
      const ErrorEntry e = acc->report();
      std::cout << "  err_total " << e.err_total << " (u " << e.err_u_linf_l2 << ", B " << e.err_B_linf_l2 << ")\n";
    }
  }
  return 0;
}

int cmd_study(const Overrides& o) {
  const RunConfig c = load(o);
  const Scenario sc = make_scenario(c.scenario);
  if (!sc.has_exact) throw ConfigError("scenario", "study requires a scenario with an exact solution");
  StudyOptions so;
  so.methods = c.methods;
  so.degrees = c.degrees;
  so.nus = c.nus.empty() ? std::vector<std::pair<double, double>>{{sc.nu_s, sc.nu_m}} : c.nus;
  so.resolutions = c.resolutions.empty() ? sc.resolutions : c.resolutions;
  so.newton = c.newton;
  so.T = c.T;
  so.dt = c.dt;
  so.seed = c.seed;
  so.style = c.style;
  so.params = c.params;
  so.threads = c.threads;
  so.on_row = [](const StudyRow& r) {
    std::cout << "  " << to_string(r.method) << " k=" << r.k << " nu=(" << r.nu_s << "," << r.nu_m << ") n=" << r.n;
    if (r.failure.empty())
      std::cout << " err_total=" << r.err.err_total << "\n";
    else
      std::cout << " FAILED: " << r.failure << "\n";
  };
  const auto rows = run_convergence_study(c.scenario, so);
  std::cout << "method,k,nu_s,nu_m,n,h,err_total,eoc\n";
  for (const auto& r : rows)
    std::cout << to_string(r.method) << ',' << r.k << ',' << r.nu_s << ',' << r.nu_m << ',' << r.n << ',' << r.err.h
              << ',' << r.err.err_total << ',' << r.eoc << "\n";
  if (c.csv) {
    auto f = open_out(c.out_dir, c.scenario + "_study.csv");
    write_study_csv(rows, f);
  }
  for (const auto& r : rows)
    if (!r.failure.empty()) return 2;
  return 0;
}

std::string sci(double v) {
  std::ostringstream os;
  os << std::scientific << std::setprecision(3) << v;
  return os.str();
}

bool report(const std::string& name, bool ok, const std::string& detail) {
  std::cout << (ok ? "PASS " : "FAIL ") << name << "  " << detail << "\n";
  return ok;
}

int cmd_verify() {
  bool all = true;
  constexpr double pi = std::numbers::pi;
  // Commuting interpolants.
  {
    double worst = 0.0;
    for (int k : {1, 2}) {
      auto mesh = std::make_shared<const Mesh>(generate_mesh(Domain::unit_square, 4, MeshStyle::unstructured, 3));
      const FESpace V = FESpace::build(mesh, SpaceKind::hcurl_nedelec2, k);
      const FESpace Q = FESpace::build(mesh, SpaceKind::h1_lagrange, k + 1);
      ScalarField phi;
      phi.value = [&](const Vec2& x, double) { return std::sin(pi * x.x()) * std::cos(pi * x.y()); };
      phi.grad = [&](const Vec2& x, double) {
        return Vec2(pi * std::cos(pi * x.x()) * std::cos(pi * x.y()), -pi * std::sin(pi * x.x()) * std::sin(pi * x.y()));
      };
      const Vector a = canonical_interpolate_hcurl(V, gradient_field(phi), 0.0);
      const Vector b = discrete_gradient(V, Q) * nodal_interpolate_h1(Q, phi, 0.0);
      worst = std::max(worst, (a - b).cwiseAbs().maxCoeff());
    }
    all &= report("commuting_interpolants", worst <= 1e-11, "max coefficient difference " + sci(worst));
  }
  // Skew-symmetry of the convection matrix.
  {
    auto mesh = std::make_shared<const Mesh>(generate_mesh(Domain::unit_square, 4));
    FormContext ctx(mesh, 1);
    std::mt19937_64 rng(7);
    std::normal_distribution<double> nd;
    Vector w(ctx.hcurl().num_dofs());
    for (auto& x : w) x = nd(rng);
    const SpMat C = assemble_convection(ctx, w, ConvectionPattern::c_w_uv);
    const double skew = SpMat(C + SpMat(C.transpose())).coeffs().cwiseAbs().maxCoeff();
    all &= report("convection_skew_symmetry", skew <= 1e-12, "max |C + C^T| " + sci(skew));
  }
  // Conservation smoke test.
  {
    Scenario sc = scenario_orszag_tang();
    auto mesh = std::make_shared<const Mesh>(generate_mesh(Domain::periodic_square, 6));
    MethodConfig cfg;
    cfg.variant = Variant::unstabilized;
    cfg.params.nu_s = cfg.params.nu_m = 0.0;
    cfg.boundary = BoundaryMode::periodic;
    MhdSystem sys(mesh, cfg, sc);
    std::vector<Invariants> inv;
    run_transient(sys, TimeGrid::fixed(0.05, 0.01), {[&](int, const SystemState& s, const MhdSystem& sy, int) {
                    inv.push_back(monitor_invariants(sy, s));
                  }});
    double de = 0.0, dc = 0.0;
    for (const auto& i : inv) {
      de = std::max(de, std::abs(i.energy / inv.front().energy - 1.0));
      dc = std::max(dc, std::abs(i.cross_helicity / inv.front().cross_helicity - 1.0));
    }
    all &= report("midpoint_conservation", de <= 1e-9 && dc <= 1e-9,
                  "energy drift " + sci(de) + ", cross-helicity drift " + sci(dc));
  }
  return all ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"curlmhd: H(curl) finite elements for incompressible MHD"};
  app.require_subcommand(1);
  Overrides o;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "JSON run description")->required();
    sub->add_option("--out", o.out, "output directory (overrides output.dir)");
    sub->add_option("--threads", o.threads, "worker threads for study rows");
    sub->add_option("--seed", o.seed, "seed for unstructured meshes");
  };
  auto* run = app.add_subcommand("run", "run one transient per listed method");
  add_common(run);
  auto* study = app.add_subcommand("study", "convergence table over resolutions");
  add_common(study);
  auto* verify = app.add_subcommand("verify", "built-in invariant checks");
  verify->add_option("--threads", o.threads, "ignored");
  verify->add_option("--seed", o.seed, "ignored");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }
  try {
    if (*run) return cmd_run(o);
    if (*study) return cmd_study(o);
    if (*verify) return cmd_verify();
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
