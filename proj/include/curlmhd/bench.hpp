#pragma once

#include "curlmhd/analysis.hpp"
#include "curlmhd/scenario.hpp"
#include "curlmhd/system.hpp"
#include "curlmhd/timestep.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace curlmhd {

/// Manufactured smooth solution on the unit square; f and g follow from the strong equations.
Scenario scenario_smooth(double nu_s = 1.0, double nu_m = 1.0);
/// Stationary solution on (-1,1)^2 minus [-1,0]^2 with a singular magnetic field.
Scenario scenario_lshape(double nu_s = 1e-8, double nu_m = 1e-8);
/// Magnetic loop advected by u = (1,1) on the periodic unit square.
Scenario scenario_field_loop();
/// Orszag-Tang vortex on the periodic unit square.
Scenario scenario_orszag_tang();

/// Scenario by name: smooth, lshape, field_loop, orszag_tang. Diffusivities <= -1 keep defaults.
Scenario make_scenario(const std::string& name, double nu_s = -1.0, double nu_m = -1.0);

/// Mesh for a scenario at resolution n.
Mesh scenario_mesh(const Scenario& sc, int n, std::uint64_t seed = 0);

/// Time grid of a scenario on a mesh: the scenario dt if set, else h^((k+1)/2)/10.
TimeGrid scenario_time_grid(const Scenario& sc, const Mesh& mesh, int k);

struct StudyRow {
  std::string scenario;
  Variant method = Variant::method1;
  int k = 1;
  double nu_s = 1.0, nu_m = 1.0;
  int n = 0;
  int steps = 0;
  ErrorEntry err;
  double eoc = 0.0;  // NaN on the coarsest row of a series
  std::string failure;  // non-empty if the run failed
};

struct StudyOptions {
  std::vector<Variant> methods{Variant::method1};
  std::vector<int> degrees{1};
  std::vector<std::pair<double, double>> nus{{1.0, 1.0}};
  std::vector<int> resolutions{8, 16, 32};
  NewtonOptions newton;
  double T = -1.0;   // > 0 overrides the scenario final time
  double dt = -1.0;  // > 0 overrides the time-step rule
  std::optional<MeshStyle> style;  // overrides the scenario mesh style
  FormParams params;  // stabilization parameters (nu fields unused)
  std::uint64_t seed = 0;
  int threads = 1;
  std::function<void(const StudyRow&)> on_row;
};

/// Runs every (method, k, nu, n) combination and fills EOCs along n. Failures are recorded
/// per row and the remaining rows continue.
std::vector<StudyRow> run_convergence_study(const std::string& scenario, const StudyOptions& opts);

/// Single transient run with error accumulation (scenario must have an exact solution).
StudyRow run_error_case(const std::string& scenario, Variant method, int k, double nu_s, double nu_m, int n,
                        const StudyOptions& opts);

/// CSV header: method,k,nu_s,nu_m,n,h,dofs,err_u_linf_l2,err_B_linf_l2,err_u_sharp,err_curlB,err_stab,err_total,eoc
void write_study_csv(const std::vector<StudyRow>& rows, std::ostream& os);

}  // namespace curlmhd
