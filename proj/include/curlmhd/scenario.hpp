#pragma once

#include "curlmhd/interpolate.hpp"
#include "curlmhd/mesh.hpp"

#include <functional>
#include <string>
#include <vector>

namespace curlmhd {

enum class BoundaryMode { nitsche_dirichlet, periodic, inhomogeneous_nitsche };

/// Closed-form data of one benchmark: domain, exact fields (optional), initial data,
/// sources and the default run parameters.
struct Scenario {
  std::string name;
  Domain domain = Domain::unit_square;
  BoundaryMode boundary = BoundaryMode::nitsche_dirichlet;

  bool has_exact = false;
  VectorField u, B;  // exact fields (value, curl, grad)
  ScalarField p;

  VectorField u0, B0;  // initial data, evaluated at t = 0
  VectorField f;       // momentum source; empty means zero
  VectorField g;       // induction source; empty means zero
  // Tangential velocity data u.t on the boundary (inhomogeneous Nitsche); empty means zero.
  std::function<double(const Vec2& x, const Vec2& tangent, double t)> u_tangent;

  // Remove the discrete-gradient part after projecting the initial data
  // (for solenoidal data with vanishing normal trace).
  bool solenoidal_u0 = true;
  bool solenoidal_B0 = true;

  double nu_s = 1.0;
  double nu_m = 1.0;
  double T = 1.0;
  double dt = 0.0;  // <= 0: dt = h^((k+1)/2) / 10
  int n = 8;        // default resolution
  MeshStyle style = MeshStyle::structured;
  std::vector<int> resolutions;
};

}  // namespace curlmhd
