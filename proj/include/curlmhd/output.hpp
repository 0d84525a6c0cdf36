#pragma once

#include "curlmhd/analysis.hpp"
#include "curlmhd/system.hpp"

#include <iosfwd>
#include <vector>

namespace curlmhd {

struct SeriesRow {
  int step = 0;
  double t = 0.0;
  Invariants inv;
  int newton_iters = 0;
};

/// Header: step,t,energy,cross_helicity,div_u,div_B,newton_iters
void write_series_csv(const std::vector<SeriesRow>& rows, std::ostream& os);

/// H(curl) field sampled at mesh vertices, averaged over the cells sharing the vertex
/// (periodic copies of a vertex share one value).
std::vector<Vec2> vertex_average(const FESpace& space, const Vector& coeffs);
/// Lagrange field at mesh vertices.
std::vector<double> vertex_values_h1(const FESpace& space, const Vector& coeffs);

/// Legacy ASCII VTK unstructured grid with point data u, B, |B|, p.
void write_vtk(const MhdSystem& sys, const SystemState& s, std::ostream& os);

struct Polyline {
  double level = 0.0;
  std::vector<Vec2> points;
};

/// Marching triangles on the piecewise-linear interpolant of vertex values; segments are
/// chained across shared faces (not across periodic seams).
std::vector<Polyline> contour_lines(const Mesh& mesh, const std::vector<double>& vertex_values,
                                    const std::vector<double>& levels);

/// 17 equispaced levels from 2.5e-5 to 1.325e-3, used for the magnetic loop.
std::vector<double> loop_contour_levels();

/// Text format: "polyline <level> <npoints>" followed by one "x y" line per point.
void write_contours(const std::vector<Polyline>& lines, std::ostream& os);

}  // namespace curlmhd
