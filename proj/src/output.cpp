#include "curlmhd/output.hpp"

#include <algorithm>
#include <iomanip>
#include <map>
#include <ostream>

namespace curlmhd {

void write_series_csv(const std::vector<SeriesRow>& rows, std::ostream& os) {
  os << "step,t,energy,cross_helicity,div_u,div_B,newton_iters\n";
  os << std::setprecision(16);
  for (const auto& r : rows)
    os << r.step << ',' << r.t << ',' << r.inv.energy << ',' << r.inv.cross_helicity << ',' << r.inv.div_u << ','
       << r.inv.div_B << ',' << r.newton_iters << '\n';
}

std::vector<Vec2> vertex_average(const FESpace& space, const Vector& coeffs) {
  const Mesh& mesh = space.mesh();
  std::vector<Vec2> sum(mesh.num_vertex_classes, Vec2::Zero());
  std::vector<int> count(mesh.num_vertex_classes, 0);
  for (int c = 0; c < static_cast<int>(mesh.cells.size()); ++c)
    for (int v : mesh.cells[c].v) {
      // Sample slightly inside the cell to stay on the correct side of the vertex.
      const Vec2 x = mesh.vertices[v] + 1e-12 * (mesh.centroid(c) - mesh.vertices[v]);
      sum[mesh.vertex_class[v]] += space.field_value(coeffs, c, x);
      ++count[mesh.vertex_class[v]];
    }
  std::vector<Vec2> out(mesh.vertices.size());
  for (std::size_t v = 0; v < out.size(); ++v) {
    const int k = mesh.vertex_class[v];
    out[v] = count[k] ? Vec2(sum[k] / count[k]) : Vec2::Zero();
  }
  return out;
}

std::vector<double> vertex_values_h1(const FESpace& space, const Vector& coeffs) {
  const Mesh& mesh = space.mesh();
  std::vector<double> out(mesh.vertices.size(), 0.0);
  for (std::size_t v = 0; v < out.size(); ++v) out[v] = coeffs[mesh.vertex_class[v]];
  return out;
}

void write_vtk(const MhdSystem& sys, const SystemState& s, std::ostream& os) {
  const Mesh& mesh = sys.context().mesh();
  const auto u = vertex_average(sys.context().hcurl(), s.u);
  const auto B = vertex_average(sys.context().hcurl(), s.B);
  const auto p = vertex_values_h1(sys.context().h1(), s.p);
  os << "# vtk DataFile Version 3.0\ncurlmhd t=" << s.t << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  os << std::setprecision(12);
  os << "POINTS " << mesh.vertices.size() << " double\n";
  for (const auto& x : mesh.vertices) os << x.x() << ' ' << x.y() << " 0\n";
  os << "CELLS " << mesh.cells.size() << ' ' << 4 * mesh.cells.size() << '\n';
  for (const auto& t : mesh.cells) os << "3 " << t.v[0] << ' ' << t.v[1] << ' ' << t.v[2] << '\n';
  os << "CELL_TYPES " << mesh.cells.size() << '\n';
  for (std::size_t c = 0; c < mesh.cells.size(); ++c) os << "5\n";
  os << "POINT_DATA " << mesh.vertices.size() << '\n';
  os << "VECTORS u double\n";
  for (const auto& v : u) os << v.x() << ' ' << v.y() << " 0\n";
  os << "VECTORS B double\n";
  for (const auto& v : B) os << v.x() << ' ' << v.y() << " 0\n";
  os << "SCALARS B_magnitude double 1\nLOOKUP_TABLE default\n";
  for (const auto& v : B) os << v.norm() << '\n';
  os << "SCALARS p double 1\nLOOKUP_TABLE default\n";
  for (double v : p) os << v << '\n';
}

std::vector<Polyline> contour_lines(const Mesh& mesh, const std::vector<double>& val, const std::vector<double>& levels) {
  if (val.size() != mesh.vertices.size()) throw std::invalid_argument("contour_lines: one value per vertex required");
  std::vector<Polyline> out;
  struct Seg {
    int face[2];
    Vec2 p[2];
    bool used = false;
  };
  for (double L : levels) {
    std::vector<Seg> segs;
    for (const auto& t : mesh.cells) {
      Seg s;
      int m = 0;
      for (int l = 0; l < 3 && m < 2; ++l) {
        const int a = t.v[l], b = t.v[(l + 1) % 3];
        const bool above_a = val[a] >= L, above_b = val[b] >= L;
        if (above_a == above_b) continue;
        const double r = (L - val[a]) / (val[b] - val[a]);
        s.face[m] = t.faces[l];
        s.p[m] = mesh.vertices[a] + r * (mesh.vertices[b] - mesh.vertices[a]);
        ++m;
      }
      if (m == 2) segs.push_back(s);
    }
    std::multimap<int, int> by_face;
    for (int i = 0; i < static_cast<int>(segs.size()); ++i)
      for (int e = 0; e < 2; ++e)
        if (mesh.faces[segs[i].face[e]].shift.squaredNorm() == 0.0) by_face.emplace(segs[i].face[e], i);
    auto partner = [&](int seg, int face) {
      auto range = by_face.equal_range(face);
      for (auto it = range.first; it != range.second; ++it)
        if (it->second != seg && !segs[it->second].used) return it->second;
      return -1;
    };
    for (int i = 0; i < static_cast<int>(segs.size()); ++i) {
      if (segs[i].used) continue;
      segs[i].used = true;
      std::vector<Vec2> fwd{segs[i].p[0], segs[i].p[1]};
      // Extend from the end through face[1], then from the start through face[0].
      for (int dir = 0; dir < 2; ++dir) {
        int face = segs[i].face[dir == 0 ? 1 : 0];
        std::vector<Vec2> ext;
        for (int j = partner(i, face); j >= 0; j = partner(j, face)) {
          segs[j].used = true;
          const int enter = segs[j].face[0] == face ? 0 : 1;
          ext.push_back(segs[j].p[1 - enter]);
          face = segs[j].face[1 - enter];
        }
        if (dir == 0) {
          fwd.insert(fwd.end(), ext.begin(), ext.end());
        } else {
          std::reverse(ext.begin(), ext.end());
          fwd.insert(fwd.begin(), ext.begin(), ext.end());
        }
      }
      out.push_back({L, std::move(fwd)});
    }
  }
  return out;
}

std::vector<double> loop_contour_levels() {
  std::vector<double> lv;
  for (int i = 0; i < 17; ++i) lv.push_back(2.5e-5 + i * (1.325e-3 - 2.5e-5) / 16.0);
  return lv;
}

void write_contours(const std::vector<Polyline>& lines, std::ostream& os) {
  os << "# curlmhd contours v1: 'polyline <level> <npoints>' then one 'x y' per line\n";
  os << std::setprecision(12);
  for (const auto& pl : lines) {
    os << "polyline " << pl.level << ' ' << pl.points.size() << '\n';
    for (const auto& p : pl.points) os << p.x() << ' ' << p.y() << '\n';
  }
}

}  // namespace curlmhd
