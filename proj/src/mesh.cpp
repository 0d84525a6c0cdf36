#include "curlmhd/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <ostream>
#include <random>
#include <set>
#include <unordered_map>

namespace curlmhd {

namespace {

double signed_area(const Vec2& a, const Vec2& b, const Vec2& c) {
  return 0.5 * cross(b - a, c - a);
}

double triangle_min_angle(const Vec2& a, const Vec2& b, const Vec2& c) {
  auto angle = [](const Vec2& p, const Vec2& q, const Vec2& r) {
    const Vec2 u = q - p, w = r - p;
    return std::atan2(std::abs(cross(u, w)), u.dot(w));
  };
  return std::min({angle(a, b, c), angle(b, c, a), angle(c, a, b)}) * 180.0 / std::numbers::pi;
}

// Positive when d lies strictly inside the circumcircle of the counter-clockwise triangle abc.
double incircle(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
  const Vec2 ad = a - d, bd = b - d, cd = c - d;
  const double a2 = ad.squaredNorm(), b2 = bd.squaredNorm(), c2 = cd.squaredNorm();
  return ad.x() * (bd.y() * c2 - b2 * cd.y()) - ad.y() * (bd.x() * c2 - b2 * cd.x()) +
         a2 * (bd.x() * cd.y() - bd.y() * cd.x());
}

std::uint64_t edge_key(int a, int b) {
  const auto lo = static_cast<std::uint64_t>(std::min(a, b));
  const auto hi = static_cast<std::uint64_t>(std::max(a, b));
  return (lo << 32) | hi;
}

struct Grid {
  std::vector<Vec2> vertices;
  std::vector<Triangle> cells;
  Vec2 box_min, box_max;
};

Grid structured_grid(Domain domain, int n) {
  Grid g;
  int nx = n;
  double x0 = 0.0, h = 1.0 / n;
  if (domain == Domain::lshape) {
    nx = 2 * n;
    x0 = -1.0;
  }
  auto removed = [&](int i, int j) { return domain == Domain::lshape && i < n && j < n; };

  std::vector<int> id((nx + 1) * (nx + 1), -1);
  auto vid = [&](int i, int j) -> int {
    int& slot = id[j * (nx + 1) + i];
    if (slot < 0) {
      slot = static_cast<int>(g.vertices.size());
      g.vertices.emplace_back(x0 + i * h, x0 + j * h);
    }
    return slot;
  };
  // Vertices are numbered row by row so that ids increase with (j, i).
  for (int j = 0; j <= nx; ++j)
    for (int i = 0; i <= nx; ++i)
      if (!removed(i, j)) vid(i, j);
  for (int j = 0; j < nx; ++j) {
    for (int i = 0; i < nx; ++i) {
      if (removed(i, j)) continue;
      const int a = vid(i, j), b = vid(i + 1, j), c = vid(i + 1, j + 1), d = vid(i, j + 1);
      Triangle t1, t2;
      t1.v = {a, b, c};
      t2.v = {a, c, d};
      g.cells.push_back(t1);
      g.cells.push_back(t2);
    }
  }
  g.box_min = Vec2(x0, x0);
  g.box_max = Vec2(x0 + nx * h, x0 + nx * h);
  return g;
}

std::vector<bool> boundary_vertices(const Grid& g) {
  std::unordered_map<std::uint64_t, int> count;
  for (const auto& t : g.cells)
    for (int l = 0; l < 3; ++l) ++count[edge_key(t.v[l], t.v[(l + 1) % 3])];
  std::vector<bool> on_boundary(g.vertices.size(), false);
  for (const auto& [key, c] : count) {
    if (c == 1) {
      on_boundary[key >> 32] = true;
      on_boundary[key & 0xffffffffu] = true;
    }
  }
  return on_boundary;
}

// Lawson edge flips until every interior edge is locally Delaunay.
void delaunay_flips(const std::vector<Vec2>& x, std::vector<Triangle>& cells) {
  for (int pass = 0; pass < 200; ++pass) {
    std::unordered_map<std::uint64_t, std::vector<std::pair<int, int>>> adj;
    for (int c = 0; c < static_cast<int>(cells.size()); ++c)
      for (int l = 0; l < 3; ++l) adj[edge_key(cells[c].v[l], cells[c].v[(l + 1) % 3])].push_back({c, l});
    std::vector<bool> touched(cells.size(), false);
    bool flipped = false;
    std::vector<std::uint64_t> keys;
    keys.reserve(adj.size());
    for (const auto& kv : adj) keys.push_back(kv.first);
    std::sort(keys.begin(), keys.end());
    for (auto key : keys) {
      const auto& side = adj[key];
      if (side.size() != 2) continue;
      const auto [c1, l1] = side[0];
      const auto [c2, l2] = side[1];
      if (touched[c1] || touched[c2]) continue;
      const int p = cells[c1].v[l1], q = cells[c1].v[(l1 + 1) % 3], r = cells[c1].v[(l1 + 2) % 3];
      const int s = cells[c2].v[(l2 + 2) % 3];
      const double scale = (x[p] - x[q]).squaredNorm();
      if (incircle(x[p], x[q], x[r], x[s]) <= 1e-10 * scale * scale) continue;
      if (signed_area(x[p], x[s], x[r]) <= 0.0 || signed_area(x[s], x[q], x[r]) <= 0.0) continue;
      cells[c1].v = {p, s, r};
      cells[c2].v = {s, q, r};
      touched[c1] = touched[c2] = true;
      flipped = true;
    }
    if (!flipped) return;
  }
}

}  // namespace

int Mesh::num_boundary_faces() const {
  return static_cast<int>(std::count_if(faces.begin(), faces.end(), [](const Face& f) { return f.boundary; }));
}

double Mesh::total_area() const {
  double a = 0.0;
  for (const auto& t : cells) a += t.area;
  return a;
}

double Mesh::h_max() const {
  double h = 0.0;
  for (const auto& t : cells) h = std::max(h, t.diameter);
  return h;
}

double Mesh::h_min() const {
  double h = std::numeric_limits<double>::infinity();
  for (const auto& t : cells) h = std::min(h, t.diameter);
  return h;
}

double Mesh::min_angle_deg() const {
  double m = 180.0;
  for (const auto& t : cells)
    m = std::min(m, triangle_min_angle(vertices[t.v[0]], vertices[t.v[1]], vertices[t.v[2]]));
  return m;
}

Vec2 Mesh::centroid(int cell) const {
  const auto& t = cells[cell];
  return (vertices[t.v[0]] + vertices[t.v[1]] + vertices[t.v[2]]) / 3.0;
}

double domain_area(Domain d) { return d == Domain::lshape ? 3.0 : 1.0; }

Mesh generate_mesh(Domain domain, int n, MeshStyle style, std::uint64_t seed, const MeshOptions& opts) {
  if (n < 1) throw std::invalid_argument("generate_mesh: n must be positive");
  if (domain == Domain::periodic_square && n < 3)
    throw std::invalid_argument("generate_mesh: periodic meshes need n >= 3");
  Grid grid = structured_grid(domain, n);

  if (style == MeshStyle::unstructured) {
    const auto fixed = boundary_vertices(grid);
    const double h = 1.0 / n;
    bool ok = false;
    for (int attempt = 0; attempt <= opts.max_retries && !ok; ++attempt) {
      std::mt19937_64 rng(seed * 1000003ULL + static_cast<std::uint64_t>(attempt));
      std::uniform_real_distribution<double> jitter(-opts.jitter * h, opts.jitter * h);
      Grid trial = grid;
      for (std::size_t i = 0; i < trial.vertices.size(); ++i) {
        const double dx = jitter(rng), dy = jitter(rng);
        if (!fixed[i]) trial.vertices[i] += Vec2(dx, dy);
      }
      bool positive = true;
      for (const auto& t : trial.cells)
        positive = positive && signed_area(trial.vertices[t.v[0]], trial.vertices[t.v[1]], trial.vertices[t.v[2]]) > 0.0;
      if (!positive) continue;
      delaunay_flips(trial.vertices, trial.cells);
      double min_angle = 180.0;
      for (const auto& t : trial.cells)
        min_angle = std::min(min_angle, triangle_min_angle(trial.vertices[t.v[0]], trial.vertices[t.v[1]],
                                                           trial.vertices[t.v[2]]));
      if (min_angle >= opts.min_angle_floor_deg) {
        grid = std::move(trial);
        ok = true;
      }
    }
    if (!ok)
      throw StructuralError("generate_mesh: unstructured mesh violates the minimum angle floor after " +
                            std::to_string(opts.max_retries + 1) + " attempts");
  }

  Mesh mesh;
  mesh.domain = domain;
  mesh.vertices = std::move(grid.vertices);
  mesh.cells = std::move(grid.cells);
  mesh.box_min = grid.box_min;
  mesh.box_max = grid.box_max;
  mesh = compute_connectivity(std::move(mesh));
  if (domain == Domain::periodic_square) mesh = apply_periodic_identification(std::move(mesh));
  return mesh;
}

Mesh compute_connectivity(Mesh mesh) {
  const auto& x = mesh.vertices;
  if (mesh.vertex_class.size() != x.size()) {
    mesh.vertex_class.resize(x.size());
    std::iota(mesh.vertex_class.begin(), mesh.vertex_class.end(), 0);
    mesh.num_vertex_classes = static_cast<int>(x.size());
  }
  const auto& cls = mesh.vertex_class;

  mesh.faces.clear();
  std::unordered_map<std::uint64_t, int> lookup;
  for (int c = 0; c < static_cast<int>(mesh.cells.size()); ++c) {
    auto& t = mesh.cells[c];
    const Vec2 &a = x[t.v[0]], &b = x[t.v[1]], &cc = x[t.v[2]];
    t.area = signed_area(a, b, cc);
    if (!(t.area > 0.0)) throw StructuralError("compute_connectivity: cell " + std::to_string(c) + " has non-positive area");
    t.diameter = std::max({(a - b).norm(), (b - cc).norm(), (cc - a).norm()});
    for (int l = 0; l < 3; ++l) {
      const int p = t.v[l], q = t.v[(l + 1) % 3];
      auto [it, inserted] = lookup.try_emplace(edge_key(p, q), static_cast<int>(mesh.faces.size()));
      if (inserted) {
        Face f;
        f.v = cls[p] < cls[q] ? std::array<int, 2>{p, q} : std::array<int, 2>{q, p};
        f.cells = {c, -1};
        f.local = {l, -1};
        const Vec2 d = x[q] - x[p];
        f.length = d.norm();
        Vec2 nrm(d.y(), -d.x());
        nrm /= f.length;
        if (nrm.dot(x[t.v[(l + 2) % 3]] - x[p]) > 0.0) nrm = -nrm;
        f.normal = nrm;
        f.tangent = rot90(nrm);
        mesh.faces.push_back(f);
      } else {
        Face& f = mesh.faces[it->second];
        if (f.cells[1] >= 0)
          throw StructuralError("compute_connectivity: non-manifold edge (" + std::to_string(p) + ", " +
                                std::to_string(q) + ")");
        f.cells[1] = c;
        f.local[1] = l;
      }
      t.faces[l] = it->second;
      t.face_sign[l] = cls[p] < cls[q] ? 1 : -1;
    }
  }
  for (auto& f : mesh.faces) f.boundary = f.cells[1] < 0;
  return mesh;
}

Mesh apply_periodic_identification(Mesh mesh) {
  if (mesh.domain != Domain::periodic_square)
    throw StructuralError("apply_periodic_identification: domain is not periodic");
  const auto& x = mesh.vertices;
  const Vec2 lo = mesh.box_min, hi = mesh.box_max;
  const Vec2 period = hi - lo;
  const double tol = 1e-10 * period.maxCoeff();
  auto key = [&](double s) { return static_cast<long long>(std::llround(s * 1e8 / period.maxCoeff())); };

  // Vertex classes: union opposite seam vertices.
  std::vector<int> parent(x.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  auto unite = [&](int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  };
  for (int axis = 0; axis < 2; ++axis) {
    std::map<long long, int> far_side;
    for (int i = 0; i < static_cast<int>(x.size()); ++i)
      if (std::abs(x[i][axis] - hi[axis]) < tol) far_side[key(x[i][1 - axis])] = i;
    for (int i = 0; i < static_cast<int>(x.size()); ++i) {
      if (std::abs(x[i][axis] - lo[axis]) >= tol) continue;
      auto it = far_side.find(key(x[i][1 - axis]));
      if (it == far_side.end()) throw StructuralError("apply_periodic_identification: unmatched seam vertex " + std::to_string(i));
      unite(i, it->second);
    }
  }
  std::vector<int> cls(x.size(), -1);
  std::vector<int> root_class(x.size(), -1);
  int nclass = 0;
  for (int i = 0; i < static_cast<int>(x.size()); ++i) {
    const int r = find(i);
    if (root_class[r] < 0) root_class[r] = nclass++;
    cls[i] = root_class[r];
  }

  // Pair seam faces by their midpoints.
  std::vector<int> partner(mesh.faces.size(), -1);
  for (int axis = 0; axis < 2; ++axis) {
    std::map<long long, int> far_side;
    for (int f = 0; f < static_cast<int>(mesh.faces.size()); ++f) {
      const auto& F = mesh.faces[f];
      if (!F.boundary) continue;
      const Vec2 m = 0.5 * (x[F.v[0]] + x[F.v[1]]);
      if (std::abs(m[axis] - hi[axis]) < tol) far_side[key(m[1 - axis])] = f;
    }
    for (int f = 0; f < static_cast<int>(mesh.faces.size()); ++f) {
      const auto& F = mesh.faces[f];
      if (!F.boundary) continue;
      const Vec2 m = 0.5 * (x[F.v[0]] + x[F.v[1]]);
      if (std::abs(m[axis] - lo[axis]) >= tol) continue;
      auto it = far_side.find(key(m[1 - axis]));
      if (it == far_side.end()) throw StructuralError("apply_periodic_identification: unmatched seam face " + std::to_string(f));
      partner[f] = it->second;
      partner[it->second] = f;
    }
  }
  for (int f = 0; f < static_cast<int>(mesh.faces.size()); ++f)
    if (mesh.faces[f].boundary && partner[f] < 0)
      throw StructuralError("apply_periodic_identification: boundary face " + std::to_string(f) + " has no periodic partner");

  std::vector<Face> merged;
  std::vector<int> new_id(mesh.faces.size(), -1);
  for (int f = 0; f < static_cast<int>(mesh.faces.size()); ++f) {
    if (new_id[f] >= 0) continue;
    const Face& F = mesh.faces[f];
    if (partner[f] < 0) {
      new_id[f] = static_cast<int>(merged.size());
      merged.push_back(F);
      continue;
    }
    const int g = partner[f];
    const Face& G = mesh.faces[g];
    const bool f_first = F.cells[0] < G.cells[0];
    const Face& A = f_first ? F : G;
    const Face& Bf = f_first ? G : F;
    Face m = A;
    m.cells = {A.cells[0], Bf.cells[0]};
    m.local = {A.local[0], Bf.local[0]};
    m.boundary = false;
    m.shift = 0.5 * (x[Bf.v[0]] + x[Bf.v[1]]) - 0.5 * (x[A.v[0]] + x[A.v[1]]);
    const double r0 = std::min((x[Bf.v[0]] - x[A.v[0]] - m.shift).norm(), (x[Bf.v[0]] - x[A.v[1]] - m.shift).norm());
    const double r1 = std::min((x[Bf.v[1]] - x[A.v[0]] - m.shift).norm(), (x[Bf.v[1]] - x[A.v[1]] - m.shift).norm());
    if (std::max(r0, r1) > 1e-12 * period.maxCoeff())
      throw StructuralError("apply_periodic_identification: seam faces do not match under translation");
    new_id[f] = new_id[g] = static_cast<int>(merged.size());
    merged.push_back(m);
  }
  for (auto& t : mesh.cells)
    for (auto& fid : t.faces) fid = new_id[fid];
  for (auto& f : merged)
    if (cls[f.v[0]] > cls[f.v[1]]) std::swap(f.v[0], f.v[1]);
  for (auto& t : mesh.cells)
    for (int l = 0; l < 3; ++l) t.face_sign[l] = cls[t.v[l]] < cls[t.v[(l + 1) % 3]] ? 1 : -1;

  mesh.faces = std::move(merged);
  mesh.vertex_class = std::move(cls);
  mesh.num_vertex_classes = nclass;
  mesh.periodic = true;
  return mesh;
}

void write_mesh_text(const Mesh& mesh, std::ostream& os) {
  os << "# curlmhd mesh v1\n";
  os << std::setprecision(17);
  os << "vertices " << mesh.vertices.size() << "  # x y class\n";
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i)
    os << mesh.vertices[i].x() << ' ' << mesh.vertices[i].y() << ' ' << mesh.vertex_class[i] << '\n';
  os << "triangles " << mesh.cells.size() << "  # v0 v1 v2 f0 f1 f2\n";
  for (const auto& t : mesh.cells)
    os << t.v[0] << ' ' << t.v[1] << ' ' << t.v[2] << ' ' << t.faces[0] << ' ' << t.faces[1] << ' ' << t.faces[2] << '\n';
  os << "faces " << mesh.faces.size() << "  # v0 v1 cell0 cell1 nx ny tx ty length boundary shiftx shifty\n";
  for (const auto& f : mesh.faces)
    os << f.v[0] << ' ' << f.v[1] << ' ' << f.cells[0] << ' ' << f.cells[1] << ' ' << f.normal.x() << ' '
       << f.normal.y() << ' ' << f.tangent.x() << ' ' << f.tangent.y() << ' ' << f.length << ' '
       << (f.boundary ? 1 : 0) << ' ' << f.shift.x() << ' ' << f.shift.y() << '\n';
}

}  // namespace curlmhd
