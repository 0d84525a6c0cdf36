#include "curlmhd/forms.hpp"
#include "curlmhd/interpolate.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace curlmhd;

namespace {

std::shared_ptr<const Mesh> make(Domain d, int n, MeshStyle s = MeshStyle::structured, std::uint64_t seed = 0) {
  return std::make_shared<const Mesh>(generate_mesh(d, n, s, seed));
}

Vector random_vector(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  Vector v(n);
  for (auto& x : v) x = nd(rng);
  return v;
}

double max_asym(const SpMat& A) { return SpMat(A - SpMat(A.transpose())).coeffs().cwiseAbs().maxCoeff(); }

// Coefficients of the field equal to a on cell 0 and b on cell 1 of the two-triangle mesh.
Vector piecewise_constant(const FESpace& V, const Vec2& a, const Vec2& b) {
  Vector c = Vector::Zero(V.num_dofs());
  for (int cell = 0; cell < 2; ++cell) {
    const Vec2 v = cell == 0 ? a : b;
    const auto segs = V.dof_segments(cell);
    const int* d = V.cell_dofs(cell);
    for (int i = 0; i < V.local_dim(); ++i) c[d[i]] = v.dot(segs[i].to - segs[i].from);
  }
  return c;
}

}  // namespace

TEST(Forms, ConvectionIsSkewSymmetric) {
  for (int k : {1, 2}) {
    FormContext ctx(make(Domain::unit_square, 3, MeshStyle::unstructured, 4), k);
    const Vector w = random_vector(ctx.hcurl().num_dofs(), 1);
    const SpMat C = assemble_convection(ctx, w, ConvectionPattern::c_w_uv);
    EXPECT_LT(SpMat(C + SpMat(C.transpose())).coeffs().cwiseAbs().maxCoeff(), 1e-13);
    const Vector u = random_vector(ctx.hcurl().num_dofs(), 2);
    EXPECT_NEAR(u.dot(C * u), 0.0, 1e-11);
  }
}

TEST(Forms, ConvectionPatternsAgree) {
  FormContext ctx(make(Domain::periodic_square, 4), 1);
  const int n = ctx.hcurl().num_dofs();
  const Vector w = random_vector(n, 3), u = random_vector(n, 4), v = random_vector(n, 5);
  // c(w; u, v) = v^T C(w) u = w^T K(u) v
  const double a = v.dot(assemble_convection(ctx, w, ConvectionPattern::c_w_uv) * u);
  const double b = w.dot(assemble_convection(ctx, u, ConvectionPattern::c_v_Bu) * v);
  EXPECT_NEAR(a, b, 1e-11 * std::abs(a));
}

TEST(Forms, CurlCurlKillsGradientsAndMatchesDiscreteGradient) {
  for (int k : {1, 2}) {
    FormContext ctx(make(Domain::unit_square, 3, MeshStyle::unstructured, 1), k);
    const SpMat G = discrete_gradient(ctx.hcurl(), ctx.h1());
    const SpMat A = assemble_bilinear(ctx, BilinearKind::a_curlcurl);
    const SpMat M = assemble_bilinear(ctx, BilinearKind::mass);
    const SpMat Bg = assemble_bilinear(ctx, BilinearKind::b_grad);
    EXPECT_LT(SpMat(A * G).coeffs().cwiseAbs().maxCoeff(), 1e-11);
    EXPECT_LT(SpMat(Bg - M * G).coeffs().cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT(max_asym(A), 1e-13);
    EXPECT_LT(max_asym(M), 1e-13);
  }
}

TEST(Forms, MassOfConstantField) {
  const auto m = make(Domain::unit_square, 4, MeshStyle::unstructured, 2);
  FormContext ctx(m, 1);
  VectorField f;
  f.value = [](const Vec2&, double) { return Vec2(3.0, -4.0); };
  const Vector c = canonical_interpolate_hcurl(ctx.hcurl(), f, 0.0);
  EXPECT_NEAR(c.dot(assemble_bilinear(ctx, BilinearKind::mass) * c), 25.0, 1e-12);
  EXPECT_NEAR(lagrange_mean_row(ctx).sum(), 1.0, 1e-13);
}

TEST(Forms, NitscheIsSymmetricAndVanishesOnZeroTrace) {
  FormContext ctx(make(Domain::unit_square, 4, MeshStyle::unstructured, 6), 1);
  const SpMat D = assemble_bilinear(ctx, BilinearKind::d_nitsche);
  EXPECT_LT(max_asym(D), 1e-12);
  Vector v = random_vector(ctx.hcurl().num_dofs(), 9);
  for (int i : ctx.hcurl().boundary_dofs()) v[i] = 0.0;
  EXPECT_NEAR(v.dot(D * v), 0.0, 1e-12);
}

TEST(Forms, CipJumpOnTwoTriangles) {
  auto m = make(Domain::unit_square, 1);
  FormContext ctx(m, 1);
  int interior = -1;
  for (int f = 0; f < 5; ++f)
    if (!m->faces[f].boundary) interior = f;
  ASSERT_GE(interior, 0);
  const Vec2 n = m->faces[interior].normal;
  const Vec2 a(1.0, 0.0), b = a + 0.5 * n;
  const Vector v = piecewise_constant(ctx.hcurl(), a, b);
  // Zero convection field: gamma = C_S, so s(v, v) = C_S / h * |a - b|^2 * h.
  const SpMat S = assemble_cip(ctx, Vector::Zero(ctx.hcurl().num_dofs()), nullptr, CipKind::s_jump);
  EXPECT_NEAR(v.dot(S * v), 0.1 * 0.25, 1e-14);
  const Vector smooth = piecewise_constant(ctx.hcurl(), a, a);
  EXPECT_NEAR(smooth.dot(S * smooth), 0.0, 1e-14);
  EXPECT_NEAR(smooth.dot(assemble_cip(ctx, std::vector<double>(5, 1.0), CipKind::tau_curljump) * smooth), 0.0, 1e-14);
  EXPECT_NEAR(smooth.dot(assemble_cip(ctx, std::vector<double>(5, 1.0), CipKind::sigma_gradjump) * smooth), 0.0, 1e-14);
}

TEST(Forms, FaceWeightsTakeMaximum) {
  auto m = make(Domain::unit_square, 2);
  FormContext ctx(m, 1);
  VectorField f;
  f.value = [](const Vec2&, double) { return Vec2(0.0, 2.0); };
  const Vector u = canonical_interpolate_hcurl(ctx.hcurl(), f, 0.0);
  f.value = [](const Vec2&, double) { return Vec2(3.0, 0.0); };
  const Vector B = canonical_interpolate_hcurl(ctx.hcurl(), f, 0.0);
  for (double g : face_weights(ctx, Vector::Zero(u.size()))) EXPECT_DOUBLE_EQ(g, 0.1);
  for (double g : face_weights(ctx, u)) EXPECT_NEAR(g, 2.0, 1e-12);
  for (double g : face_weights(ctx, u, &B)) EXPECT_NEAR(g, 3.0, 1e-12);
}

TEST(Forms, CoercivityOnDiscreteKernel) {
  for (int n : {4, 8}) {
    FormContext ctx(make(Domain::unit_square, n, MeshStyle::unstructured, 3), 1);
    const SpMat M = assemble_bilinear(ctx, BilinearKind::mass);
    const SpMat AD = assemble_bilinear(ctx, BilinearKind::a_curlcurl) + assemble_bilinear(ctx, BilinearKind::d_nitsche);
    const LerayProjector P(M, discrete_gradient(ctx.hcurl(), ctx.h1()));
    for (int r = 0; r < 5; ++r) {
      const Vector v = P.apply(random_vector(ctx.hcurl().num_dofs(), 100 + r));
      EXPECT_GT(v.dot(AD * v), 0.05 * sharp_norm_sq(ctx, v));
    }
  }
}

TEST(Forms, NitscheLoadMatchesPenaltyOfTangentialData) {
  // With g = v.t of a field in the space, the load equals D restricted to the boundary terms
  // that involve g, so D v - rhs(v.t) only keeps the -int curl(v) (w.t) part.
  auto m = make(Domain::unit_square, 3);
  FormContext ctx(m, 1);
  VectorField f;
  f.value = [](const Vec2& x, double) { return Vec2(1.0 + x.y(), 2.0 - x.x()); };  // curl = -2
  const Vector v = canonical_interpolate_hcurl(ctx.hcurl(), f, 0.0);
  const Vector rhs = nitsche_rhs(ctx, [&](const Vec2& x, const Vec2& t) { return f.value(x, 0.0).dot(t); });
  const SpMat D = assemble_bilinear(ctx, BilinearKind::d_nitsche);
  const Vector w = random_vector(v.size(), 4);
  // residual: w^T (D v - rhs) = -int curl(v) (w.t) = 2 int (w.t)
  double expect = 0.0;
  for (int fi = 0; fi < static_cast<int>(m->faces.size()); ++fi) {
    const Face& F = m->faces[fi];
    if (!F.boundary) continue;
    const auto& fd = ctx.face(fi);
    for (std::size_t q = 0; q < fd.w.size(); ++q)
      expect += 2.0 * fd.w[q] * ctx.hcurl().field_value(w, fd.cell[0], fd.x[q]).dot(F.tangent);
  }
  EXPECT_NEAR(w.dot(D * v - rhs), expect, 1e-11);
}
