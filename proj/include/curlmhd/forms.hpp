#pragma once

#include "curlmhd/common.hpp"
#include "curlmhd/fespace.hpp"
#include "curlmhd/interpolate.hpp"

#include <array>
#include <memory>
#include <vector>

namespace curlmhd {

struct FormParams {
  double nu_s = 1.0;
  double nu_m = 1.0;
  double alpha = 10.0;
  double c_s = 0.1;
  double mu_s = 0.1;
  double mu_b = 0.1;
  double mu_sigma = 0.025;
  double mu_tau = 0.025;
};

/// Mesh, the two spaces (H(curl) degree k, Lagrange degree k+1) and cached basis tables
/// at the volume and face quadrature points.
class FormContext {
 public:
  FormContext(std::shared_ptr<const Mesh> mesh, int k, FormParams params = {}, int quad_degree = -1);

  struct CellData {
    std::vector<double> w;  // physical weights
    std::vector<Vec2> x;
    std::vector<PointEval> hc, h1;
  };
  struct FaceData {
    std::vector<double> w;  // physical weights
    std::vector<double> s;
    std::array<int, 2> cell{-1, -1};
    std::array<std::vector<PointEval>, 2> hc;  // with gradients
    std::vector<Vec2> x;                       // points as seen from cells[0]
  };

  const Mesh& mesh() const { return *mesh_; }
  std::shared_ptr<const Mesh> mesh_ptr() const { return mesh_; }
  const FESpace& hcurl() const { return hcurl_; }
  const FESpace& h1() const { return h1_; }
  int k() const { return hcurl_.degree(); }
  int quad_degree() const { return quad_degree_; }
  const FormParams& params() const { return params_; }
  FormParams& params() { return params_; }
  const CellData& cell(int c) const { return cells_[c]; }
  const FaceData& face(int f) const { return faces_[f]; }

 private:
  std::shared_ptr<const Mesh> mesh_;
  FESpace hcurl_, h1_;
  FormParams params_;
  int quad_degree_;
  std::vector<CellData> cells_;
  std::vector<FaceData> faces_;
};

enum class BilinearKind { mass, a_curlcurl, b_grad, d_nitsche };

/// mass, a_curlcurl and d_nitsche act on H(curl) x H(curl); b_grad(i, j) = (phi_i, grad q_j)
/// has H(curl) rows and Lagrange columns. d_nitsche uses params().alpha.
SpMat assemble_bilinear(const FormContext& ctx, BilinearKind kind);

/// Lagrange mass-weighted mean functional: m_j = (q_j, 1).
Vector lagrange_mean_row(const FormContext& ctx);

enum class ConvectionPattern {
  c_w_uv,  // C(i, j) = c(w; phi_j, phi_i): w convects, test in the last slot (skew)
  c_v_Bu   // K(i, j) = c(phi_i; w, phi_j): curl of the test function, w in the middle slot
};

/// 2D: c(w; u, v) = (curl w rot90(u), v).
SpMat assemble_convection(const FormContext& ctx, const Vector& w, ConvectionPattern pattern);

enum class CipKind { s_jump, stilde_jump, sigma_gradjump, tau_curljump };

/// Matrix-free nonlinear terms: ru_i = c(u; u, phi_i) - c(B; B, phi_i), rB_i = c(phi_i; B, u).
void apply_nonlinear(const FormContext& ctx, const Vector& u, const Vector& B, Vector& ru, Vector& rB);

/// Face weights max{C_S, max |w|, max |z|} over the face quadrature points of both traces.
/// `z` may be null. Entry f is defined for every face.
std::vector<double> face_weights(const FormContext& ctx, const Vector& w, const Vector* z = nullptr);

SpMat assemble_cip(const FormContext& ctx, const std::vector<double>& weights, CipKind kind);
SpMat assemble_cip(const FormContext& ctx, const Vector& w, const Vector* z, CipKind kind);
/// Same as assemble_cip(ctx, weights, kind) * v without forming the matrix.
Vector apply_cip(const FormContext& ctx, const std::vector<double>& weights, CipKind kind, const Vector& v);

/// Boundary-data part of the Nitsche right-hand side for the tangential trace g_t:
/// -(curl v, g_t)_dOmega + alpha sum h_f^-1 (g_t, v.t)_f (without the nu_S factor).
Vector nitsche_rhs(const FormContext& ctx, const std::function<double(const Vec2& x, const Vec2& tangent)>& g_t);

/// L2 load (f, phi_i) on the cached quadrature.
Vector hcurl_load(const FormContext& ctx, const VectorField& f, double t);

/// ||v||_#^2 = ||curl v||^2 + sum_{boundary f} h_f^-1 ||v.t||_f^2.
double sharp_norm_sq(const FormContext& ctx, const Vector& v);

}  // namespace curlmhd
