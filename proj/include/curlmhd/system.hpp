#pragma once

#include "curlmhd/forms.hpp"
#include "curlmhd/linalg.hpp"
#include "curlmhd/scenario.hpp"

#include <memory>
#include <optional>
#include <string>

namespace curlmhd {

enum class Variant { unstabilized, method1, method2, method3 };

std::string to_string(Variant v);
Variant variant_from_string(const std::string& s);

struct MethodConfig {
  Variant variant = Variant::method1;
  FormParams params;  // defaults C_S = mu_s = mu_b = 0.1, alpha = 10, mu_sigma = mu_tau = 0.025
  int k = 1;
  BoundaryMode boundary = BoundaryMode::nitsche_dirichlet;

  /// Throws ConfigError on unsupported k, negative diffusivities or non-positive
  /// stabilization parameters, alpha < 1.
  void validate() const;
};

struct SystemState {
  Vector u, p, B, phi;  // phi is empty unless method2
  double lambda_p = 0.0;
  double lambda_phi = 0.0;
  double t = 0.0;
};

/// Stabilization weights per face, computed from the midpoint fields of an iterate.
struct StabWeights {
  std::vector<double> gamma;        // max{C_S, |u_m|}
  std::vector<double> gamma_tilde;  // max{C_S, |u_m|, |B_m|}
};

/// Implicit-midpoint step of one method variant. Unknown layout: [u | p | B | phi | lambda_p | lambda_phi]
/// (phi and lambda_phi only for method2). The multipliers enforce p_0 = 0 and phi_0 = 0. Forms are evaluated at u_m = (u_old + u)/2 and
/// B_m = (B_old + B)/2; p, phi and the multipliers are stage unknowns.
class MhdSystem {
 public:
  MhdSystem(std::shared_ptr<const Mesh> mesh, MethodConfig cfg, const Scenario& scenario);

  const MethodConfig& config() const { return cfg_; }
  const FormContext& context() const { return ctx_; }
  const Scenario& scenario() const { return scenario_; }
  int size() const { return size_; }
  int offset_u() const { return 0; }
  int offset_p() const { return nu_; }
  int offset_B() const { return nu_ + np_; }
  int offset_phi() const { return 2 * nu_ + np_; }
  bool has_phi() const { return cfg_.variant == Variant::method2; }

  const SpMat& mass() const { return M_; }
  const SpMat& curlcurl() const { return A_; }
  const SpMat& nitsche() const { return D_; }
  const SpMat& grad_coupling() const { return Bg_; }  // (phi_i, grad q_j)
  const SpMat& discrete_grad() const { return G_; }
  const Vector& mean_row() const { return mean_; }

  Vector pack(const SystemState& s) const;
  SystemState unpack(const Vector& x, double t) const;

  /// Shifts p (and phi) to zero mean. The solver fixes their first dof instead, which keeps
  /// the constraint rows sparse.
  void normalize_mean(SystemState& s) const;
  /// u_h(0), B_h(0): L2 projections (with discrete Leray correction when flagged).
  SystemState initial_state() const;

  /// Fixes the old state, dt and the stage loads (I_curl f, g, boundary data at t_old + dt/2).
  void begin_step(const SystemState& old, double dt);
  double dt() const { return dt_; }
  /// Variant of the momentum load with an extra gradient forcing, for robustness checks.
  void set_momentum_load(const Vector& load) { load_u_ = load; }
  const Vector& momentum_load() const { return load_u_; }

  StabWeights weights(const Vector& x_new) const;
  Vector residual(const Vector& x_new, const StabWeights& w) const;
  Vector residual(const Vector& x_new) const { return residual(x_new, weights(x_new)); }
  SpMat jacobian(const Vector& x_new, const StabWeights& w) const;

  /// Seminorm squared induced by the variant's stabilization (mu factors included) of
  /// the error pair (eu, eB), with weights from the discrete fields (uh, Bh).
  double stab_seminorm_sq(const Vector& eu, const Vector& eB, const StabWeights& w) const;
  StabWeights weights_of(const Vector& uh, const Vector& Bh) const;

  /// b(B, psi) reference values enforced by the method2 constraint.
  const Vector& divergence_reference() const { return div_ref_; }

 private:
  // Stabilization matrices (mu factors included) acting on u_m and B_m; empty if absent.
  SpMat stab_u(const StabWeights& w) const;
  SpMat stab_B(const StabWeights& w) const;
  Vector stab_u_apply(const StabWeights& w, const Vector& v) const;
  Vector stab_B_apply(const StabWeights& w, const Vector& v) const;

  MethodConfig cfg_;
  Scenario scenario_;
  FormContext ctx_;
  int nu_ = 0, np_ = 0, size_ = 0;
  SpMat M_, A_, D_, Bg_, G_;
  Vector mean_;
  Vector div_ref_;

  SystemState old_;
  double dt_ = 0.0;
  Vector load_u_, load_B_;
};

}  // namespace curlmhd
