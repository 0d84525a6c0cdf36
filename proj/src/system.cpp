#include "curlmhd/system.hpp"

#include <cmath>

namespace curlmhd {

std::string to_string(Variant v) {
  switch (v) {
    case Variant::unstabilized: return "unstabilized";
    case Variant::method1: return "method1";
    case Variant::method2: return "method2";
    case Variant::method3: return "method3";
  }
  return "?";
}

Variant variant_from_string(const std::string& s) {
  if (s == "unstabilized") return Variant::unstabilized;
  if (s == "method1") return Variant::method1;
  if (s == "method2") return Variant::method2;
  if (s == "method3") return Variant::method3;
  throw ConfigError("method", "unknown method variant '" + s + "'");
}

void MethodConfig::validate() const {
  if (k != 1 && k != 2) throw ConfigError("k", "unsupported polynomial degree " + std::to_string(k) + " (expected 1 or 2)");
  const auto& p = params;
  if (!(p.nu_s >= 0.0)) throw ConfigError("nu_s", "must be non-negative");
  if (!(p.nu_m >= 0.0)) throw ConfigError("nu_m", "must be non-negative");
  if (!(p.alpha >= 1.0)) throw ConfigError("alpha", "must be at least 1");
  if (!(p.c_s > 0.0)) throw ConfigError("c_s", "must be positive");
  if (!(p.mu_s > 0.0)) throw ConfigError("mu_s", "must be positive");
  if (!(p.mu_b > 0.0)) throw ConfigError("mu_b", "must be positive");
  if (!(p.mu_sigma > 0.0)) throw ConfigError("mu_sigma", "must be positive");
  if (!(p.mu_tau > 0.0)) throw ConfigError("mu_tau", "must be positive");
}

namespace {

MethodConfig validated(MethodConfig cfg) {
  cfg.validate();
  return cfg;
}

}  // namespace

MhdSystem::MhdSystem(std::shared_ptr<const Mesh> mesh, MethodConfig cfg, const Scenario& scenario)
    : cfg_(validated(std::move(cfg))), scenario_(scenario), ctx_(mesh, cfg_.k, cfg_.params) {
  nu_ = ctx_.hcurl().num_dofs();
  np_ = ctx_.h1().num_dofs();
  size_ = 2 * nu_ + np_ + 1 + (has_phi() ? np_ + 1 : 0);
  M_ = assemble_bilinear(ctx_, BilinearKind::mass);
  A_ = assemble_bilinear(ctx_, BilinearKind::a_curlcurl);
  D_ = assemble_bilinear(ctx_, BilinearKind::d_nitsche);
  Bg_ = assemble_bilinear(ctx_, BilinearKind::b_grad);
  G_ = discrete_gradient(ctx_.hcurl(), ctx_.h1());
  mean_ = lagrange_mean_row(ctx_);
  div_ref_ = Vector::Zero(np_);
  if (has_phi()) div_ref_ = Bg_.transpose() * initial_state().B;
}

Vector MhdSystem::pack(const SystemState& s) const {
  Vector x = Vector::Zero(size_);
  x.segment(offset_u(), nu_) = s.u;
  x.segment(offset_p(), np_) = s.p;
  x.segment(offset_B(), nu_) = s.B;
  if (has_phi()) {
    x.segment(offset_phi(), np_) = s.phi.size() == np_ ? s.phi : Vector::Zero(np_);
    x[size_ - 2] = s.lambda_p;
    x[size_ - 1] = s.lambda_phi;
  } else {
    x[size_ - 1] = s.lambda_p;
  }
  return x;
}

SystemState MhdSystem::unpack(const Vector& x, double t) const {
  if (x.size() != size_) throw std::invalid_argument("MhdSystem::unpack: vector size does not match the system");
  SystemState s;
  s.u = x.segment(offset_u(), nu_);
  s.p = x.segment(offset_p(), np_);
  s.B = x.segment(offset_B(), nu_);
  if (has_phi()) {
    s.phi = x.segment(offset_phi(), np_);
    s.lambda_p = x[size_ - 2];
    s.lambda_phi = x[size_ - 1];
  } else {
    s.lambda_p = x[size_ - 1];
  }
  s.t = t;
  return s;
}

void MhdSystem::normalize_mean(SystemState& s) const {
  const double area = mean_.sum();
  s.p.array() -= mean_.dot(s.p) / area;
  if (has_phi() && s.phi.size() == np_) s.phi.array() -= mean_.dot(s.phi) / area;
}

SystemState MhdSystem::initial_state() const {
  SystemState s;
  const FESpace& V = ctx_.hcurl();
  s.u = scenario_.u0.value ? l2_project_hcurl(V, scenario_.u0, 0.0) : Vector::Zero(nu_);
  s.B = scenario_.B0.value ? l2_project_hcurl(V, scenario_.B0, 0.0) : Vector::Zero(nu_);
  if ((scenario_.solenoidal_u0 && scenario_.u0.value) || (scenario_.solenoidal_B0 && scenario_.B0.value)) {
    const LerayProjector leray(M_, G_);
    if (scenario_.solenoidal_u0 && scenario_.u0.value) s.u = leray.apply(s.u);
    if (scenario_.solenoidal_B0 && scenario_.B0.value) s.B = leray.apply(s.B);
  }
  s.p = Vector::Zero(np_);
  if (has_phi()) s.phi = Vector::Zero(np_);
  return s;
}

void MhdSystem::begin_step(const SystemState& old, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("MhdSystem::begin_step: dt must be positive");
  if (old.u.size() != nu_ || old.B.size() != nu_) throw std::invalid_argument("MhdSystem::begin_step: state size mismatch");
  old_ = old;
  dt_ = dt;
  const double tm = old.t + 0.5 * dt;
  load_u_ = Vector::Zero(nu_);
  if (scenario_.f.value) load_u_ = M_ * canonical_interpolate_hcurl(ctx_.hcurl(), scenario_.f, tm);
  if (scenario_.boundary == BoundaryMode::inhomogeneous_nitsche && scenario_.u_tangent)
    load_u_ += cfg_.params.nu_s *
               nitsche_rhs(ctx_, [&](const Vec2& x, const Vec2& tf) { return scenario_.u_tangent(x, tf, tm); });
  load_B_ = scenario_.g.value ? hcurl_load(ctx_, scenario_.g, tm) : Vector::Zero(nu_);
}

StabWeights MhdSystem::weights_of(const Vector& uh, const Vector& Bh) const {
  StabWeights w;
  if (cfg_.variant == Variant::method1 || cfg_.variant == Variant::method2) w.gamma = face_weights(ctx_, uh);
  if (cfg_.variant == Variant::method3) w.gamma_tilde = face_weights(ctx_, uh, &Bh);
  return w;
}

StabWeights MhdSystem::weights(const Vector& x) const {
  const Vector um = 0.5 * (old_.u + x.segment(offset_u(), nu_));
  const Vector Bm = 0.5 * (old_.B + x.segment(offset_B(), nu_));
  return weights_of(um, Bm);
}

SpMat MhdSystem::stab_u(const StabWeights& w) const {
  const auto& p = cfg_.params;
  switch (cfg_.variant) {
    case Variant::method1:
    case Variant::method2: return p.mu_s * assemble_cip(ctx_, w.gamma, CipKind::s_jump);
    case Variant::method3:
      return p.mu_s * assemble_cip(ctx_, w.gamma_tilde, CipKind::stilde_jump) +
             p.mu_sigma * assemble_cip(ctx_, w.gamma_tilde, CipKind::sigma_gradjump);
    default: return SpMat(nu_, nu_);
  }
}

SpMat MhdSystem::stab_B(const StabWeights& w) const {
  const auto& p = cfg_.params;
  switch (cfg_.variant) {
    case Variant::method2: return p.mu_b * assemble_cip(ctx_, w.gamma, CipKind::s_jump);
    case Variant::method3: return p.mu_tau * assemble_cip(ctx_, w.gamma_tilde, CipKind::tau_curljump);
    default: return SpMat(nu_, nu_);
  }
}

Vector MhdSystem::stab_u_apply(const StabWeights& w, const Vector& v) const {
  const auto& p = cfg_.params;
  switch (cfg_.variant) {
    case Variant::method1:
    case Variant::method2: return p.mu_s * apply_cip(ctx_, w.gamma, CipKind::s_jump, v);
    case Variant::method3:
      return p.mu_s * apply_cip(ctx_, w.gamma_tilde, CipKind::stilde_jump, v) +
             p.mu_sigma * apply_cip(ctx_, w.gamma_tilde, CipKind::sigma_gradjump, v);
    default: return Vector::Zero(nu_);
  }
}

Vector MhdSystem::stab_B_apply(const StabWeights& w, const Vector& v) const {
  const auto& p = cfg_.params;
  switch (cfg_.variant) {
    case Variant::method2: return p.mu_b * apply_cip(ctx_, w.gamma, CipKind::s_jump, v);
    case Variant::method3: return p.mu_tau * apply_cip(ctx_, w.gamma_tilde, CipKind::tau_curljump, v);
    default: return Vector::Zero(nu_);
  }
}

Vector MhdSystem::residual(const Vector& x, const StabWeights& w) const {
  if (x.size() != size_) throw std::invalid_argument("MhdSystem::residual: vector size does not match the system");
  if (dt_ <= 0.0) throw std::logic_error("MhdSystem::residual: begin_step not called");
  const auto& prm = cfg_.params;
  const Vector u = x.segment(offset_u(), nu_), B = x.segment(offset_B(), nu_);
  const Vector p = x.segment(offset_p(), np_);
  const Vector um = 0.5 * (old_.u + u), Bm = 0.5 * (old_.B + B);
  const double lp = has_phi() ? x[size_ - 2] : x[size_ - 1];

  Vector nl_u, nl_B;
  apply_nonlinear(ctx_, um, Bm, nl_u, nl_B);

  Vector R = Vector::Zero(size_);
  Vector Ru = M_ * (u - old_.u) / dt_ + prm.nu_s * (A_ * um + D_ * um) + nl_u - Bg_ * p - load_u_;
  if (cfg_.variant != Variant::unstabilized) Ru += stab_u_apply(w, um);
  R.segment(offset_u(), nu_) = Ru;
  R.segment(offset_p(), np_) = Bg_.transpose() * um;
  R[offset_p()] += lp;

  Vector RB = M_ * (B - old_.B) / dt_ + prm.nu_m * (A_ * Bm) + nl_B - load_B_;
  if (cfg_.variant == Variant::method2 || cfg_.variant == Variant::method3) RB += stab_B_apply(w, Bm);
  if (has_phi()) {
    const Vector phi = x.segment(offset_phi(), np_);
    RB += Bg_ * phi;
    R.segment(offset_phi(), np_) = Bg_.transpose() * Bm - div_ref_;
    R[offset_phi()] += x[size_ - 1];
    R[size_ - 2] = p[0];
    R[size_ - 1] = phi[0];
  } else {
    R[size_ - 1] = p[0];
  }
  R.segment(offset_B(), nu_) = RB;
  return R;
}

SpMat MhdSystem::jacobian(const Vector& x, const StabWeights& w) const {
  if (x.size() != size_) throw std::invalid_argument("MhdSystem::jacobian: vector size does not match the system");
  const auto& prm = cfg_.params;
  const Vector um = 0.5 * (old_.u + x.segment(offset_u(), nu_));
  const Vector Bm = 0.5 * (old_.B + x.segment(offset_B(), nu_));
  const SpMat Cu = assemble_convection(ctx_, um, ConvectionPattern::c_w_uv);
  const SpMat Ku = assemble_convection(ctx_, um, ConvectionPattern::c_v_Bu);
  const SpMat CB = assemble_convection(ctx_, Bm, ConvectionPattern::c_w_uv);
  const SpMat KB = assemble_convection(ctx_, Bm, ConvectionPattern::c_v_Bu);
  const SpMat KuT = Ku.transpose(), KBT = KB.transpose(), BgT = Bg_.transpose();
  const int ou = offset_u(), op = offset_p(), oB = offset_B(), of = offset_phi();
  const int lam_p = has_phi() ? size_ - 2 : size_ - 1;

  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(12 * M_.nonZeros() + 4 * Bg_.nonZeros()));
  // Momentum rows.
  append_block(t, M_, ou, ou, 1.0 / dt_);
  append_block(t, A_, ou, ou, 0.5 * prm.nu_s);
  append_block(t, D_, ou, ou, 0.5 * prm.nu_s);
  append_block(t, Cu, ou, ou, 0.5);
  append_block(t, KuT, ou, ou, 0.5);
  if (cfg_.variant != Variant::unstabilized) append_block(t, stab_u(w), ou, ou, 0.5);
  append_block(t, CB, ou, oB, -0.5);
  append_block(t, KBT, ou, oB, -0.5);
  append_block(t, Bg_, ou, op, -1.0);
  // Continuity rows.
  append_block(t, BgT, op, ou, 0.5);
  t.emplace_back(op, lam_p, 1.0);
  t.emplace_back(lam_p, op, 1.0);
  // Induction rows.
  append_block(t, M_, oB, oB, 1.0 / dt_);
  append_block(t, A_, oB, oB, 0.5 * prm.nu_m);
  append_block(t, Ku, oB, oB, -0.5);
  if (cfg_.variant == Variant::method2 || cfg_.variant == Variant::method3) append_block(t, stab_B(w), oB, oB, 0.5);
  append_block(t, KB, oB, ou, 0.5);
  if (has_phi()) {
    append_block(t, Bg_, oB, of, 1.0);
    append_block(t, BgT, of, oB, 0.5);
    t.emplace_back(of, size_ - 1, 1.0);
    t.emplace_back(size_ - 1, of, 1.0);
  }
  return finalize(size_, size_, t);
}

double MhdSystem::stab_seminorm_sq(const Vector& eu, const Vector& eB, const StabWeights& w) const {
  double s = 0.0;
  if (cfg_.variant != Variant::unstabilized) s += eu.dot(stab_u_apply(w, eu));
  if (cfg_.variant == Variant::method2 || cfg_.variant == Variant::method3) s += eB.dot(stab_B_apply(w, eB));
  return s;
}

}  // namespace curlmhd
