#include "qbolo/qb_learner.hpp"

#include <cmath>
#include <sstream>

namespace qbolo {

void QBConfig::validate() const {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw std::invalid_argument("QBConfig: eps must be positive");
  if (!(G_max > 0.0) || !std::isfinite(G_max)) throw std::invalid_argument("QBConfig: G_max must be positive");
  if (!(L_max >= 0.0) || !std::isfinite(L_max)) throw std::invalid_argument("QBConfig: L_max must be >= 0");
  if (dim == 0) throw std::invalid_argument("QBConfig: dim must be >= 1");
  if (k < 3.0 || kappa < 4.0 || c < 4.0) throw std::invalid_argument("QBConfig: need k >= 3, kappa >= 4, c >= 4");
  if (!(domain_radius > 0.0)) throw std::invalid_argument("QBConfig: domain_radius must be positive");
}

double qb_alpha(const QBConfig& config, double V) {
  const double g2 = config.G_max * config.G_max;
  const double lg = std::log(V / g2);
  return config.eps * config.G_max / (std::sqrt(V) * lg * lg);
}

RegularizerParams qb_regularizer(const QBConfig& config, const QBState& state) {
  return {config.k, state.V, state.alpha, config.G_max, config.kappa * state.rho_inv};
}

QBState qb_init(const QBConfig& config) {
  config.validate();
  QBState s;
  s.t = 1;
  s.w = Point::zeros(config.dim);
  s.V = config.c * config.G_max * config.G_max;
  s.alpha = qb_alpha(config, s.V);
  s.rho_inv = config.L_max;
  return s;
}

QBState qb_step(const QBConfig& config, const QBState& state, const Point& g, double G_t, double L_t) {
  require_same_dim(g, state.w, "qb_step");
  if (!(G_t >= 0.0) || !(L_t >= 0.0)) throw std::invalid_argument("qb_step: certificates must be nonnegative");

  QBState next = state;
  const bool in_range = G_t <= config.G_max * (1.0 + 1e-12) && L_t <= config.L_max * (1.0 + 1e-12);
  if (!in_range || !qb_check(g, state.w, QuadBound(G_t, L_t))) {
    ++next.certificate_violations;
    std::ostringstream msg;
    msg << "qb_step round " << state.t << ": certificate (G=" << G_t << ", L=" << L_t << ") fails for ||g||=" << g.norm()
        << ", ||w||=" << state.w.norm() << " (G_max=" << config.G_max << ", L_max=" << config.L_max << ")";
    if (config.policy == ViolationPolicy::kStrict) throw CertificateError(msg.str());
    warn(msg.str());
  }

  next.sumG2 = state.sumG2 + G_t * G_t;
  next.sumL2 = state.sumL2 + L_t * L_t;
  // Composite penalty gradient; L_t^2 is already in the running sum.
  const double coef = next.sumL2 > 0.0 ? (L_t * L_t) / std::sqrt(next.sumL2) : 0.0;
  Point g_tilde = g;
  if (coef != 0.0) g_tilde.axpy(coef, state.w);

  next.V = config.c * config.G_max * config.G_max + next.sumG2;
  next.alpha = qb_alpha(config, next.V);
  next.rho_inv = std::sqrt(config.L_max * config.L_max + next.sumL2);

  const double r = state.w.norm();
  Point grad_psi = Point::zeros(config.dim);
  if (r > 0.0) grad_psi = (psi_prime(qb_regularizer(config, state), r) / r) * state.w;

  next.w = cmd_step(state.w, grad_psi, g_tilde, RadialCurve::from_params(qb_regularizer(config, next)),
                    config.domain_radius);
  next.t = state.t + 1;
  return next;
}

double qb_regret_bound(const QBConfig& config, const QBState& final_state, double u_norm) {
  if (u_norm < 0.0) throw std::invalid_argument("qb_regret_bound: u_norm must be >= 0");
  const double F = std::log1p(u_norm / final_state.alpha);
  const double lipschitz_part = std::max(std::sqrt(final_state.V * F), config.G_max * F);
  return 2.0 * config.eps * config.G_max +
         config.kappa * u_norm * u_norm * std::sqrt(config.L_max * config.L_max + final_state.sumL2) +
         2.0 * config.k * u_norm * lipschitz_part;
}

}  // namespace qbolo
