#pragma once

#include <cstddef>

#include "qbolo/core.hpp"
#include "qbolo/mirror.hpp"

namespace qbolo {

/// Constants of the comparator-adaptive learner for quadratically bounded
/// linear losses. Defaults k = 3, kappa = 4, c = 4 give the
/// 3 * Psi + (2/rho)||w||^2 regularizer with V_1 = 4 G_max^2.
struct QBConfig {
  double eps = 1.0;
  double G_max = 1.0;
  double L_max = 0.0;
  std::size_t dim = 1;
  double k = 3.0;
  double kappa = 4.0;
  double c = 4.0;
  double domain_radius = kUnbounded;
  ViolationPolicy policy = ViolationPolicy::kWarn;

  void validate() const;
};

struct QBState {
  std::size_t t = 1;
  Point w;
  /// G^2_{1:t-1}
  double sumG2 = 0.0;
  /// L^2_{1:t-1}
  double sumL2 = 0.0;
  /// V_t = c G_max^2 + sumG2
  double V = 0.0;
  double alpha = 0.0;
  /// 1/rho_t = sqrt(L_max^2 + sumL2)
  double rho_inv = 0.0;
  std::size_t certificate_violations = 0;
};

/// alpha = eps G_max / (sqrt(V) log^2(V / G_max^2))
double qb_alpha(const QBConfig& config, double V);

/// Regularizer constants for the round described by `state`.
RegularizerParams qb_regularizer(const QBConfig& config, const QBState& state);

QBState qb_init(const QBConfig& config);

/// Feeds g_t with certificate (G_t, L_t) and returns the state for round t+1.
QBState qb_step(const QBConfig& config, const QBState& state, const Point& g, double G_t, double L_t);

/// Explicit regret bound after the completed rounds recorded in `final_state`:
///   2 eps G_max + kappa |u|^2 sqrt(L_max^2 + L^2_{1:T})
///     + 2k |u| max(sqrt(V_{T+1} F), G_max F),   F = log(|u|/alpha_{T+1} + 1).
double qb_regret_bound(const QBConfig& config, const QBState& final_state, double u_norm);

/// Owning wrapper for callers that just want play/update.
class QBLearner {
 public:
  explicit QBLearner(QBConfig config) : config_(std::move(config)), state_(qb_init(config_)) {}

  const Point& play() const noexcept { return state_.w; }
  void update(const Point& g, double G_t, double L_t) { state_ = qb_step(config_, state_, g, G_t, L_t); }
  double regret_bound(double u_norm) const { return qb_regret_bound(config_, state_, u_norm); }

  const QBConfig& config() const noexcept { return config_; }
  const QBState& state() const noexcept { return state_; }

 private:
  QBConfig config_;
  QBState state_;
};

}  // namespace qbolo
