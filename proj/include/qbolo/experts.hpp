#pragma once

#include <cstddef>
#include <vector>

#include "qbolo/core.hpp"

namespace qbolo {

/// Fixed-share mixing rates beta_t, either constant or given per round.
class BetaSchedule {
 public:
  BetaSchedule() = default;
  static BetaSchedule constant(double beta);
  /// The largest rate allowed for horizon T: 1 - exp(-1/T).
  static BetaSchedule for_horizon(std::size_t T);
  static BetaSchedule per_round(std::vector<double> betas);

  /// beta_t for t = 1, 2, ...; rounds past an explicit schedule reuse its last entry.
  double at(std::size_t t) const;
  /// True when every beta_t is within [0, 1 - exp(-1/T)].
  bool within_horizon_limit(std::size_t T) const;

 private:
  double constant_ = 0.0;
  std::vector<double> per_round_;
};

struct ExpertsConfig {
  std::vector<double> mu;
  double k = 4.5;
  std::vector<double> p1;
  BetaSchedule beta;
  ViolationPolicy policy = ViolationPolicy::kWarn;

  /// p1_i = mu_i^2 / sum_j mu_j^2 and beta_t = 1 - exp(-1/T).
  static ExpertsConfig with_defaults(std::vector<double> mu, std::size_t T, double k = 4.5);
  std::size_t size() const noexcept { return mu.size(); }
  void validate() const;
};

struct ExpertsState {
  std::vector<double> p;
  std::vector<double> q;
  std::size_t t = 1;
  std::size_t scale_violations = 0;
};

ExpertsState experts_init(const ExpertsConfig& config);

/// Multi-scale exponential weights with second-order correction
/// c_i = l_i + mu_i l_i^2, followed by fixed-share mixing toward p1.
ExpertsState experts_update(const ExpertsConfig& config, const ExpertsState& state,
                            const std::vector<double>& losses);

/// Explicit weighted-regret bound against u in the simplex:
///   sum_i u_i [k (log(u_i/p1_i) + 1)/mu_i + mu_i sum_t l_ti^2] + 2k sum_i p1_i/mu_i.
/// `sum_sq_losses[i]` is sum_t l_ti^2.
double experts_meta_bound(const ExpertsConfig& config, const std::vector<double>& u,
                          const std::vector<double>& sum_sq_losses);

/// Same bound from a full T x N loss history.
double experts_meta_bound(const ExpertsConfig& config, const std::vector<double>& u,
                          const std::vector<std::vector<double>>& loss_history);

}  // namespace qbolo
