#include "qbolo/experts.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "qbolo/mirror.hpp"

namespace qbolo {

BetaSchedule BetaSchedule::constant(double beta) {
  if (!(beta >= 0.0 && beta <= 1.0)) throw std::invalid_argument("BetaSchedule: beta must lie in [0, 1]");
  BetaSchedule s;
  s.constant_ = beta;
  return s;
}

BetaSchedule BetaSchedule::for_horizon(std::size_t T) {
  if (T == 0) throw std::invalid_argument("BetaSchedule: horizon must be >= 1");
  return constant(-std::expm1(-1.0 / static_cast<double>(T)));
}

BetaSchedule BetaSchedule::per_round(std::vector<double> betas) {
  if (betas.empty()) throw std::invalid_argument("BetaSchedule: empty schedule");
  for (double b : betas) {
    if (!(b >= 0.0 && b <= 1.0)) throw std::invalid_argument("BetaSchedule: beta must lie in [0, 1]");
  }
  BetaSchedule s;
  s.per_round_ = std::move(betas);
  return s;
}

double BetaSchedule::at(std::size_t t) const {
  if (per_round_.empty()) return constant_;
  const std::size_t i = t == 0 ? 0 : t - 1;
  return per_round_[std::min(i, per_round_.size() - 1)];
}

bool BetaSchedule::within_horizon_limit(std::size_t T) const {
  const double limit = -std::expm1(-1.0 / static_cast<double>(T));
  if (per_round_.empty()) return constant_ <= limit;
  return std::all_of(per_round_.begin(), per_round_.end(), [&](double b) { return b <= limit; });
}

ExpertsConfig ExpertsConfig::with_defaults(std::vector<double> mu, std::size_t T, double k) {
  ExpertsConfig c;
  c.mu = std::move(mu);
  c.k = k;
  double s = 0.0;
  for (double m : c.mu) s += m * m;
  c.p1.reserve(c.mu.size());
  for (double m : c.mu) c.p1.push_back(m * m / s);
  c.beta = BetaSchedule::for_horizon(T);
  return c;
}

void ExpertsConfig::validate() const {
  if (mu.empty() || p1.size() != mu.size()) throw std::invalid_argument("ExpertsConfig: mu and p1 must share a nonzero length");
  if (k < 4.5) throw std::invalid_argument("ExpertsConfig: k must be >= 9/2");
  double s = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (!(mu[i] > 0.0) || !std::isfinite(mu[i])) throw std::invalid_argument("ExpertsConfig: mu must be positive");
    if (!(p1[i] > 0.0) || !std::isfinite(p1[i])) throw std::invalid_argument("ExpertsConfig: p1 must be positive");
    s += p1[i];
  }
  if (std::abs(s - 1.0) > 1e-12) throw std::invalid_argument("ExpertsConfig: p1 must sum to 1");
}

ExpertsState experts_init(const ExpertsConfig& config) {
  config.validate();
  ExpertsState s;
  s.p = config.p1;
  s.q = config.p1;
  s.t = 1;
  return s;
}

ExpertsState experts_update(const ExpertsConfig& config, const ExpertsState& state, const std::vector<double>& losses) {
  const std::size_t n = config.size();
  if (losses.size() != n) throw std::invalid_argument("experts_update: expected one loss per expert");

  ExpertsState next = state;
  ScaledEntropyProblem problem{state.p, std::vector<double>(n), config.mu, config.k};
  for (std::size_t i = 0; i < n; ++i) {
    const double l = losses[i];
    if (config.mu[i] * std::abs(l) > 1.0 + 1e-12) {
      ++next.scale_violations;
      std::ostringstream msg;
      msg << "experts_update round " << state.t << ": scale condition mu*|l| = " << config.mu[i] * std::abs(l)
          << " > 1 for expert " << i;
      if (config.policy == ViolationPolicy::kStrict) throw CertificateError(msg.str());
      warn(msg.str());
    }
    problem.costs[i] = l + config.mu[i] * l * l;
  }

  next.q = scaled_entropy_argmin(problem).q;
  const double beta = config.beta.at(state.t);
  next.p.resize(n);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    next.p[i] = (1.0 - beta) * next.q[i] + beta * config.p1[i];
    s += next.p[i];
  }
  for (double& pi : next.p) pi /= s;
  next.t = state.t + 1;
  return next;
}

double experts_meta_bound(const ExpertsConfig& config, const std::vector<double>& u,
                          const std::vector<double>& sum_sq_losses) {
  const std::size_t n = config.size();
  if (u.size() != n || sum_sq_losses.size() != n) throw std::invalid_argument("experts_meta_bound: size mismatch");
  double bound = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    bound += 2.0 * config.k * config.p1[i] / config.mu[i];
    if (u[i] == 0.0) continue;  // 0 log 0 = 0
    bound += u[i] * (config.k * (std::log(u[i] / config.p1[i]) + 1.0) / config.mu[i] + config.mu[i] * sum_sq_losses[i]);
  }
  return bound;
}

double experts_meta_bound(const ExpertsConfig& config, const std::vector<double>& u,
                          const std::vector<std::vector<double>>& loss_history) {
  std::vector<double> sq(config.size(), 0.0);
  for (const auto& row : loss_history) {
    if (row.size() != sq.size()) throw std::invalid_argument("experts_meta_bound: ragged loss history");
    for (std::size_t i = 0; i < sq.size(); ++i) sq[i] += row[i] * row[i];
  }
  return experts_meta_bound(config, u, sq);
}

}  // namespace qbolo
