#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "qbolo/core.hpp"
#include "qbolo/experts.hpp"

namespace qbolo {

struct GridConfig {
  double eps = 1.0;
  double K = 8.0;
  double G_max = 1.0;
  double L_max = 1.0;
  std::size_t T = 1;
  /// Use the smooth-loss grid (D_min = eps/sqrt(T), eta capped at 1/(K L_max)).
  bool smooth = false;
  /// D_j saturates at D_min * 2^min(T, cap) rather than D_min * 2^T.
  int max_exponent_cap = 40;

  void validate() const;
};

struct GridAxes {
  std::vector<double> etas;
  std::vector<double> Ds;
};

GridAxes grid_axes(const GridConfig& cfg);

struct GridPoint {
  double eta = 0.0;
  double D = 0.0;
};

/// Cartesian product of the step-size and radius axes, eta-major.
std::vector<GridPoint> build_grid(const GridConfig& cfg);

/// One biased projected-gradient expert.
struct ExpertTau {
  double eta = 0.0;
  double D = 0.0;
  /// 1 / (2 D (G_max + D/eta))
  double mu = 0.0;
  Point w;

  static ExpertTau make(double eta, double D, double G_max, std::size_t dim);
};

/// w <- proj_{||w|| <= D}(w - eta (1 + K eta L_t) g)
ExpertTau expert_step(const ExpertTau& tau, const Point& g, double L_t, double K);

/// Per-expert records used by untuned_bound.
struct ExpertLog {
  /// sum_t ||g_t^tau||^2
  double sum_g2 = 0.0;
  /// sum_t L_t l_t(w_t^tau)
  double sum_L_loss = 0.0;
  /// sum_t l_t(w_t^tau)
  double sum_loss = 0.0;
  /// sum_t (l_t(w_t^tau) - l_t(0))^2
  double sum_rel_sq = 0.0;
  /// Relative losses per round; filled only with DynConfig::keep_history.
  std::vector<double> rel_losses;
};

struct DynConfig {
  GridConfig grid;
  std::size_t dim = 1;
  /// Experts-module constant, >= 9/2.
  double k = 4.5;
  ViolationPolicy policy = ViolationPolicy::kWarn;
  bool keep_history = false;
};

struct DynState {
  DynConfig config;
  std::vector<ExpertTau> experts;
  ExpertsConfig weights_config;
  ExpertsState weights;
  std::size_t t = 1;
  std::vector<ExpertLog> logs;
  /// L_1, ..., L_{t-1}
  std::vector<double> L_history;
  std::size_t certificate_violations = 0;
};

DynState dyn_init(const DynConfig& config);

/// sum_tau p_t(tau) w_t^tau
Point dyn_play(const DynState& state);

/// One round: every expert queries the loss at its own iterate, relative
/// losses are taken against l_t(0), experts step, then the weights update.
/// Takes the state by value so callers can move it through the loop.
DynState dyn_round(DynState state, const RoundLoss& loss, const QuadBound& bounds);

/// C_S = sum mu / sum mu^2
double grid_c_s(const std::vector<double>& mu);
/// Lambda(tau) = log(sum mu^2 / mu_tau^2) + 1
double grid_lambda(const std::vector<double>& mu, std::size_t tau);

/// Explicit regret bound of the meta-algorithm against a comparator path
/// staying inside expert tau's ball:
///   2k C_S + 2k D G_max Lambda + (|u_T|^2 + 2 D P_T + 4k D^2 Lambda) / (2 eta)
///   + K eta sum_t L_t [l_t(u_t) - l_t(w_t^tau)] + 4 eta sum_t ||g_t^tau||^2.
/// `comparator_losses[t]` is l_t(u_t) for the completed rounds.
double untuned_bound(const DynState& run, std::size_t tau, const ComparatorPath& u,
                     const std::vector<double>& comparator_losses);

/// Comparator-independent part of untuned_bound for expert tau:
///   2k C_S + 2k D G_max Lambda + 4k D^2 Lambda / (2 eta)
///   - K eta sum_t L_t l_t(w_t^tau) + 4 eta sum_t ||g_t^tau||^2.
/// Adding (|u_T|^2 + 2 D P_T)/(2 eta) + K eta sum_t L_t l_t(u_t) gives the bound.
double untuned_bound_base(const DynState& run, std::size_t tau);

class DynamicLearner {
 public:
  explicit DynamicLearner(const DynConfig& config) : state_(dyn_init(config)) {}

  Point play() const { return dyn_play(state_); }
  void update(const RoundLoss& loss, const QuadBound& bounds) { state_ = dyn_round(std::move(state_), loss, bounds); }
  const DynState& state() const noexcept { return state_; }

 private:
  DynState state_;
};

}  // namespace qbolo
