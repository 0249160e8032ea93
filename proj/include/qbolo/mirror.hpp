#pragma once

#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "qbolo/core.hpp"

namespace qbolo {

/// Raised when a scalar root search cannot meet its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Constants of the log-barrier-plus-quadratic radial regularizer.
///
/// The radial derivative is
///   R'(x) = k * min_{eta <= 1/G} [ F(x)/eta + eta V ] + quad_coef * x,
///   F(x)  = log(x/alpha + 1),
/// evaluated through its closed form (two cases, see psi_prime).
struct RegularizerParams {
  double k = 3.0;
  double V = 4.0;
  double alpha = 1.0;
  double G_max = 1.0;
  /// kappa / rho; zero disables the quadratic component.
  double quad_coef = 0.0;
};

/// Radial derivative R'_t(x) of the log-barrier-plus-quadratic regularizer.
double psi_prime(const RegularizerParams& params, double x);

/// A radially symmetric regularizer w -> R(||w||) represented by R'.
/// R' must be continuous, nondecreasing, and vanish at 0.
struct RadialCurve {
  std::function<double(double)> deriv;

  static RadialCurve from_params(const RegularizerParams& params);
  double operator()(double x) const { return deriv(x); }
};

inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

/// Solves R'(x) = target for x >= 0 and returns min(cap, x).
/// Bracket doubling from x = 1, then bisection until
/// |R'(x) - target| <= 1e-10 (1 + target).
double link_inverse(const RadialCurve& curve, double target, double cap = kUnbounded);

/// One centered mirror descent step for a radial regularizer:
///   argmin_{||w|| <= radius} <g_tilde - grad_psi_at_w, w> + psi_{t+1}(w).
/// The minimizer is collinear with theta = grad_psi_at_w - g_tilde.
Point cmd_step(const Point& w_t, const Point& grad_psi_at_w, const Point& g_tilde,
               const RadialCurve& next_curve, double domain_radius = kUnbounded);

/// argmin_{q in simplex} sum_i c_i q_i + (k/mu_i)(q_i log(q_i/p_i) - q_i + p_i).
struct ScaledEntropyProblem {
  std::vector<double> prior;
  std::vector<double> costs;
  std::vector<double> scales;
  double k = 4.5;
};

struct ScaledEntropySolution {
  std::vector<double> q;
  /// Multiplier of the simplex constraint.
  double lambda = 0.0;
};

ScaledEntropySolution scaled_entropy_argmin(const ScaledEntropyProblem& problem);

/// max_i |(k/mu_i) log(q_i/p_i) + c_i + lambda|
double scaled_entropy_kkt_residual(const ScaledEntropyProblem& problem,
                                   const ScaledEntropySolution& solution);

}  // namespace qbolo
