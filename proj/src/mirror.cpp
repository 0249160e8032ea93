#include "qbolo/mirror.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace qbolo {

namespace {

constexpr int kMaxDoublings = 120;
// Radial curves can grow only logarithmically, so the radius bracket may
// need most of the double range.
constexpr int kMaxRadiusDoublings = 1000;
constexpr int kMaxBisections = 200;

void require_regularizer(const RegularizerParams& p) {
  if (!(p.V > 0.0) || !(p.alpha > 0.0) || !(p.G_max > 0.0) || !(p.k > 0.0) || !(p.quad_coef >= 0.0)) {
    throw std::invalid_argument("RegularizerParams: need V, alpha, G_max, k > 0 and quad_coef >= 0");
  }
}

// log(sum_i exp(a_i - b_i * lambda)) with a max shift; also returns the
// derivative -sum_i softmax_i * b_i.
struct LogSum {
  double value;
  double slope;
};

LogSum log_sum(const std::vector<double>& a, const std::vector<double>& b, double lambda) {
  double shift = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < a.size(); ++i) shift = std::max(shift, a[i] - b[i] * lambda);
  double s = 0.0;
  double sb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double e = std::exp(a[i] - b[i] * lambda - shift);
    s += e;
    sb += e * b[i];
  }
  return {shift + std::log(s), -sb / s};
}

}  // namespace

double psi_prime(const RegularizerParams& params, double x) {
  if (x < 0.0 || std::isnan(x)) throw std::invalid_argument("psi_prime: negative radius");
  require_regularizer(params);
  const double F = std::log1p(x / params.alpha);
  double log_part;
  if (params.G_max * std::sqrt(F) <= std::sqrt(params.V)) {
    log_part = 2.0 * params.k * std::sqrt(params.V * F);
  } else {
    log_part = params.k * params.G_max * F + params.k * params.V / params.G_max;
  }
  return log_part + params.quad_coef * x;
}

RadialCurve RadialCurve::from_params(const RegularizerParams& params) {
  require_regularizer(params);
  return RadialCurve{[params](double x) { return psi_prime(params, x); }};
}

double link_inverse(const RadialCurve& curve, double target, double cap) {
  if (!(target >= 0.0) || !std::isfinite(target)) throw std::invalid_argument("link_inverse: target must be finite and >= 0");
  if (!(cap > 0.0)) throw std::invalid_argument("link_inverse: cap must be positive");
  if (target == 0.0) return 0.0;
  if (std::isfinite(cap) && curve(cap) <= target) return cap;

  const double tol = 1e-10 * (1.0 + target);
  double lo = 0.0;
  double hi = 1.0;
  int doublings = 0;
  while (curve(hi) < target) {
    if (++doublings > kMaxRadiusDoublings) throw ConvergenceError("link_inverse: could not bracket target");
    lo = hi;
    hi *= 2.0;
  }
  if (hi > cap) hi = cap;

  if (std::abs(curve(hi) - target) <= tol) return hi;
  for (int it = 0; it < kMaxBisections; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double r = curve(mid) - target;
    if (std::abs(r) <= tol || mid == lo || mid == hi) return std::min(mid, cap);
    (r < 0.0 ? lo : hi) = mid;
  }
  throw ConvergenceError("link_inverse: bisection did not converge (target " + std::to_string(target) + ")");
}

Point cmd_step(const Point& w_t, const Point& grad_psi_at_w, const Point& g_tilde, const RadialCurve& next_curve,
               double domain_radius) {
  require_same_dim(w_t, grad_psi_at_w, "cmd_step");
  require_same_dim(w_t, g_tilde, "cmd_step");
  Point theta = grad_psi_at_w - g_tilde;
  const double n = theta.norm();
  if (n == 0.0) return Point::zeros(w_t.dim());
  const double radius = link_inverse(next_curve, n, domain_radius);
  return (radius / n) * std::move(theta);
}

ScaledEntropySolution scaled_entropy_argmin(const ScaledEntropyProblem& problem) {
  const std::size_t n = problem.prior.size();
  if (n == 0 || problem.costs.size() != n || problem.scales.size() != n) {
    throw std::invalid_argument("scaled_entropy_argmin: prior, costs and scales must share a nonzero length");
  }
  if (!(problem.k > 0.0)) throw std::invalid_argument("scaled_entropy_argmin: k must be positive");
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(problem.prior[i] > 0.0) || !std::isfinite(problem.prior[i])) {
      throw std::invalid_argument("scaled_entropy_argmin: prior entries must be positive");
    }
    if (!(problem.scales[i] > 0.0) || !std::isfinite(problem.scales[i])) {
      throw std::invalid_argument("scaled_entropy_argmin: scales must be positive");
    }
    if (!std::isfinite(problem.costs[i])) throw std::invalid_argument("scaled_entropy_argmin: non-finite cost");
    total += problem.prior[i];
  }
  if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("scaled_entropy_argmin: prior must sum to 1");

  // q_i(lambda) = exp(a_i - b_i lambda); find lambda with log sum_i q_i = 0.
  std::vector<double> a(n), b(n);
  for (std::size_t i = 0; i < n; ++i) {
    b[i] = problem.scales[i] / problem.k;
    a[i] = std::log(problem.prior[i]) - b[i] * problem.costs[i];
  }

  double lambda = 0.0;
  LogSum f = log_sum(a, b, 0.0);
  if (f.value != 0.0) {
    // The log-sum is strictly decreasing in lambda: bracket, then Newton
    // steps safeguarded by bisection.
    double lo, hi;
    double step = 1.0;
    int doublings = 0;
    if (f.value > 0.0) {
      lo = 0.0;
      hi = step;
      while (log_sum(a, b, hi).value > 0.0) {
        if (++doublings > kMaxDoublings) throw ConvergenceError("scaled_entropy_argmin: could not bracket multiplier");
        lo = hi;
        step *= 2.0;
        hi = step;
      }
    } else {
      hi = 0.0;
      lo = -step;
      while (log_sum(a, b, lo).value < 0.0) {
        if (++doublings > kMaxDoublings) throw ConvergenceError("scaled_entropy_argmin: could not bracket multiplier");
        hi = lo;
        step *= 2.0;
        lo = -step;
      }
    }

    lambda = lo;
    bool converged = false;
    for (int it = 0; it < kMaxBisections; ++it) {
      f = log_sum(a, b, lambda);
      if (std::abs(f.value) <= 1e-15) {
        converged = true;
        break;
      }
      (f.value > 0.0 ? lo : hi) = lambda;
      double next = lambda - f.value / f.slope;
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (next == lambda || next == lo || next == hi) {
        converged = true;
        break;
      }
      lambda = next;
    }
    if (!converged) throw ConvergenceError("scaled_entropy_argmin: multiplier search did not converge");
    f = log_sum(a, b, lambda);
  }

  ScaledEntropySolution sol;
  sol.lambda = lambda;
  sol.q.resize(n);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    // Floor at the smallest normal double so the result stays a valid prior.
    sol.q[i] = std::max(std::exp(a[i] - b[i] * lambda - f.value), std::numeric_limits<double>::min());
    s += sol.q[i];
  }
  for (double& qi : sol.q) qi /= s;
  return sol;
}

double scaled_entropy_kkt_residual(const ScaledEntropyProblem& problem, const ScaledEntropySolution& solution) {
  double worst = 0.0;
  for (std::size_t i = 0; i < problem.prior.size(); ++i) {
    const double r = (problem.k / problem.scales[i]) * std::log(solution.q[i] / problem.prior[i]) +
                     problem.costs[i] + solution.lambda;
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

}  // namespace qbolo
