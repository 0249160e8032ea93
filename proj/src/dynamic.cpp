#include "qbolo/dynamic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qbolo {

namespace {

// Doubles `base` until it reaches `cap`; the cap itself closes the axis.
std::vector<double> doubling_axis(double base, double cap) {
  std::vector<double> axis;
  double v = base;
  while (v < cap * (1.0 - 1e-12)) {
    axis.push_back(v);
    v *= 2.0;
  }
  axis.push_back(cap);
  return axis;
}

}  // namespace

void GridConfig::validate() const {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw std::invalid_argument("GridConfig: eps must be positive");
  if (!(K >= 8.0)) throw std::invalid_argument("GridConfig: K must be >= 8");
  if (!(G_max > 0.0) || !std::isfinite(G_max)) throw std::invalid_argument("GridConfig: G_max must be positive");
  if (!(L_max > 0.0) || !std::isfinite(L_max)) {
    throw std::invalid_argument("GridConfig: L_max must be positive (use the static learner when L_max = 0)");
  }
  if (T == 0) throw std::invalid_argument("GridConfig: T must be >= 1");
  if (max_exponent_cap < 0 || max_exponent_cap > 1000) throw std::invalid_argument("GridConfig: exponent cap out of range");
}

GridAxes grid_axes(const GridConfig& cfg) {
  cfg.validate();
  const double T = static_cast<double>(cfg.T);
  const double root_T = std::sqrt(T);
  const double eta_max = 1.0 / (cfg.K * cfg.L_max);

  GridAxes axes;
  double d_min;
  if (cfg.smooth) {
    d_min = cfg.eps / root_T;
    const double base = 1.0 / (cfg.K * cfg.L_max * root_T);
    axes.etas = doubling_axis(base, base * root_T);
  } else {
    d_min = cfg.eps / T;
    const double base = cfg.eps / (cfg.K * (cfg.G_max + cfg.eps * cfg.L_max) * T);
    axes.etas = base >= eta_max ? std::vector<double>{eta_max} : doubling_axis(base, eta_max);
  }

  const auto top = static_cast<std::size_t>(std::min<std::size_t>(cfg.T, static_cast<std::size_t>(cfg.max_exponent_cap)));
  for (std::size_t j = 0; j <= top; ++j) axes.Ds.push_back(std::ldexp(d_min, static_cast<int>(j)));
  return axes;
}

std::vector<GridPoint> build_grid(const GridConfig& cfg) {
  const GridAxes axes = grid_axes(cfg);
  std::vector<GridPoint> grid;
  grid.reserve(axes.etas.size() * axes.Ds.size());
  for (double eta : axes.etas) {
    for (double D : axes.Ds) grid.push_back({eta, D});
  }
  return grid;
}

ExpertTau ExpertTau::make(double eta, double D, double G_max, std::size_t dim) {
  if (!(eta > 0.0) || !(D > 0.0) || !(G_max > 0.0)) throw std::invalid_argument("ExpertTau: eta, D, G_max must be positive");
  ExpertTau e;
  e.eta = eta;
  e.D = D;
  e.mu = 1.0 / (2.0 * D * (G_max + D / eta));
  e.w = Point::zeros(dim);
  return e;
}

ExpertTau expert_step(const ExpertTau& tau, const Point& g, double L_t, double K) {
  require_same_dim(tau.w, g, "expert_step");
  if (K * tau.eta * L_t > 1.0 + 1e-12) {
    throw std::invalid_argument("expert_step: K * eta * L_t exceeds 1 (step size outside the grid)");
  }
  ExpertTau next = tau;
  next.w.axpy(-tau.eta * (1.0 + K * tau.eta * L_t), g);
  next.w = project_to_ball(std::move(next.w), tau.D);
  return next;
}

DynState dyn_init(const DynConfig& config) {
  if (config.dim == 0) throw std::invalid_argument("DynConfig: dim must be >= 1");
  DynState s;
  s.config = config;
  for (const GridPoint& gp : build_grid(config.grid)) {
    s.experts.push_back(ExpertTau::make(gp.eta, gp.D, config.grid.G_max, config.dim));
  }
  std::vector<double> mu;
  mu.reserve(s.experts.size());
  for (const ExpertTau& e : s.experts) mu.push_back(e.mu);
  s.weights_config = ExpertsConfig::with_defaults(std::move(mu), config.grid.T, config.k);
  s.weights_config.policy = config.policy;
  s.weights = experts_init(s.weights_config);
  s.logs.resize(s.experts.size());
  return s;
}

Point dyn_play(const DynState& state) {
  Point w = Point::zeros(state.config.dim);
  for (std::size_t i = 0; i < state.experts.size(); ++i) w.axpy(state.weights.p[i], state.experts[i].w);
  return w;
}

DynState dyn_round(DynState state, const RoundLoss& loss, const QuadBound& bounds) {
  const GridConfig& grid = state.config.grid;
  const double L_t = bounds.L;
  const bool in_range = bounds.G <= grid.G_max * (1.0 + 1e-12) && L_t <= grid.L_max * (1.0 + 1e-12);

  const double ref_value = loss.value(Point::zeros(state.config.dim));
  std::vector<double> rel(state.experts.size());
  bool violated = !in_range;
  for (std::size_t i = 0; i < state.experts.size(); ++i) {
    ExpertTau& e = state.experts[i];
    const LossQuery q = loss.query(e.w);
    require_same_dim(q.grad, e.w, "dyn_round");
    if (!qb_check(q.grad, e.w, bounds)) violated = true;

    rel[i] = q.value - ref_value;
    ExpertLog& log = state.logs[i];
    log.sum_g2 += q.grad.squared_norm();
    log.sum_L_loss += L_t * q.value;
    log.sum_loss += q.value;
    log.sum_rel_sq += rel[i] * rel[i];
    if (state.config.keep_history) log.rel_losses.push_back(rel[i]);

    e = expert_step(e, q.grad, std::min(L_t, grid.L_max), grid.K);
  }

  if (violated) {
    ++state.certificate_violations;
    std::ostringstream msg;
    msg << "dyn_round round " << state.t << ": certificate (G=" << bounds.G << ", L=" << L_t
        << ") fails at some expert iterate (G_max=" << grid.G_max << ", L_max=" << grid.L_max << ")";
    if (state.config.policy == ViolationPolicy::kStrict) throw CertificateError(msg.str());
    warn(msg.str());
  }

  state.weights = experts_update(state.weights_config, state.weights, rel);
  state.L_history.push_back(L_t);
  ++state.t;
  return state;
}

double grid_c_s(const std::vector<double>& mu) {
  double s1 = 0.0, s2 = 0.0;
  for (double m : mu) {
    s1 += m;
    s2 += m * m;
  }
  return s1 / s2;
}

double grid_lambda(const std::vector<double>& mu, std::size_t tau) {
  if (tau >= mu.size()) throw std::out_of_range("grid_lambda: expert index");
  double s2 = 0.0;
  for (double m : mu) s2 += m * m;
  return std::log(s2 / (mu[tau] * mu[tau])) + 1.0;
}

double untuned_bound_base(const DynState& run, std::size_t tau) {
  if (tau >= run.experts.size()) throw std::out_of_range("untuned_bound: expert index");
  const ExpertTau& e = run.experts[tau];
  const double k = run.config.k;
  const double lambda = grid_lambda(run.weights_config.mu, tau);
  const ExpertLog& log = run.logs[tau];
  return 2.0 * k * grid_c_s(run.weights_config.mu) + 2.0 * k * e.D * run.config.grid.G_max * lambda +
         4.0 * k * e.D * e.D * lambda / (2.0 * e.eta) - run.config.grid.K * e.eta * log.sum_L_loss +
         4.0 * e.eta * log.sum_g2;
}

double untuned_bound(const DynState& run, std::size_t tau, const ComparatorPath& u,
                     const std::vector<double>& comparator_losses) {
  if (tau >= run.experts.size()) throw std::out_of_range("untuned_bound: expert index");
  const std::size_t T = run.L_history.size();
  if (u.size() != T || comparator_losses.size() != T) {
    throw std::invalid_argument("untuned_bound: comparator path and losses must cover every completed round");
  }
  const ExpertTau& e = run.experts[tau];
  if (u.max_norm() > e.D * (1.0 + 1e-12)) {
    throw std::invalid_argument("untuned_bound: comparator leaves the expert's ball");
  }

  double sum_L_comp = 0.0;
  for (std::size_t t = 0; t < T; ++t) sum_L_comp += run.L_history[t] * comparator_losses[t];
  const double uT = u[T - 1].norm();
  return untuned_bound_base(run, tau) + (uT * uT + 2.0 * e.D * path_length(u)) / (2.0 * e.eta) +
         run.config.grid.K * e.eta * sum_L_comp;
}

}  // namespace qbolo
