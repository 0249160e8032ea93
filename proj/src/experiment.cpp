#include "qbolo/experiment.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>

#include "qbolo/bench.hpp"
#include "qbolo/dynamic.hpp"
#include "qbolo/qb_learner.hpp"
#include "qbolo/saddle.hpp"

namespace qbolo {

namespace {

using json = nlohmann::json;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double num(const json& j, const char* key, double def) {
  if (!j.contains(key)) return def;
  const json& v = j.at(key);
  if (!v.is_number()) throw ConfigError(std::string("config: '") + key + "' must be a number");
  return v.get<double>();
}

// Integers built in code are signed; parsed nonnegative ones are unsigned.
bool is_count(const json& v) { return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0); }

std::size_t count(const json& j, const char* key, std::size_t def) {
  if (!j.contains(key)) return def;
  const json& v = j.at(key);
  if (!is_count(v)) throw ConfigError(std::string("config: '") + key + "' must be a nonnegative integer");
  return v.get<std::size_t>();
}

bool flag(const json& j, const char* key, bool def) {
  if (!j.contains(key)) return def;
  const json& v = j.at(key);
  if (!v.is_boolean()) throw ConfigError(std::string("config: '") + key + "' must be a boolean");
  return v.get<bool>();
}

std::string text(const json& j, const char* key, const std::string& def) {
  if (!j.contains(key)) return def;
  const json& v = j.at(key);
  if (!v.is_string()) throw ConfigError(std::string("config: '") + key + "' must be a string");
  return v.get<std::string>();
}

const json& section(const json& j, const char* key) {
  static const json empty = json::object();
  if (!j.contains(key)) return empty;
  if (!j.at(key).is_object()) throw ConfigError(std::string("config: '") + key + "' must be an object");
  return j.at(key);
}

Point point_from(const json& v, const char* what) {
  if (!v.is_array() || v.empty()) throw ConfigError(std::string("config: '") + what + "' must be a nonempty array");
  std::vector<double> c;
  for (const json& e : v) {
    if (!e.is_number()) throw ConfigError(std::string("config: '") + what + "' must contain numbers");
    c.push_back(e.get<double>());
  }
  return Point(std::move(c));
}

enum class Scenario { kStaticLB, kDynamicLB, kRegression, kBilinearSaddle };
enum class LearnerKind { kQB, kDynamic, kBaseline };

Scenario parse_scenario(const std::string& s) {
  if (s == "static_lb") return Scenario::kStaticLB;
  if (s == "dynamic_lb") return Scenario::kDynamicLB;
  if (s == "regression") return Scenario::kRegression;
  if (s == "bilinear_saddle") return Scenario::kBilinearSaddle;
  throw ConfigError("config: unknown scenario '" + s + "'");
}

LearnerKind parse_learner(const std::string& s) {
  if (s == "qb") return LearnerKind::kQB;
  if (s == "dynamic") return LearnerKind::kDynamic;
  if (s == "baseline_ogd") return LearnerKind::kBaseline;
  throw ConfigError("config: unknown learner '" + s + "'");
}

ViolationPolicy parse_policy(const json& lp) {
  const std::string p = text(lp, "policy", "warn");
  if (p == "warn") return ViolationPolicy::kWarn;
  if (p == "strict") return ViolationPolicy::kStrict;
  throw ConfigError("config: policy must be 'warn' or 'strict'");
}

// Comparator statistics over a prefix of rounds, for the bound evaluators.
struct PrefixStats {
  bool constant = true;
  double u_norm = 0.0;
  double max_norm = 0.0;
  double path_length = 0.0;
  /// sum_s L_s l_s(u_s)
  double sum_L_loss = 0.0;
};

// Uniform front over the three learners, plus the per-round snapshots the
// bound evaluators need after the run.
class Driver {
 public:
  Driver(LearnerKind kind, const json& lp, std::size_t dim, std::size_t T, double G_max, double L_max) : kind_(kind) {
    const ViolationPolicy policy = parse_policy(lp);
    switch (kind) {
      case LearnerKind::kQB: {
        QBConfig c;
        c.eps = num(lp, "eps", 1.0);
        c.G_max = num(lp, "G_max", G_max);
        c.L_max = num(lp, "L_max", L_max);
        c.dim = dim;
        c.k = num(lp, "k", 3.0);
        c.kappa = num(lp, "kappa", 4.0);
        c.c = num(lp, "c", 4.0);
        c.domain_radius = num(lp, "domain_radius", kUnbounded);
        c.policy = policy;
        qb_.emplace(c);
        qb_snaps_.reserve(T);
        break;
      }
      case LearnerKind::kDynamic: {
        DynConfig c;
        c.grid.eps = num(lp, "eps", 1.0);
        c.grid.K = num(lp, "K", 8.0);
        c.grid.G_max = num(lp, "G_max", G_max);
        c.grid.L_max = num(lp, "L_max", L_max);
        c.grid.T = T;
        c.grid.smooth = flag(lp, "smooth", false);
        c.grid.max_exponent_cap = static_cast<int>(count(lp, "max_exponent_cap", 40));
        c.dim = dim;
        c.k = num(lp, "k", 4.5);
        c.policy = policy;
        dyn_.emplace(c);
        const DynState& s = dyn_->state();
        const std::vector<double>& mu = s.weights_config.mu;
        const double cs = grid_c_s(mu);
        for (std::size_t i = 0; i < s.experts.size(); ++i) {
          const ExpertTau& e = s.experts[i];
          const double lam = grid_lambda(mu, i);
          dyn_const_.push_back(2.0 * c.k * cs + 2.0 * c.k * e.D * c.grid.G_max * lam +
                               4.0 * c.k * e.D * e.D * lam / (2.0 * e.eta));
        }
        dyn_base_.reserve(T * s.experts.size());
        break;
      }
      case LearnerKind::kBaseline:
        eta_ = num(lp, "eta", 1.0 / std::sqrt(static_cast<double>(T)));
        radius_ = num(lp, "D", kUnbounded);
        if (!(eta_ > 0.0)) throw ConfigError("config: baseline eta must be positive");
        ogd_w_ = Point::zeros(dim);
        break;
    }
  }

  Point play() const {
    switch (kind_) {
      case LearnerKind::kQB: return qb_->play();
      case LearnerKind::kDynamic: return dyn_->play();
      case LearnerKind::kBaseline: return ogd_w_;
    }
    return {};
  }

  /// `at_w` certifies g at the played point; `global` certifies the whole
  /// round loss (used by the dynamic learner, which queries many points).
  void update(const RoundLoss& loss, const Point& g, const QuadBound& at_w, const QuadBound& global) {
    switch (kind_) {
      case LearnerKind::kQB:
        qb_->update(g, at_w.G, at_w.L);
        qb_snaps_.push_back(qb_->state());
        break;
      case LearnerKind::kDynamic: {
        dyn_->update(loss, global);
        const DynState& s = dyn_->state();
        const double K = s.config.grid.K;
        for (std::size_t i = 0; i < s.experts.size(); ++i) {
          const ExpertTau& e = s.experts[i];
          dyn_base_.push_back(dyn_const_[i] - K * e.eta * s.logs[i].sum_L_loss + 4.0 * e.eta * s.logs[i].sum_g2);
        }
        break;
      }
      case LearnerKind::kBaseline: ogd_w_ = baseline_ogd_step(ogd_w_, g, eta_, radius_); break;
    }
  }

  /// Bound on regret over the first t rounds against a comparator with the
  /// given prefix statistics; NaN when no guarantee applies.
  double bound(std::size_t t, const PrefixStats& s) const {
    switch (kind_) {
      case LearnerKind::kQB:
        if (!s.constant) return kNaN;
        return qb_regret_bound(qb_->config(), qb_snaps_[t - 1], s.u_norm);
      case LearnerKind::kDynamic: {
        const DynState& st = dyn_->state();
        const std::size_t n = st.experts.size();
        double best = kNaN;
        for (std::size_t i = 0; i < n; ++i) {
          const ExpertTau& e = st.experts[i];
          if (s.max_norm > e.D * (1.0 + 1e-12)) continue;
          const double b = dyn_base_[(t - 1) * n + i] + (s.u_norm * s.u_norm + 2.0 * e.D * s.path_length) / (2.0 * e.eta) +
                           st.config.grid.K * e.eta * s.sum_L_loss;
          if (std::isnan(best) || b < best) best = b;
        }
        return best;
      }
      case LearnerKind::kBaseline: return kNaN;
    }
    return kNaN;
  }

  std::size_t certificate_violations() const {
    if (qb_) return qb_->state().certificate_violations;
    if (dyn_) return dyn_->state().certificate_violations;
    return 0;
  }

  std::size_t scale_violations() const { return dyn_ ? dyn_->state().weights.scale_violations : 0; }

 private:
  LearnerKind kind_;
  std::optional<QBLearner> qb_;
  std::vector<QBState> qb_snaps_;
  std::optional<DynamicLearner> dyn_;
  std::vector<double> dyn_const_;
  std::vector<double> dyn_base_;
  Point ogd_w_;
  double eta_ = 0.0;
  double radius_ = kUnbounded;
};

struct NamedPath {
  std::string id;
  std::vector<Point> points;
  /// Per-round lower bound on regret (empty when none applies).
  double lower_per_round = kNaN;
};

// Post-hoc regret and bound traces for a non-saddle run.
void evaluate_comparators(RunTrace& trace, const Driver& driver, const std::vector<std::shared_ptr<RoundLoss>>& losses,
                          const std::vector<double>& L_history, const std::vector<NamedPath>& paths) {
  const std::size_t T = losses.size();
  for (const NamedPath& p : paths) {
    ComparatorTrace ct;
    ct.id = p.id;
    PrefixStats s;
    double regret = 0.0;
    for (std::size_t t = 0; t < T; ++t) {
      const Point& u = p.points[t];
      const double lu = losses[t]->value(u);
      regret += trace.loss_played[t] - lu;
      if (t > 0) {
        const double step = distance(u, p.points[t - 1]);
        s.path_length += step;
        if (step != 0.0) s.constant = false;
      }
      s.u_norm = u.norm();
      s.max_norm = std::max(s.max_norm, s.u_norm);
      s.sum_L_loss += L_history[t] * lu;

      ct.regret.push_back(regret);
      ct.bound.push_back(driver.bound(t + 1, s));
      ct.lower.push_back(std::isnan(p.lower_per_round) ? kNaN : p.lower_per_round * static_cast<double>(t + 1));
    }
    trace.comparators.push_back(std::move(ct));
    trace.path_length.push_back(s.path_length);
    trace.max_norm.push_back(s.max_norm);
  }
}

RunTrace run_linear_or_convex(Scenario scenario, LearnerKind learner, const json& config, std::size_t T,
                              std::uint64_t seed) {
  const json& sp = section(config, "scenario_params");
  const json& lp = section(config, "learner_params");

  RunTrace trace;
  std::vector<std::shared_ptr<RoundLoss>> losses;
  std::vector<double> L_history;
  std::vector<NamedPath> paths;
  losses.reserve(T);

  auto record = [&](Driver& d, std::shared_ptr<RoundLoss> loss, const Point& w, const QuadBound& at_w,
                    const QuadBound& global) {
    const LossQuery q = loss->query(w);
    trace.loss_played.push_back(q.value);
    trace.w_norm.push_back(w.norm());
    d.update(*loss, q.grad, at_w, global);
    L_history.push_back(global.L);
    losses.push_back(std::move(loss));
  };

  std::optional<Driver> driver;
  switch (scenario) {
    case Scenario::kStaticLB: {
      if (learner == LearnerKind::kDynamic) throw ConfigError("config: static_lb supports learners qb and baseline_ogd");
      const double G = num(sp, "G", 1.0);
      const double L = num(sp, "L", 1.0);
      StaticLBAdversary adv(G, L, T, seed);
      driver.emplace(learner, lp, 2, T, G, L);
      for (std::size_t t = 0; t < T; ++t) {
        const Point w = driver->play();
        auto loss = std::make_shared<LinearLoss>(adv.next(w));
        record(*driver, loss, w, QuadBound(G, L), QuadBound(G, L));
      }
      paths.push_back({"zero", std::vector<Point>(T, Point::zeros(2))});
      paths.push_back({"adversary", std::vector<Point>(T, adv.comparator())});
      break;
    }
    case Scenario::kDynamicLB: {
      const double G = num(sp, "G", 1.0);
      const double L = num(sp, "L", 1.0);
      const double M = num(sp, "M", std::max(1.0, G / L));
      const double mu_exp = num(sp, "mu_exp", 0.5);
      DynamicLBAdversary adv(G, L, M, mu_exp, T);
      const QuadBound cert(0.5 * G + 0.5 * adv.sigma() * L, L);
      driver.emplace(learner, lp, 2, T, cert.G, cert.L);
      NamedPath path{"adversary", {}, adv.per_round_regret()};
      for (std::size_t t = 0; t < T; ++t) {
        const Point w = driver->play();
        auto loss = std::make_shared<DynamicLBLoss>(adv.next(w));
        path.points.push_back(loss->comparator());
        record(*driver, loss, w, cert, cert);
      }
      paths.push_back(std::move(path));
      break;
    }
    case Scenario::kRegression: {
      RegressionSpec spec;
      spec.dim = count(config, "dim", 2);
      spec.T = T;
      const std::string features = text(sp, "features", "sphere");
      if (features == "sphere") {
        spec.features = RegressionSpec::Features::kSphere;
      } else if (features == "cube") {
        spec.features = RegressionSpec::Features::kCube;
      } else {
        throw ConfigError("config: features must be 'sphere' or 'cube'");
      }
      spec.feature_radius = num(sp, "feature_radius", 1.0);
      const std::string noise = text(sp, "noise", "uniform");
      if (noise == "none") {
        spec.noise = RegressionSpec::Noise::kNone;
      } else if (noise == "uniform") {
        spec.noise = RegressionSpec::Noise::kUniform;
      } else if (noise == "gaussian") {
        spec.noise = RegressionSpec::Noise::kGaussian;
      } else {
        throw ConfigError("config: noise must be 'none', 'uniform' or 'gaussian'");
      }
      spec.noise_scale = num(sp, "noise_scale", 0.1);
      const std::string drift = text(sp, "drift", "piecewise");
      if (drift == "piecewise") {
        spec.drift = RegressionSpec::Drift::kPiecewise;
      } else if (drift == "random_walk") {
        spec.drift = RegressionSpec::Drift::kRandomWalk;
      } else {
        throw ConfigError("config: drift must be 'piecewise' or 'random_walk'");
      }
      spec.shifts = count(sp, "shifts", 2);
      spec.walk_step = num(sp, "walk_step", 0.01);
      spec.truth_radius = num(sp, "truth_radius", 1.0);
      spec.seed = seed;

      RegressionStream stream(spec);
      driver.emplace(learner, lp, spec.dim, T, spec.G_max(), spec.L_max());
      NamedPath truth{"truth", {}};
      for (std::size_t t = 0; t < T; ++t) {
        const Point w = driver->play();
        RegressionRound r = stream.next();
        truth.points.push_back(r.truth);
        const QuadBound at_w = r.loss.certificate_at(w);
        const QuadBound global = r.loss.certificate();
        record(*driver, std::make_shared<SquareLoss>(std::move(r.loss)), w, at_w, global);
      }
      const Point last = truth.points.back();
      paths.push_back(std::move(truth));
      paths.push_back({"zero", std::vector<Point>(T, Point::zeros(spec.dim))});
      paths.push_back({"final", std::vector<Point>(T, last)});
      break;
    }
    case Scenario::kBilinearSaddle: break;
  }

  evaluate_comparators(trace, *driver, losses, L_history, paths);
  trace.certificate_violations = driver->certificate_violations();
  trace.scale_violations = driver->scale_violations();
  return trace;
}

Matrix matrix_from(const json& v) {
  if (!v.is_array() || v.empty() || !v.front().is_array()) throw ConfigError("config: 'B' must be an array of rows");
  const std::size_t cols = v.front().size();
  std::vector<double> data;
  for (const json& row : v) {
    if (!row.is_array() || row.size() != cols || cols == 0) throw ConfigError("config: 'B' rows must share a nonzero length");
    for (const json& e : row) {
      if (!e.is_number()) throw ConfigError("config: 'B' must contain numbers");
      data.push_back(e.get<double>());
    }
  }
  return Matrix(v.size(), cols, std::move(data));
}

Component component_from(const json& sp, const char* key) {
  const json& c = section(sp, key);
  const std::string kind = text(c, "kind", "zero");
  if (kind == "zero") return Component::zero();
  if (kind == "quadratic") return Component::quadratic(num(c, "coef", 1.0));
  if (kind == "norm") return Component::norm(num(c, "coef", 1.0));
  throw ConfigError(std::string("config: '") + key + "' kind must be zero, quadratic or norm");
}

RunTrace run_saddle(LearnerKind learner, const json& config, std::size_t T) {
  if (learner != LearnerKind::kQB) throw ConfigError("config: bilinear_saddle supports learner qb only");
  const json& sp = section(config, "scenario_params");
  const json& lp = section(config, "learner_params");

  BilinearProblem p;
  p.B = sp.contains("B") ? matrix_from(sp.at("B")) : Matrix::identity(1);
  p.ux = sp.contains("ux") ? point_from(sp.at("ux"), "ux") : Point::zeros(p.B.rows());
  p.uy = sp.contains("uy") ? point_from(sp.at("uy"), "uy") : Point::zeros(p.B.cols());
  p.Fx = component_from(sp, "Fx");
  p.Fy = component_from(sp, "Fy");
  const BilinearOracle oracle(p);

  const Point x_ref = sp.contains("x_ref") ? point_from(sp.at("x_ref"), "x_ref")
                                           : Point(std::vector<double>(p.B.rows(), 1.0));
  const Point y_ref = sp.contains("y_ref") ? point_from(sp.at("y_ref"), "y_ref")
                                           : Point(std::vector<double>(p.B.cols(), 1.0));
  require_same_dim(x_ref, p.ux, "x_ref");
  require_same_dim(y_ref, p.uy, "y_ref");

  const QuadBound composed = compose_qb(bilinear_qb(p));
  QBConfig cfg = saddle_learner_config(composed, num(lp, "eps", 1.0), num(lp, "g_floor", 1.0));
  cfg.k = num(lp, "k", 3.0);
  cfg.kappa = num(lp, "kappa", 4.0);
  cfg.c = num(lp, "c", 4.0);
  cfg.policy = parse_policy(lp);
  SaddleRun run(oracle, cfg, composed);

  RunTrace trace;
  ComparatorTrace ct;
  ct.id = "reference";
  const double ref_norm = concat(x_ref, y_ref).norm();
  for (std::size_t t = 0; t < T; ++t) {
    trace.w_norm.push_back(run.learner().play().norm());
    const double before = run.linear_loss_sum();
    run.step();
    trace.loss_played.push_back(run.linear_loss_sum() - before);
    ct.regret.push_back(run.linear_regret(x_ref, y_ref));
    ct.bound.push_back(qb_regret_bound(run.learner().config(), run.learner().state(), ref_norm));
    ct.lower.push_back(kNaN);
    ct.gap_t.push_back(static_cast<double>(t + 1) * duality_gap(oracle, run.xbar(), run.ybar(), x_ref, y_ref));
  }
  trace.comparators.push_back(std::move(ct));
  trace.path_length.push_back(0.0);
  trace.max_norm.push_back(ref_norm);
  trace.certificate_violations = run.learner().state().certificate_violations;
  return trace;
}

std::string read_file(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + file.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& file, const std::string& content) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  out << content;
  if (!out) throw std::runtime_error("write failed for " + file.string());
}

std::vector<std::size_t> horizons_of(const json& config) {
  std::vector<std::size_t> out;
  if (config.contains("horizons")) {
    const json& h = config.at("horizons");
    if (!h.is_array() || h.empty()) throw ConfigError("config: 'horizons' must be a nonempty array");
    for (const json& v : h) {
      if (!is_count(v) || v.get<std::size_t>() == 0) throw ConfigError("config: horizons must be positive integers");
      out.push_back(v.get<std::size_t>());
    }
  } else {
    const std::size_t T = count(config, "T", 0);
    if (T == 0) throw ConfigError("config: need 'T' or 'horizons'");
    out.push_back(T);
  }
  return out;
}

std::vector<std::uint64_t> seeds_of(const json& config) {
  std::vector<std::uint64_t> out;
  if (config.contains("seeds")) {
    const json& s = config.at("seeds");
    if (!s.is_array() || s.empty()) throw ConfigError("config: 'seeds' must be a nonempty array");
    for (const json& v : s) {
      if (!is_count(v)) throw ConfigError("config: seeds must be nonnegative integers");
      out.push_back(v.get<std::uint64_t>());
    }
  } else {
    out.push_back(count(config, "seed", 0));
  }
  return out;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

RunTrace simulate(const json& config, std::size_t T, std::uint64_t seed) {
  if (!config.is_object()) throw ConfigError("config: top level must be an object");
  if (T == 0) throw ConfigError("config: T must be positive");
  const Scenario scenario = parse_scenario(text(config, "scenario", ""));
  const LearnerKind learner = parse_learner(text(config, "learner", ""));

  std::size_t warnings = 0;
  WarningSink previous = set_warning_sink([&warnings](std::string_view) { ++warnings; });
  RunTrace trace;
  try {
    trace = scenario == Scenario::kBilinearSaddle ? run_saddle(learner, config, T)
                                                  : run_linear_or_convex(scenario, learner, config, T, seed);
  } catch (...) {
    set_warning_sink(std::move(previous));
    throw;
  }
  set_warning_sink(std::move(previous));

  trace.scenario = text(config, "scenario", "");
  trace.learner = text(config, "learner", "");
  trace.T = T;
  trace.seed = seed;
  trace.warnings = warnings;
  return trace;
}

void write_rounds_csv(const RunTrace& trace, const std::filesystem::path& file) {
  std::string out;
  out += "# ";
  out += kCsvSchema;
  out += "\nt,loss_played,w_norm";
  for (const ComparatorTrace& c : trace.comparators) {
    out += ",regret_" + c.id + ",bound_" + c.id + ",lower_" + c.id;
    if (!c.gap_t.empty()) out += ",gapT_" + c.id;
  }
  out += '\n';
  for (std::size_t t = 0; t < trace.loss_played.size(); ++t) {
    out += std::to_string(t + 1);
    out += ',' + format_double(trace.loss_played[t]);
    out += ',' + format_double(trace.w_norm[t]);
    for (const ComparatorTrace& c : trace.comparators) {
      out += ',' + format_double(c.regret[t]);
      out += ',' + format_double(c.bound[t]);
      out += ',' + format_double(c.lower[t]);
      if (!c.gap_t.empty()) out += ',' + format_double(c.gap_t[t]);
    }
    out += '\n';
  }
  write_file(file, out);
}

nlohmann::ordered_json summarize(const RunTrace& trace) {
  nlohmann::ordered_json j;
  j["schema"] = "qbolo-summary v1";
  j["scenario"] = trace.scenario;
  j["learner"] = trace.learner;
  j["T"] = trace.T;
  j["seed"] = trace.seed;
  j["prng"] = std::string(Rng::kAlgorithm);

  std::size_t bound_total = 0, lower_total = 0, gap_total = 0;
  nlohmann::ordered_json comps = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < trace.comparators.size(); ++i) {
    const ComparatorTrace& c = trace.comparators[i];
    std::size_t bv = 0, lv = 0, gv = 0;
    for (std::size_t t = 0; t < c.regret.size(); ++t) {
      if (!std::isnan(c.bound[t]) && c.regret[t] > c.bound[t] + 1e-9 * (1.0 + std::abs(c.bound[t]))) ++bv;
      if (!std::isnan(c.lower[t]) && c.regret[t] < c.lower[t] - 1e-9 * (1.0 + std::abs(c.lower[t]))) ++lv;
      if (!c.gap_t.empty() && c.gap_t[t] > c.regret[t] + 1e-9 * (1.0 + std::abs(c.regret[t]))) ++gv;
    }
    bound_total += bv;
    lower_total += lv;
    gap_total += gv;
    nlohmann::ordered_json e;
    const auto last = [](const std::vector<double>& v) { return v.empty() ? kNaN : v.back(); };
    e["regret"] = last(c.regret);
    e["bound"] = last(c.bound);
    e["lower"] = last(c.lower);
    if (!c.gap_t.empty()) e["gapT"] = last(c.gap_t);
    e["path_length"] = trace.path_length[i];
    e["max_norm"] = trace.max_norm[i];
    e["bound_violations"] = bv;
    e["lower_violations"] = lv;
    if (!c.gap_t.empty()) e["gap_violations"] = gv;
    comps[c.id] = std::move(e);
  }
  j["comparators"] = std::move(comps);
  j["bound_violations"] = bound_total;
  j["lower_violations"] = lower_total;
  j["gap_violations"] = gap_total;
  j["certificate_violations"] = trace.certificate_violations;
  j["scale_violations"] = trace.scale_violations;
  j["warnings"] = trace.warnings;
  return j;
}

std::vector<std::filesystem::path> run_experiment(const std::filesystem::path& config_file,
                                                  const std::filesystem::path& out_dir) {
  json config;
  try {
    config = json::parse(read_file(config_file));
  } catch (const json::parse_error& e) {
    throw ConfigError("config: invalid JSON in " + config_file.string() + ": " + e.what());
  }
  if (!config.is_object()) throw ConfigError("config: top level must be an object");
  const auto horizons = horizons_of(config);
  const auto seeds = seeds_of(config);
  // Fail on unknown names before any output is written.
  parse_scenario(text(config, "scenario", ""));
  parse_learner(text(config, "learner", ""));

  std::filesystem::create_directories(out_dir);
  std::vector<std::filesystem::path> dirs;
  nlohmann::ordered_json index;
  index["schema"] = "qbolo-index v1";
  index["config"] = config;
  index["runs"] = nlohmann::ordered_json::array();
  for (std::size_t T : horizons) {
    for (std::uint64_t seed : seeds) {
      const RunTrace trace = simulate(config, T, seed);
      const std::string name = "T" + std::to_string(T) + "_seed" + std::to_string(seed);
      const std::filesystem::path dir = out_dir / name;
      std::filesystem::create_directories(dir);
      write_rounds_csv(trace, dir / "rounds.csv");
      write_file(dir / "summary.json", summarize(trace).dump(2) + "\n");
      index["runs"].push_back({{"T", T}, {"seed", seed}, {"dir", name}});
      dirs.push_back(dir);
    }
  }
  write_file(out_dir / "index.json", index.dump(2) + "\n");
  return dirs;
}

}  // namespace qbolo
