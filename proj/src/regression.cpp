#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qbolo/bench.hpp"

namespace qbolo {

namespace {
constexpr std::uint64_t kTruthStream = 11;
constexpr std::uint64_t kFeatureStream = 12;
constexpr std::uint64_t kNoiseStream = 13;
}  // namespace

LossQuery SquareLoss::query(const Point& w) const {
  require_same_dim(w, x_, "SquareLoss");
  const double r = y_ - dot(x_, w);
  return {0.5 * r * r, (-r) * x_};
}

double SquareLoss::value(const Point& w) const {
  require_same_dim(w, x_, "SquareLoss");
  const double r = y_ - dot(x_, w);
  return 0.5 * r * r;
}

QuadBound SquareLoss::certificate_at(const Point& w) const {
  require_same_dim(w, x_, "SquareLoss");
  const double nx = x_.norm();
  const double nw = w.norm();
  const double slope = nw > 0.0 ? std::abs(dot(x_, w)) / nw * nx : nx * nx;
  return QuadBound(std::abs(y_) * nx, slope);
}

QuadBound SquareLoss::certificate() const { return QuadBound(std::abs(y_) * x_.norm(), x_.squared_norm()); }

RegressionQuery regression_query(const SquareLoss& loss, const Point& w) {
  const QuadBound c = loss.certificate_at(w);
  return {loss.query(w), c.G, c.L};
}

void RegressionSpec::validate() const {
  if (dim == 0) throw std::invalid_argument("RegressionSpec: dim must be >= 1");
  if (T == 0) throw std::invalid_argument("RegressionSpec: T must be >= 1");
  if (!(feature_radius > 0.0)) throw std::invalid_argument("RegressionSpec: feature_radius must be positive");
  if (!(noise_scale >= 0.0)) throw std::invalid_argument("RegressionSpec: noise_scale must be >= 0");
  if (!(truth_radius >= 0.0)) throw std::invalid_argument("RegressionSpec: truth_radius must be >= 0");
  if (!(walk_step >= 0.0)) throw std::invalid_argument("RegressionSpec: walk_step must be >= 0");
}

double RegressionSpec::noise_bound() const {
  switch (noise) {
    case Noise::kNone: return 0.0;
    case Noise::kUniform: return noise_scale;
    case Noise::kGaussian: return 3.0 * noise_scale;
  }
  return 0.0;
}

double RegressionSpec::G_max() const { return feature_radius * (feature_radius * truth_radius + noise_bound()); }

double RegressionSpec::L_max() const { return feature_radius * feature_radius; }

RegressionStream::RegressionStream(RegressionSpec spec)
    : spec_(spec),
      truth_rng_(spec.seed, kTruthStream),
      feature_rng_(spec.seed, kFeatureStream),
      noise_rng_(spec.seed, kNoiseStream) {
  spec_.validate();
  truth_ = spec_.truth_radius * random_direction(truth_rng_);
}

Point RegressionStream::random_direction(Rng& rng) {
  std::vector<double> v(spec_.dim);
  double n2;
  do {
    n2 = 0.0;
    for (double& c : v) {
      c = rng.normal();
      n2 += c * c;
    }
  } while (n2 == 0.0);
  const double inv = 1.0 / std::sqrt(n2);
  for (double& c : v) c *= inv;
  return Point(std::move(v));
}

RegressionRound RegressionStream::next() {
  if (t_ > 0) {
    if (spec_.drift == RegressionSpec::Drift::kPiecewise) {
      // Change points at round floor(i T / (shifts + 1)), i = 1..shifts.
      const std::size_t segments = spec_.shifts + 1;
      const std::size_t prev = (t_ - 1) * segments / spec_.T;
      const std::size_t cur = t_ * segments / spec_.T;
      if (cur != prev && t_ < spec_.T) truth_ = spec_.truth_radius * random_direction(truth_rng_);
    } else {
      Point step(spec_.dim);
      const double s = spec_.walk_step / std::sqrt(static_cast<double>(spec_.dim));
      for (std::size_t i = 0; i < spec_.dim; ++i) step[i] = s * truth_rng_.normal();
      truth_ = project_to_ball(truth_ + step, spec_.truth_radius);
    }
  }

  Point x(spec_.dim);
  if (spec_.features == RegressionSpec::Features::kSphere) {
    x = spec_.feature_radius * random_direction(feature_rng_);
  } else {
    const double half = spec_.feature_radius / std::sqrt(static_cast<double>(spec_.dim));
    for (std::size_t i = 0; i < spec_.dim; ++i) x[i] = feature_rng_.uniform(-half, half);
  }

  double noise = 0.0;
  switch (spec_.noise) {
    case RegressionSpec::Noise::kNone: break;
    case RegressionSpec::Noise::kUniform: noise = noise_rng_.uniform(-spec_.noise_scale, spec_.noise_scale); break;
    case RegressionSpec::Noise::kGaussian:
      noise = std::clamp(spec_.noise_scale * noise_rng_.normal(), -3.0 * spec_.noise_scale, 3.0 * spec_.noise_scale);
      break;
  }

  ++t_;
  const double y = dot(x, truth_) + noise;
  return {SquareLoss(std::move(x), y), truth_};
}

}  // namespace qbolo
