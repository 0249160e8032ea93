#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "qbolo/core.hpp"
#include "qbolo/mirror.hpp"
#include "qbolo/rng.hpp"

namespace qbolo {

/// Randomized linear adversary in R^2 that forces quadratic-in-|u| regret:
/// g_t = (-G, -eps_t L ||w_t||) with independent random signs eps_t.
class StaticLBAdversary {
 public:
  /// Requires G > 0 and L > 0.
  StaticLBAdversary(double G, double L, std::size_t T, std::uint64_t seed);

  Point next(const Point& w);

  /// U = (G/L) sqrt(2T)
  double U() const noexcept;
  /// (U, s U) with s = sign(sum_t eps_t ||w_t||), s = +1 on a tie.
  Point comparator() const;
  std::size_t rounds() const noexcept { return t_; }

 private:
  double G_;
  double L_;
  std::size_t T_;
  Rng rng_;
  std::size_t t_ = 0;
  double signed_sum_ = 0.0;
};

/// l(w) = -(G/2) <xi, w> + (L/4) (sigma - <xi, w>)^2
class DynamicLBLoss final : public RoundLoss {
 public:
  DynamicLBLoss(Point xi, double G, double L, double sigma);
  LossQuery query(const Point& w) const override;
  const Point& xi() const noexcept { return xi_; }
  /// u_t = sigma xi_t
  Point comparator() const { return sigma_ * xi_; }
  /// (G/2 + sigma L/2, L)
  QuadBound certificate() const;

 private:
  Point xi_;
  double G_;
  double L_;
  double sigma_;
};

class DynamicLBAdversary {
 public:
  /// Requires G, L, M > 0, G/L <= M and mu_exp in [0, 1/2].
  DynamicLBAdversary(double G, double L, double M, double mu_exp, std::size_t T);

  /// xi_t is w_t/||w_t|| rotated 90 degrees counter-clockwise (e_1 at w_t = 0).
  DynamicLBLoss next(const Point& w) const;
  double sigma() const noexcept { return sigma_; }
  /// Per-round regret of a play orthogonal to xi_t: G sigma/2 + L sigma^2/4.
  double per_round_regret() const noexcept;

 private:
  double G_;
  double L_;
  double sigma_;
};

/// l(w) = (y - <x, w>)^2 / 2
class SquareLoss final : public RoundLoss {
 public:
  SquareLoss(Point x, double y) : x_(std::move(x)), y_(y) {}
  LossQuery query(const Point& w) const override;
  double value(const Point& w) const override;

  /// (|y| ||x||, |<x, w/||w||>| ||x||), with ||x||^2 as slope at w = 0.
  QuadBound certificate_at(const Point& w) const;
  /// (|y| ||x||, ||x||^2): valid at every w; also the smoothness constant.
  QuadBound certificate() const;
  const Point& x() const noexcept { return x_; }
  double y() const noexcept { return y_; }

 private:
  Point x_;
  double y_;
};

struct RegressionSpec {
  enum class Features { kSphere, kCube };
  enum class Noise { kNone, kUniform, kGaussian };
  enum class Drift { kPiecewise, kRandomWalk };

  std::size_t dim = 2;
  std::size_t T = 1000;
  Features features = Features::kSphere;
  /// ||x_t|| <= feature_radius (equality on the sphere).
  double feature_radius = 1.0;
  Noise noise = Noise::kUniform;
  /// Half-width for uniform noise, standard deviation for Gaussian noise
  /// (Gaussian draws are truncated at 3 standard deviations).
  double noise_scale = 0.1;
  Drift drift = Drift::kPiecewise;
  /// Number of change points for piecewise drift, evenly spaced.
  std::size_t shifts = 2;
  /// Per-round standard deviation of random-walk increments.
  double walk_step = 0.01;
  /// ||w*_t|| <= truth_radius at all times.
  double truth_radius = 1.0;
  std::uint64_t seed = 0;

  void validate() const;
  double noise_bound() const;
  /// max_t |y_t| ||x_t|| <= r (r M + noise_bound)
  double G_max() const;
  /// max_t ||x_t||^2
  double L_max() const;
};

struct RegressionRound {
  SquareLoss loss;
  Point truth;
};

/// Drifting linear-regression stream. Truth, features and noise draw from
/// separate random streams of the same seed.
class RegressionStream {
 public:
  explicit RegressionStream(RegressionSpec spec);

  RegressionRound next();
  const RegressionSpec& spec() const noexcept { return spec_; }
  std::size_t rounds() const noexcept { return t_; }

 private:
  Point random_direction(Rng& rng);

  RegressionSpec spec_;
  Rng truth_rng_;
  Rng feature_rng_;
  Rng noise_rng_;
  Point truth_;
  std::size_t t_ = 0;
};

/// Loss query plus per-round certificates for a regression round at w.
struct RegressionQuery {
  LossQuery query;
  double G = 0.0;
  double L = 0.0;
};

RegressionQuery regression_query(const SquareLoss& loss, const Point& w);

/// Projected gradient step with a fixed step size (no projection when D is infinite).
Point baseline_ogd_step(const Point& w, const Point& g, double eta, double D = kUnbounded);

}  // namespace qbolo
