#include <cmath>
#include <stdexcept>

#include "qbolo/bench.hpp"

namespace qbolo {

namespace {
constexpr std::uint64_t kSignStream = 1;
}

StaticLBAdversary::StaticLBAdversary(double G, double L, std::size_t T, std::uint64_t seed)
    : G_(G), L_(L), T_(T), rng_(seed, kSignStream) {
  if (!(G > 0.0)) throw std::invalid_argument("StaticLBAdversary: G must be positive");
  if (!(L > 0.0)) throw std::invalid_argument("StaticLBAdversary: L must be positive (Lipschitz-only case unsupported)");
  if (T == 0) throw std::invalid_argument("StaticLBAdversary: T must be >= 1");
}

Point StaticLBAdversary::next(const Point& w) {
  if (w.dim() != 2) throw DimensionError("StaticLBAdversary: plays must be in R^2");
  const double eps = rng_.sign();
  const double r = w.norm();
  signed_sum_ += eps * r;
  ++t_;
  return Point{-G_, -eps * L_ * r};
}

double StaticLBAdversary::U() const noexcept { return (G_ / L_) * std::sqrt(2.0 * static_cast<double>(T_)); }

Point StaticLBAdversary::comparator() const {
  const double s = signed_sum_ < 0.0 ? -1.0 : 1.0;
  return Point{U(), s * U()};
}

DynamicLBLoss::DynamicLBLoss(Point xi, double G, double L, double sigma)
    : xi_(std::move(xi)), G_(G), L_(L), sigma_(sigma) {}

LossQuery DynamicLBLoss::query(const Point& w) const {
  require_same_dim(w, xi_, "DynamicLBLoss");
  const double a = dot(xi_, w);
  const double gap = sigma_ - a;
  return {-0.5 * G_ * a + 0.25 * L_ * gap * gap, (-0.5 * G_ - 0.5 * L_ * gap) * xi_};
}

QuadBound DynamicLBLoss::certificate() const { return QuadBound(0.5 * G_ + 0.5 * sigma_ * L_, L_); }

DynamicLBAdversary::DynamicLBAdversary(double G, double L, double M, double mu_exp, std::size_t T)
    : G_(G), L_(L), sigma_(M * std::pow(static_cast<double>(T), -mu_exp)) {
  if (!(G > 0.0) || !(L > 0.0) || !(M > 0.0)) throw std::invalid_argument("DynamicLBAdversary: G, L, M must be positive");
  if (G / L > M) throw std::invalid_argument("DynamicLBAdversary: need G/L <= M");
  if (!(mu_exp >= 0.0 && mu_exp <= 0.5)) throw std::invalid_argument("DynamicLBAdversary: mu_exp must lie in [0, 1/2]");
  if (T == 0) throw std::invalid_argument("DynamicLBAdversary: T must be >= 1");
}

DynamicLBLoss DynamicLBAdversary::next(const Point& w) const {
  if (w.dim() != 2) throw DimensionError("DynamicLBAdversary: plays must be in R^2");
  const double r = w.norm();
  Point xi = r > 0.0 ? Point{-w[1] / r, w[0] / r} : Point{1.0, 0.0};
  return DynamicLBLoss(std::move(xi), G_, L_, sigma_);
}

double DynamicLBAdversary::per_round_regret() const noexcept { return 0.5 * G_ * sigma_ + 0.25 * L_ * sigma_ * sigma_; }

Point baseline_ogd_step(const Point& w, const Point& g, double eta, double D) {
  require_same_dim(w, g, "baseline_ogd_step");
  if (!(eta > 0.0)) throw std::invalid_argument("baseline_ogd_step: eta must be positive");
  Point next = w;
  next.axpy(-eta, g);
  return project_to_ball(std::move(next), D);
}

}  // namespace qbolo
