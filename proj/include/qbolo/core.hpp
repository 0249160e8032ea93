#pragma once

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qbolo {

/// Thrown when two operands live in spaces of different dimension.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when a per-round quadratic-boundedness certificate (or another
/// guarantee precondition) fails and the caller asked for strict checking.
class CertificateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// What a learner does when a guarantee precondition is violated.
enum class ViolationPolicy { kWarn, kStrict };

/// Receives warnings from learners running under ViolationPolicy::kWarn.
/// Defaults to stderr; tests and the harness may silence or capture it.
/// An empty sink drops warnings. Returns the previous sink.
using WarningSink = std::function<void(std::string_view)>;
WarningSink set_warning_sink(WarningSink sink);
void warn(std::string_view message);

/// Finite-dimensional real vector with the Euclidean norm.
class Point {
 public:
  Point() = default;
  explicit Point(std::size_t dim) : coords_(dim, 0.0) {}
  explicit Point(std::vector<double> coords);
  Point(std::initializer_list<double> coords);

  static Point zeros(std::size_t dim) { return Point(dim); }

  std::size_t dim() const noexcept { return coords_.size(); }
  double operator[](std::size_t i) const { return coords_[i]; }
  double& operator[](std::size_t i) { return coords_[i]; }
  std::span<const double> coords() const noexcept { return coords_; }
  const std::vector<double>& vec() const noexcept { return coords_; }

  double norm() const noexcept;
  double squared_norm() const noexcept;
  bool is_zero() const noexcept;
  bool all_finite() const noexcept;

  Point& operator+=(const Point& other);
  Point& operator-=(const Point& other);
  Point& operator*=(double s) noexcept;
  /// this += s * other
  Point& axpy(double s, const Point& other);

  friend bool operator==(const Point&, const Point&) = default;

 private:
  std::vector<double> coords_;
};

Point operator+(Point a, const Point& b);
Point operator-(Point a, const Point& b);
Point operator-(Point a);
Point operator*(double s, Point a);
Point operator*(Point a, double s);
double dot(const Point& a, const Point& b);
double distance(const Point& a, const Point& b);
void require_same_dim(const Point& a, const Point& b, std::string_view where);

/// Stacks (x, y) into a single point of dimension dim(x) + dim(y).
Point concat(const Point& x, const Point& y);

/// Euclidean projection onto the centered ball of the given radius
/// (radius may be +inf, in which case the point is returned unchanged).
Point project_to_ball(Point w, double radius);

/// A (G, L) quadratic bound at the origin: ||grad l(w)|| <= G + L ||w||.
struct QuadBound {
  double G = 0.0;
  double L = 0.0;

  QuadBound() = default;
  QuadBound(double g, double l);
};

/// A loss value and one subgradient at the queried point.
struct LossQuery {
  double value = 0.0;
  Point grad;
};

/// One round's loss. Full information: any number of queries per round,
/// all answered against the same function.
class RoundLoss {
 public:
  virtual ~RoundLoss() = default;
  virtual LossQuery query(const Point& w) const = 0;
  virtual double value(const Point& w) const { return query(w).value; }
};

/// A linear round loss l(w) = <g, w>.
class LinearLoss final : public RoundLoss {
 public:
  explicit LinearLoss(Point g) : g_(std::move(g)) {}
  LossQuery query(const Point& w) const override;
  const Point& gradient() const noexcept { return g_; }

 private:
  Point g_;
};

/// Comparator sequence u_1..u_T. Nonempty with uniform dimension.
class ComparatorPath {
 public:
  explicit ComparatorPath(std::vector<Point> points);
  static ComparatorPath constant(const Point& u, std::size_t length);

  std::size_t size() const noexcept { return points_.size(); }
  const Point& operator[](std::size_t t) const { return points_[t]; }
  const std::vector<Point>& points() const noexcept { return points_; }
  /// M = max_t ||u_t||
  double max_norm() const noexcept;

 private:
  std::vector<Point> points_;
};

/// P_T = sum_{t>=2} ||u_t - u_{t-1}||.
double path_length(const ComparatorPath& path);

/// ||g|| <= G + L||w|| up to a relative slack of 1e-12.
bool qb_check(const Point& g, const Point& w, const QuadBound& bound);

/// Self-bounding inequality for L-smooth losses:
/// ||g||^2 <= 2 L (value - min_value), with relative slack 1e-9.
bool self_bounding_check(const Point& g, double value, double min_value, double L);

/// Cumulative played and comparator losses; regret queries per path id.
class RegretLedger {
 public:
  RegretLedger() = default;
  explicit RegretLedger(std::vector<std::string> path_ids);

  void add_path(const std::string& id);
  void record_round(double played, const std::map<std::string, double>& at_comparators);

  std::size_t round_count() const noexcept { return played_.size(); }
  double regret(const std::string& id) const;
  /// Regret restricted to rounds [first, last) (0-based, half open).
  double regret(const std::string& id, std::size_t first, std::size_t last) const;
  std::vector<std::string> path_ids() const;
  const std::vector<double>& played_losses() const noexcept { return played_; }
  const std::vector<double>& comparator_losses(const std::string& id) const;

 private:
  std::vector<double> played_;
  std::map<std::string, std::vector<double>> comparators_;
};

}  // namespace qbolo
