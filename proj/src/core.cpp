#include "qbolo/core.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <numeric>
#include <utility>

namespace qbolo {

namespace {

WarningSink& warning_sink() {
  static WarningSink sink = [](std::string_view msg) { std::cerr << "warning: " << msg << '\n'; };
  return sink;
}

}  // namespace

WarningSink set_warning_sink(WarningSink sink) { return std::exchange(warning_sink(), std::move(sink)); }

void warn(std::string_view message) {
  if (warning_sink()) warning_sink()(message);
}

Point::Point(std::vector<double> coords) : coords_(std::move(coords)) {
  if (!all_finite()) throw std::invalid_argument("Point: non-finite coordinate");
}

Point::Point(std::initializer_list<double> coords) : Point(std::vector<double>(coords)) {}

double Point::squared_norm() const noexcept {
  double s = 0.0;
  for (double c : coords_) s += c * c;
  return s;
}

double Point::norm() const noexcept {
  // Scaled accumulation so huge or tiny coordinates don't over/underflow.
  double scale = 0.0;
  for (double c : coords_) scale = std::max(scale, std::abs(c));
  if (scale == 0.0 || !std::isfinite(scale)) return scale;
  double s = 0.0;
  for (double c : coords_) {
    const double r = c / scale;
    s += r * r;
  }
  return scale * std::sqrt(s);
}

bool Point::is_zero() const noexcept {
  return std::all_of(coords_.begin(), coords_.end(), [](double c) { return c == 0.0; });
}

bool Point::all_finite() const noexcept {
  return std::all_of(coords_.begin(), coords_.end(), [](double c) { return std::isfinite(c); });
}

void require_same_dim(const Point& a, const Point& b, std::string_view where) {
  if (a.dim() != b.dim()) {
    throw DimensionError(std::string(where) + ": dimension mismatch (" + std::to_string(a.dim()) +
                         " vs " + std::to_string(b.dim()) + ")");
  }
}

Point& Point::operator+=(const Point& other) {
  require_same_dim(*this, other, "Point::operator+=");
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += other.coords_[i];
  return *this;
}

Point& Point::operator-=(const Point& other) {
  require_same_dim(*this, other, "Point::operator-=");
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] -= other.coords_[i];
  return *this;
}

Point& Point::operator*=(double s) noexcept {
  for (double& c : coords_) c *= s;
  return *this;
}

Point& Point::axpy(double s, const Point& other) {
  require_same_dim(*this, other, "Point::axpy");
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += s * other.coords_[i];
  return *this;
}

Point operator+(Point a, const Point& b) { return a += b; }
Point operator-(Point a, const Point& b) { return a -= b; }
Point operator-(Point a) { return a *= -1.0; }
Point operator*(double s, Point a) { return a *= s; }
Point operator*(Point a, double s) { return a *= s; }

double dot(const Point& a, const Point& b) {
  require_same_dim(a, b, "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}

double distance(const Point& a, const Point& b) { return (a - b).norm(); }

Point concat(const Point& x, const Point& y) {
  std::vector<double> c(x.vec());
  c.insert(c.end(), y.vec().begin(), y.vec().end());
  return Point(std::move(c));
}

Point project_to_ball(Point w, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("project_to_ball: radius must be positive");
  if (std::isinf(radius)) return w;
  const double n = w.norm();
  if (n > radius) w *= radius / n;
  return w;
}

QuadBound::QuadBound(double g, double l) : G(g), L(l) {
  if (!(std::isfinite(g) && std::isfinite(l)) || g < 0.0 || l < 0.0) {
    throw std::invalid_argument("QuadBound: G and L must be finite and nonnegative");
  }
}

LossQuery LinearLoss::query(const Point& w) const { return {dot(g_, w), g_}; }

ComparatorPath::ComparatorPath(std::vector<Point> points) : points_(std::move(points)) {
  if (points_.empty()) throw std::invalid_argument("ComparatorPath: empty path");
  for (const auto& p : points_) require_same_dim(points_.front(), p, "ComparatorPath");
}

ComparatorPath ComparatorPath::constant(const Point& u, std::size_t length) {
  return ComparatorPath(std::vector<Point>(length, u));
}

double ComparatorPath::max_norm() const noexcept {
  double m = 0.0;
  for (const auto& p : points_) m = std::max(m, p.norm());
  return m;
}

double path_length(const ComparatorPath& path) {
  double total = 0.0;
  for (std::size_t t = 1; t < path.size(); ++t) total += distance(path[t], path[t - 1]);
  return total;
}

bool qb_check(const Point& g, const Point& w, const QuadBound& bound) {
  require_same_dim(g, w, "qb_check");
  const double rhs = bound.G + bound.L * w.norm();
  return g.norm() <= rhs + 1e-12 * (1.0 + rhs);
}

bool self_bounding_check(const Point& g, double value, double min_value, double L) {
  const double g2 = g.squared_norm();
  return g2 <= 2.0 * L * (value - min_value) + 1e-9 * (1.0 + g2);
}

RegretLedger::RegretLedger(std::vector<std::string> path_ids) {
  for (auto& id : path_ids) add_path(id);
}

void RegretLedger::add_path(const std::string& id) {
  if (comparators_.count(id)) throw std::invalid_argument("RegretLedger: duplicate path id " + id);
  if (!played_.empty()) throw std::logic_error("RegretLedger: paths must be registered before the first round");
  comparators_.emplace(id, std::vector<double>{});
}

void RegretLedger::record_round(double played, const std::map<std::string, double>& at_comparators) {
  if (!std::isfinite(played)) throw std::invalid_argument("RegretLedger: non-finite played loss");
  for (const auto& [id, losses] : comparators_) {
    auto it = at_comparators.find(id);
    if (it == at_comparators.end()) throw std::invalid_argument("RegretLedger: missing path id " + id);
    if (!std::isfinite(it->second)) throw std::invalid_argument("RegretLedger: non-finite loss for path " + id);
  }
  for (auto& [id, losses] : comparators_) losses.push_back(at_comparators.at(id));
  played_.push_back(played);
}

double RegretLedger::regret(const std::string& id) const { return regret(id, 0, played_.size()); }

double RegretLedger::regret(const std::string& id, std::size_t first, std::size_t last) const {
  const auto& comp = comparator_losses(id);
  if (first > last || last > played_.size()) throw std::out_of_range("RegretLedger: bad round range");
  double r = 0.0;
  for (std::size_t t = first; t < last; ++t) r += played_[t] - comp[t];
  return r;
}

std::vector<std::string> RegretLedger::path_ids() const {
  std::vector<std::string> ids;
  for (const auto& [id, _] : comparators_) ids.push_back(id);
  return ids;
}

const std::vector<double>& RegretLedger::comparator_losses(const std::string& id) const {
  auto it = comparators_.find(id);
  if (it == comparators_.end()) throw std::invalid_argument("RegretLedger: unknown path id " + id);
  return it->second;
}

}  // namespace qbolo
