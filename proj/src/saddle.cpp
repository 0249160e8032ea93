#include "qbolo/saddle.hpp"

#include <cmath>

#include "qbolo/mirror.hpp"

namespace qbolo {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> row_major)
    : rows_(rows), cols_(cols), data_(std::move(row_major)) {
  if (data_.size() != rows * cols) throw DimensionError("Matrix: data size does not match shape");
  for (double v : data_) {
    if (!std::isfinite(v)) throw std::invalid_argument("Matrix: non-finite entry");
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Point Matrix::apply(const Point& v) const {
  if (v.dim() != cols_) throw DimensionError("Matrix::apply: dimension mismatch");
  std::vector<double> out(rows_, 0.0);
  for (std::size_t r = 0; r < rows_; ++r) {
    double s = 0.0;
    for (std::size_t c = 0; c < cols_; ++c) s += data_[r * cols_ + c] * v[c];
    out[r] = s;
  }
  return Point(std::move(out));
}

Point Matrix::apply_transpose(const Point& v) const {
  if (v.dim() != rows_) throw DimensionError("Matrix::apply_transpose: dimension mismatch");
  std::vector<double> out(cols_, 0.0);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) out[c] += data_[r * cols_ + c] * v[r];
  }
  return Point(std::move(out));
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  }
  return t;
}

double operator_norm(const Matrix& B) {
  const std::size_t n = B.cols();
  if (n == 0 || B.rows() == 0) return 0.0;

  Point v(std::vector<double>(n, 1.0 / std::sqrt(static_cast<double>(n))));
  if (B.apply(v).is_zero()) {
    // The all-ones seed can sit in the null space; fall back to a basis vector
    // that B does not annihilate.
    bool found = false;
    for (std::size_t j = 0; j < n && !found; ++j) {
      Point e = Point::zeros(n);
      e[j] = 1.0;
      if (!B.apply(e).is_zero()) {
        v = e;
        found = true;
      }
    }
    if (!found) return 0.0;
  }

  double sigma = B.apply(v).norm();
  for (int it = 0; it < 1000; ++it) {
    Point next = B.apply_transpose(B.apply(v));
    const double n2 = next.norm();
    if (n2 == 0.0) return 0.0;
    v = (1.0 / n2) * std::move(next);
    const double s = B.apply(v).norm();
    if (std::abs(s - sigma) <= 1e-10 * s) return s;
    sigma = s;
  }
  throw ConvergenceError("operator_norm: power iteration did not converge");
}

QuadBound compose_qb(const QBComposition& c) {
  const double s5 = std::sqrt(5.0);
  return QuadBound(s5 * std::hypot(c.Gx, c.Gy),
                   s5 * std::sqrt(c.Lxx * c.Lxx + c.Lyy * c.Lyy + c.Lxy * c.Lxy + c.Lyx * c.Lyx));
}

Component Component::quadratic(double a) {
  if (!(a >= 0.0) || !std::isfinite(a)) throw std::invalid_argument("Component::quadratic: need a >= 0");
  Component c;
  c.kind_ = Kind::kQuadratic;
  c.coef_ = a;
  return c;
}

Component Component::norm(double coef) {
  if (!(coef >= 0.0) || !std::isfinite(coef)) throw std::invalid_argument("Component::norm: need c >= 0");
  Component c;
  c.kind_ = Kind::kNorm;
  c.coef_ = coef;
  return c;
}

double Component::value(const Point& v) const {
  switch (kind_) {
    case Kind::kZero: return 0.0;
    case Kind::kQuadratic: return 0.5 * coef_ * v.squared_norm();
    case Kind::kNorm: return coef_ * v.norm();
  }
  return 0.0;
}

Point Component::grad(const Point& v) const {
  switch (kind_) {
    case Kind::kZero: return Point::zeros(v.dim());
    case Kind::kQuadratic: return coef_ * v;
    case Kind::kNorm: {
      const double n = v.norm();
      return n > 0.0 ? (coef_ / n) * v : Point::zeros(v.dim());
    }
  }
  return Point::zeros(v.dim());
}

QuadBound Component::certificate() const {
  switch (kind_) {
    case Kind::kZero: return {};
    case Kind::kQuadratic: return QuadBound(0.0, coef_);
    case Kind::kNorm: return QuadBound(coef_, 0.0);
  }
  return {};
}

void BilinearProblem::validate() const {
  if (B.rows() == 0 || B.cols() == 0) throw DimensionError("BilinearProblem: empty coupling matrix");
  if (ux.dim() != B.rows()) throw DimensionError("BilinearProblem: ux must live in x-space (rows of B)");
  if (uy.dim() != B.cols()) throw DimensionError("BilinearProblem: uy must live in y-space (columns of B)");
}

QBComposition bilinear_qb(const BilinearProblem& p) {
  p.validate();
  const QuadBound fx = p.Fx.certificate();
  const QuadBound fy = p.Fy.certificate();
  QBComposition c;
  c.Gx = fx.G + p.ux.norm();
  c.Lxx = fx.L;
  c.Lxy = operator_norm(p.B);
  c.Gy = fy.G + p.uy.norm();
  c.Lyy = fy.L;
  c.Lyx = operator_norm(p.B.transpose());
  return c;
}

BilinearOracle::BilinearOracle(BilinearProblem p) : p_(std::move(p)) { p_.validate(); }

double BilinearOracle::value(const Point& x, const Point& y) const {
  return p_.Fx.value(x) + dot(x, p_.B.apply(y)) - dot(p_.ux, x) + dot(p_.uy, y) - p_.Fy.value(y);
}

SaddleQuery BilinearOracle::query(const Point& x, const Point& y) const {
  SaddleQuery q;
  const Point By = p_.B.apply(y);
  q.value = p_.Fx.value(x) + dot(x, By) - dot(p_.ux, x) + dot(p_.uy, y) - p_.Fy.value(y);
  q.gx = p_.Fx.grad(x) + By - p_.ux;
  q.gy = p_.Fy.grad(y) - p_.B.apply_transpose(x) - p_.uy;
  return q;
}

QBConfig saddle_learner_config(const QuadBound& composed, double eps, double g_floor) {
  if (!(g_floor > 0.0)) throw std::invalid_argument("saddle_learner_config: g_floor must be positive");
  QBConfig c;
  c.eps = eps;
  c.G_max = std::max(composed.G, g_floor);
  c.L_max = composed.L;
  return c;
}

SaddleRun::SaddleRun(const SaddleOracle& oracle, QBConfig config, QuadBound per_round)
    : oracle_(oracle),
      per_round_(per_round),
      learner_([&] {
        config.dim = oracle.x_dim() + oracle.y_dim();
        return config;
      }()),
      sum_w_(Point::zeros(oracle.x_dim() + oracle.y_dim())),
      sum_g_(Point::zeros(oracle.x_dim() + oracle.y_dim())) {}

void SaddleRun::step() {
  const Point& w = learner_.play();
  const std::size_t dx = oracle_.x_dim();
  std::vector<double> xs(w.vec().begin(), w.vec().begin() + static_cast<std::ptrdiff_t>(dx));
  std::vector<double> ys(w.vec().begin() + static_cast<std::ptrdiff_t>(dx), w.vec().end());
  const SaddleQuery q = oracle_.query(Point(std::move(xs)), Point(std::move(ys)));
  const Point g = concat(q.gx, q.gy);

  sum_w_ += w;
  sum_g_ += g;
  sum_gw_ += dot(g, w);
  learner_.update(g, per_round_.G, per_round_.L);
  ++t_;
}

void SaddleRun::run(std::size_t rounds) {
  for (std::size_t i = 0; i < rounds; ++i) step();
}

Point SaddleRun::xbar() const {
  if (t_ == 0) throw std::logic_error("SaddleRun: no rounds played");
  std::vector<double> v(sum_w_.vec().begin(), sum_w_.vec().begin() + static_cast<std::ptrdiff_t>(oracle_.x_dim()));
  return (1.0 / static_cast<double>(t_)) * Point(std::move(v));
}

Point SaddleRun::ybar() const {
  if (t_ == 0) throw std::logic_error("SaddleRun: no rounds played");
  std::vector<double> v(sum_w_.vec().begin() + static_cast<std::ptrdiff_t>(oracle_.x_dim()), sum_w_.vec().end());
  return (1.0 / static_cast<double>(t_)) * Point(std::move(v));
}

double SaddleRun::linear_regret(const Point& x_ref, const Point& y_ref) const {
  return sum_gw_ - dot(sum_g_, concat(x_ref, y_ref));
}

SaddleResult saddle_solve(const SaddleOracle& oracle, const QBConfig& config, const QuadBound& per_round,
                          std::size_t T) {
  if (T == 0) throw std::invalid_argument("saddle_solve: T must be >= 1");
  SaddleRun run(oracle, config, per_round);
  run.run(T);
  return {run.xbar(), run.ybar()};
}

double duality_gap(const SaddleOracle& oracle, const Point& xbar, const Point& ybar, const Point& x_ref,
                   const Point& y_ref) {
  return oracle.value(xbar, y_ref) - oracle.value(x_ref, ybar);
}

}  // namespace qbolo
