#pragma once

#include <cstddef>
#include <vector>

#include "qbolo/core.hpp"
#include "qbolo/qb_learner.hpp"

namespace qbolo {

/// Dense row-major matrix, used for bilinear couplings.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> row_major);
  static Matrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }

  Point apply(const Point& v) const;
  Point apply_transpose(const Point& v) const;
  Matrix transpose() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Largest singular value by power iteration on B^T B, seeded with the
/// normalized all-ones vector; relative tolerance 1e-10, 1000 iterations.
double operator_norm(const Matrix& B);

/// Value and partial subgradients of a convex-concave L(x, y).
/// `gy` is a subgradient of -L in y, so both blocks are descent directions
/// for the learner.
struct SaddleQuery {
  double value = 0.0;
  Point gx;
  Point gy;
};

class SaddleOracle {
 public:
  virtual ~SaddleOracle() = default;
  virtual std::size_t x_dim() const = 0;
  virtual std::size_t y_dim() const = 0;
  virtual SaddleQuery query(const Point& x, const Point& y) const = 0;
  virtual double value(const Point& x, const Point& y) const { return query(x, y).value; }
};

struct QBComposition {
  double Gx = 0.0;
  double Gy = 0.0;
  double Lxx = 0.0;
  double Lxy = 0.0;
  double Lyx = 0.0;
  double Lyy = 0.0;
};

/// G_w = sqrt(5) sqrt(Gx^2 + Gy^2), L_w = sqrt(5) sqrt(Lxx^2 + Lyy^2 + Lxy^2 + Lyx^2).
QuadBound compose_qb(const QBComposition& c);

/// Convex component from a small named family with its own QB certificate.
class Component {
 public:
  enum class Kind { kZero, kQuadratic, kNorm };

  Component() = default;
  static Component zero() { return {}; }
  /// (a/2) ||v||^2
  static Component quadratic(double a);
  /// c ||v||
  static Component norm(double c);

  Kind kind() const noexcept { return kind_; }
  double coefficient() const noexcept { return coef_; }
  double value(const Point& v) const;
  Point grad(const Point& v) const;
  QuadBound certificate() const;

 private:
  Kind kind_ = Kind::kZero;
  double coef_ = 0.0;
};

/// L(x, y) = Fx(x) + <x, B y> - <ux, x> + <uy, y> - Fy(y)
struct BilinearProblem {
  Matrix B;
  Point ux;
  Point uy;
  Component Fx;
  Component Fy;

  void validate() const;
};

QBComposition bilinear_qb(const BilinearProblem& p);

class BilinearOracle final : public SaddleOracle {
 public:
  explicit BilinearOracle(BilinearProblem p);

  std::size_t x_dim() const override { return p_.B.rows(); }
  std::size_t y_dim() const override { return p_.B.cols(); }
  SaddleQuery query(const Point& x, const Point& y) const override;
  double value(const Point& x, const Point& y) const override;
  const BilinearProblem& problem() const noexcept { return p_; }

 private:
  BilinearProblem p_;
};

/// Runs the static learner on the stacked gradients (gx, gy) and keeps the
/// averaged iterates. Each round is certified with the fixed (G_w, L_w).
class SaddleRun {
 public:
  /// `config.dim` is overwritten with x_dim + y_dim.
  SaddleRun(const SaddleOracle& oracle, QBConfig config, QuadBound per_round);

  void step();
  void run(std::size_t rounds);

  std::size_t rounds() const noexcept { return t_; }
  Point xbar() const;
  Point ybar() const;
  /// sum_t <g_t, w_t - (x_ref, y_ref)>
  double linear_regret(const Point& x_ref, const Point& y_ref) const;
  /// sum_t <g_t, w_t>
  double linear_loss_sum() const noexcept { return sum_gw_; }
  const QBLearner& learner() const noexcept { return learner_; }

 private:
  const SaddleOracle& oracle_;
  QuadBound per_round_;
  QBLearner learner_;
  std::size_t t_ = 0;
  Point sum_w_;
  Point sum_g_;
  double sum_gw_ = 0.0;
};

/// Config for saddle_solve built from the problem's certificate. When G_w is
/// zero the learner still needs G_max > 0, so `g_floor` stands in for it.
QBConfig saddle_learner_config(const QuadBound& composed, double eps = 1.0, double g_floor = 1.0);

struct SaddleResult {
  Point xbar;
  Point ybar;
};

SaddleResult saddle_solve(const SaddleOracle& oracle, const QBConfig& config, const QuadBound& per_round,
                          std::size_t T);

/// L(xbar, y_ref) - L(x_ref, ybar)
double duality_gap(const SaddleOracle& oracle, const Point& xbar, const Point& ybar, const Point& x_ref,
                   const Point& y_ref);

}  // namespace qbolo
