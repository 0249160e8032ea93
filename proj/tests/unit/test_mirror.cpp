#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "qbolo/mirror.hpp"

using namespace qbolo;

TEST_CASE("psi_prime closed form") {
  RegularizerParams p{3.0, 4.0, 0.5, 1.0, 0.0};
  // F = 1: first case, 2k sqrt(V F) = 12.
  CHECK(psi_prime(p, p.alpha * (std::exp(1.0) - 1.0)) == doctest::Approx(12.0).epsilon(1e-12));
  // F = 9: G sqrt(F) = 3 > 2, second case k (G F + V/G) = 39.
  CHECK(psi_prime(p, p.alpha * std::expm1(9.0)) == doctest::Approx(39.0).epsilon(1e-12));
  CHECK(psi_prime(p, 0.0) == 0.0);
  CHECK_THROWS(psi_prime(p, -1e-9));
  CHECK_THROWS(psi_prime(RegularizerParams{3.0, 0.0, 1.0, 1.0, 0.0}, 1.0));

  SUBCASE("quadratic component adds quad_coef * x") {
    RegularizerParams q = p;
    q.quad_coef = 2.5;
    for (double x : {0.0, 0.1, 3.0, 100.0}) CHECK(psi_prime(q, x) == doctest::Approx(psi_prime(p, x) + 2.5 * x));
  }

  SUBCASE("matches the defining minimization over eta") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
      const RegularizerParams r{3.0 + 7.0 * u(rng), std::pow(10.0, 4.0 * u(rng)), std::pow(10.0, -4.0 * u(rng)),
                                0.1 + 2.0 * u(rng), u(rng) < 0.5 ? 0.0 : 5.0 * u(rng)};
      const double x = std::pow(10.0, 8.0 * u(rng) - 4.0);
      const double want = oracle::radial_deriv_by_min(r.k, r.V, r.alpha, r.G_max, r.quad_coef, x);
      CHECK(psi_prime(r, x) == doctest::Approx(want).epsilon(1e-9));
    }
  }

  SUBCASE("nondecreasing and continuous across the case switch") {
    const double x_switch = p.alpha * std::expm1(p.V / (p.G_max * p.G_max));
    CHECK(psi_prime(p, x_switch * (1 - 1e-12)) == doctest::Approx(psi_prime(p, x_switch * (1 + 1e-12))));
    double prev = 0.0;
    for (double x = 1e-6; x < 1e8; x *= 1.3) {
      const double v = psi_prime(p, x);
      CHECK(v >= prev);
      prev = v;
    }
  }
}

TEST_CASE("link_inverse") {
  const RadialCurve identity{[](double x) { return x; }};
  const RadialCurve logc{[](double x) { return std::log1p(x); }};
  CHECK(link_inverse(identity, 0.0) == 0.0);
  CHECK(link_inverse(identity, 2.0) == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(link_inverse(logc, 1.0) == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-9));
  CHECK(link_inverse(identity, 5.0, 1.0) == 1.0);
  CHECK(link_inverse(identity, 1e-30) == doctest::Approx(1e-30));
  CHECK_THROWS(link_inverse(identity, -1.0));
  CHECK_THROWS(link_inverse(identity, 1.0, 0.0));

  SUBCASE("bounded curve that never reaches the target fails") {
    const RadialCurve flat{[](double x) { return std::min(x, 1.0); }};
    CHECK_THROWS_AS(link_inverse(flat, 2.0), ConvergenceError);
  }

  SUBCASE("residual and monotonicity on regularizer curves") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
      const RegularizerParams r{3.0 + 7.0 * u(rng), std::pow(10.0, 4.0 * u(rng)), std::pow(10.0, -4.0 * u(rng)), 1.0,
                                u(rng) < 0.5 ? 0.0 : 4.0 * u(rng)};
      const RadialCurve c = RadialCurve::from_params(r);
      const double t1 = std::pow(10.0, 6.0 * u(rng) - 3.0);
      const double t2 = t1 * (1.0 + u(rng));
      const double x1 = link_inverse(c, t1), x2 = link_inverse(c, t2);
      CHECK(std::abs(c(x1) - t1) <= 1e-10 * (1.0 + t1));
      CHECK(x1 <= x2);
    }
  }
}

TEST_CASE("cmd_step") {
  const RadialCurve identity{[](double x) { return x; }};
  const Point zero = Point::zeros(2);

  CHECK(cmd_step(Point{1.0, 1.0}, Point{2.0, 3.0}, Point{2.0, 3.0}, identity).is_zero());
  const Point out = cmd_step(zero, zero, Point{3.0, 4.0}, identity);
  CHECK(out[0] == doctest::Approx(-3.0));
  CHECK(out[1] == doctest::Approx(-4.0));
  const Point capped = cmd_step(zero, zero, Point{3.0, 4.0}, identity, 1.0);
  CHECK(capped[0] == doctest::Approx(-0.6));
  CHECK(capped[1] == doctest::Approx(-0.8));
  CHECK_THROWS_AS(cmd_step(zero, Point{1.0}, zero, identity), DimensionError);

  SUBCASE("output is the argmin of the full objective") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::normal_distribution<double> n(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
      const RegularizerParams r{3.0 + 7.0 * u(rng), std::pow(10.0, 4.0 * u(rng)), std::pow(10.0, -4.0 * u(rng)), 1.0,
                                u(rng) < 0.5 ? 0.0 : 4.0 * u(rng)};
      const RadialCurve c = RadialCurve::from_params(r);
      const Point grad_psi{n(rng), n(rng), n(rng)};
      const Point gt{10.0 * n(rng), 10.0 * n(rng), 10.0 * n(rng)};
      const double radius = u(rng) < 0.3 ? 0.01 + u(rng) : kUnbounded;
      const Point w = cmd_step(grad_psi, grad_psi, gt, c, radius);
      const Point theta = grad_psi - gt;

      CHECK(w.norm() <= radius * (1.0 + 1e-12));
      // Collinear with theta, same direction.
      CHECK(dot(w, theta) == doctest::Approx(w.norm() * theta.norm()).epsilon(1e-10));

      auto deriv = [&](double x) { return psi_prime(r, x); };
      const double x_oracle = oracle::radial_argmin(deriv, theta.norm(), radius);
      CHECK(std::abs(w.norm() - x_oracle) <= 1e-6 * (1.0 + x_oracle));

      // Local optimality against random perturbations inside the domain.
      auto objective = [&](const Point& v) {
        return -dot(theta, v) + oracle::simpson(deriv, 0.0, v.norm(), 2000);
      };
      const double f0 = objective(w);
      for (int j = 0; j < 50; ++j) {
        Point d{n(rng), n(rng), n(rng)};
        d *= 1e-4 / d.norm();
        const Point v = w + d;
        if (v.norm() > radius) continue;
        CHECK(f0 <= objective(v) + 1e-9 * (1.0 + std::abs(f0)));
      }
    }
  }
}

TEST_CASE("scaled_entropy_argmin") {
  CHECK(scaled_entropy_argmin({{1.0}, {3.7}, {2.0}, 4.5}).q == std::vector<double>{1.0});

  const std::vector<double> p{0.2, 0.3, 0.5};
  const auto same = scaled_entropy_argmin({p, {0.0, 0.0, 0.0}, {1.0, 10.0, 100.0}, 4.5});
  for (int i = 0; i < 3; ++i) CHECK(same.q[i] == doctest::Approx(p[i]).epsilon(1e-14));

  const auto two = scaled_entropy_argmin({{0.5, 0.5}, {0.0, std::log(4.0)}, {1.0, 1.0}, 1.0});
  CHECK(two.q[0] == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(two.q[1] == doctest::Approx(0.2).epsilon(1e-12));

  CHECK_THROWS(scaled_entropy_argmin({{0.5, 0.6}, {0.0, 0.0}, {1.0, 1.0}, 4.5}));
  CHECK_THROWS(scaled_entropy_argmin({{1.0, 0.0}, {0.0, 0.0}, {1.0, 1.0}, 4.5}));
  CHECK_THROWS(scaled_entropy_argmin({{0.5, 0.5}, {0.0, 0.0}, {1.0, -1.0}, 4.5}));
  CHECK_THROWS(scaled_entropy_argmin({{0.5, 0.5}, {0.0}, {1.0, 1.0}, 4.5}));

  SUBCASE("equal scales reduce to exponential weights") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
      const std::size_t N = 2 + trial % 20;
      std::vector<double> prior(N), cost(N), scale(N, 0.1 + 10.0 * u(rng));
      double s = 0.0;
      for (auto& v : prior) s += (v = 0.05 + u(rng));
      for (auto& v : prior) v /= s;
      for (auto& c : cost) c = 20.0 * u(rng) - 10.0;
      const double k = 4.5;
      const auto sol = scaled_entropy_argmin({prior, cost, scale, k});
      std::vector<double> want(N);
      double z = 0.0;
      for (std::size_t i = 0; i < N; ++i) z += (want[i] = prior[i] * std::exp(-scale[0] * cost[i] / k));
      for (std::size_t i = 0; i < N; ++i) CHECK(sol.q[i] == doctest::Approx(want[i] / z).epsilon(1e-10));
    }
  }

  SUBCASE("wide scales: positive, normalized, KKT residual small") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
      const std::size_t N = 1 + trial % 50;
      std::vector<double> prior(N), cost(N), scale(N);
      double s = 0.0;
      for (auto& v : prior) s += (v = u(rng) + 1e-3);
      for (auto& v : prior) v /= s;
      double cmax = 0.0;
      for (std::size_t i = 0; i < N; ++i) {
        scale[i] = std::pow(10.0, 6.0 * u(rng) - 3.0);
        const double l = (2.0 * u(rng) - 1.0) / scale[i];
        cost[i] = l + scale[i] * l * l;
        cmax = std::max(cmax, std::abs(cost[i]));
      }
      const ScaledEntropyProblem prob{prior, cost, scale, 4.5};
      const auto sol = scaled_entropy_argmin(prob);
      double total = 0.0;
      for (double q : sol.q) {
        CHECK(q > 0.0);
        total += q;
      }
      CHECK(std::abs(total - 1.0) <= 1e-12);
      CHECK(scaled_entropy_kkt_residual(prob, sol) <= 1e-8 * (1.0 + cmax));
    }
  }
}
