#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "qbolo/bench.hpp"

using namespace qbolo;

TEST_CASE("rng streams") {
  Rng a(42, 1), b(42, 1), c(42, 2), d(43, 1);
  std::set<std::uint64_t> firsts;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    firsts.insert(x);
  }
  CHECK(firsts.size() == 100);
  CHECK(Rng(42, 1).next_u64() != c.next_u64());
  CHECK(Rng(42, 1).next_u64() != d.next_u64());
  CHECK(splitmix64(0) == 0xe220a8397b1dcdafULL);

  Rng r(7, 0);
  double s = 0.0, s2 = 0.0, n = 0.0, n2 = 0.0, signs = 0.0;
  const int N = 200000;
  for (int i = 0; i < N; ++i) {
    const double u = r.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    s += u;
    s2 += u * u;
    const double z = r.normal();
    n += z;
    n2 += z * z;
    signs += r.sign();
  }
  CHECK(s / N == doctest::Approx(0.5).epsilon(0.01));
  CHECK(s2 / N == doctest::Approx(1.0 / 3.0).epsilon(0.01));
  CHECK(std::abs(n / N) < 0.01);
  CHECK(n2 / N == doctest::Approx(1.0).epsilon(0.02));
  CHECK(std::abs(signs / N) < 0.01);
}

TEST_CASE("static lower-bound adversary") {
  StaticLBAdversary adv(1.0, 1.0, 8, 3);
  CHECK(adv.U() == doctest::Approx(4.0));
  const Point g0 = adv.next(Point{0.0, 0.0});
  CHECK(g0 == Point{-1.0, 0.0});
  const Point g1 = adv.next(Point{3.0, 4.0});
  CHECK(g1[0] == -1.0);
  CHECK(std::abs(g1[1]) == 5.0);
  CHECK(g1.norm() == doctest::Approx(std::sqrt(26.0)));
  CHECK(qb_check(g1, Point{3.0, 4.0}, QuadBound(1.0, 1.0)));
  CHECK(adv.rounds() == 2);
  CHECK(std::abs(adv.comparator()[1]) == doctest::Approx(4.0));
  // s = sign(eps_2 * 5)
  CHECK(adv.comparator()[1] * g1[1] < 0.0);
  CHECK_THROWS(adv.next(Point{1.0}));
  CHECK_THROWS(StaticLBAdversary(1.0, 0.0, 8, 1));

  Rng rng(5, 9);
  StaticLBAdversary many(2.0, 0.5, 100, 11);
  for (int t = 0; t < 100; ++t) {
    const Point w{rng.uniform(-3, 3), rng.uniform(-3, 3)};
    const Point g = many.next(w);
    CHECK(g.norm() == doctest::Approx(std::sqrt(4.0 + 0.25 * w.squared_norm())).epsilon(1e-14));
    CHECK(qb_check(g, w, QuadBound(2.0, 0.5)));
  }
}

TEST_CASE("dynamic lower-bound adversary") {
  const DynamicLBAdversary adv(1.0, 1.0, 2.0, 0.5, 16);
  CHECK(adv.sigma() == doctest::Approx(0.5));
  CHECK(adv.per_round_regret() == doctest::Approx(0.25 + 0.0625));
  CHECK_THROWS(DynamicLBAdversary(3.0, 1.0, 2.0, 0.5, 16));
  CHECK_THROWS(DynamicLBAdversary(1.0, 1.0, 2.0, 0.7, 16));

  const DynamicLBLoss at_origin = adv.next(Point{0.0, 0.0});
  CHECK(at_origin.xi() == Point{1.0, 0.0});

  Rng rng(8, 0);
  for (int t = 0; t < 200; ++t) {
    const Point w{rng.uniform(-2, 2), rng.uniform(-2, 2)};
    const DynamicLBLoss l = adv.next(w);
    CHECK(std::abs(dot(l.xi(), w)) <= 1e-15 * w.norm());
    CHECK(l.xi().norm() == doctest::Approx(1.0).epsilon(1e-15));
    // Counter-clockwise: cross(w, xi) > 0.
    CHECK(w[0] * l.xi()[1] - w[1] * l.xi()[0] > 0.0);
    const Point u = l.comparator();
    CHECK(u.norm() == doctest::Approx(0.5).epsilon(1e-15));
    const LossQuery at_u = l.query(u);
    const Point want = -0.5 * l.xi();
    CHECK(at_u.grad[0] == doctest::Approx(want[0]).epsilon(1e-14));
    CHECK(at_u.grad[1] == doctest::Approx(want[1]).epsilon(1e-14));
    // Regret of a play orthogonal to xi.
    CHECK(l.value(w) - l.value(u) == doctest::Approx(adv.per_round_regret()).epsilon(1e-13));
    for (int j = 0; j < 20; ++j) {
      const Point v{rng.uniform(-5, 5), rng.uniform(-5, 5)};
      CHECK(qb_check(l.query(v).grad, v, l.certificate()));
    }
  }
}

TEST_CASE("square loss certificates") {
  const SquareLoss l(Point{1.0, 0.0}, 2.0);
  const RegressionQuery q = regression_query(l, Point{3.0, 0.0});
  CHECK(q.query.grad == Point{1.0, 0.0});
  CHECK(q.G == 2.0);
  CHECK(q.L == 1.0);
  CHECK(qb_check(q.query.grad, Point{3.0, 0.0}, QuadBound(q.G, q.L)));

  const SquareLoss exact(Point{1.0, 2.0}, 5.0);
  const LossQuery z = exact.query(Point{1.0, 2.0});
  CHECK(z.value == 0.0);
  CHECK(z.grad.is_zero());

  const SquareLoss c(Point{0.6, 0.8}, 1.0);
  CHECK(c.certificate_at(Point{0.0, 0.0}).L == doctest::Approx(1.0));

  Rng rng(2, 2);
  for (int t = 0; t < 500; ++t) {
    const SquareLoss s(Point{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)}, rng.uniform(-2, 2));
    const Point w{rng.uniform(-4, 4), rng.uniform(-4, 4), rng.uniform(-4, 4)};
    const RegressionQuery r = regression_query(s, w);
    CHECK(qb_check(r.query.grad, w, QuadBound(r.G, r.L)));
    CHECK(qb_check(r.query.grad, w, s.certificate()));
    CHECK(self_bounding_check(r.query.grad, r.query.value, 0.0, s.certificate().L));
  }
}

TEST_CASE("regression stream") {
  RegressionSpec spec;
  spec.dim = 3;
  spec.T = 300;
  spec.shifts = 2;
  spec.seed = 99;
  RegressionStream a(spec), b(spec);
  std::vector<Point> truths;
  for (std::size_t t = 0; t < spec.T; ++t) {
    const RegressionRound ra = a.next(), rb = b.next();
    CHECK(ra.loss.y() == rb.loss.y());
    CHECK(ra.loss.x() == rb.loss.x());
    CHECK(ra.loss.x().norm() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(ra.loss.y()) <= spec.G_max() / spec.feature_radius + 1e-12);
    truths.push_back(ra.truth);
  }
  int changes = 0;
  for (std::size_t t = 1; t < truths.size(); ++t) changes += truths[t] == truths[t - 1] ? 0 : 1;
  CHECK(changes == 2);
  CHECK(!(truths[99] == truths[100]));
  CHECK(!(truths[199] == truths[200]));

  SUBCASE("random walk stays in the truth ball") {
    RegressionSpec w = spec;
    w.drift = RegressionSpec::Drift::kRandomWalk;
    w.walk_step = 0.2;
    w.noise = RegressionSpec::Noise::kGaussian;
    w.features = RegressionSpec::Features::kCube;
    RegressionStream s(w);
    std::vector<std::vector<double>> raw;
    for (std::size_t t = 0; t < w.T; ++t) {
      const RegressionRound r = s.next();
      CHECK(r.truth.norm() <= w.truth_radius * (1 + 1e-12));
      CHECK(r.loss.x().norm() <= w.feature_radius * (1 + 1e-12));
      CHECK(r.loss.certificate().G <= w.G_max() * (1 + 1e-12));
      CHECK(r.loss.certificate().L <= w.L_max() * (1 + 1e-12));
      raw.push_back(r.truth.vec());
    }
    CHECK(oracle::path_length(raw) > 0.0);
  }

  RegressionSpec bad = spec;
  bad.feature_radius = 0.0;
  CHECK_THROWS(RegressionStream{bad});
}

TEST_CASE("baseline_ogd_step") {
  CHECK(baseline_ogd_step(Point{0.0, 0.0}, Point{1.0, 0.0}, 0.1) == Point{-0.1, 0.0});
  const Point p = baseline_ogd_step(Point{0.0, 0.0}, Point{3.0, 4.0}, 1.0, 1.0);
  CHECK(p.norm() == doctest::Approx(1.0));
  CHECK(p[0] == doctest::Approx(-0.6));
  CHECK_THROWS(baseline_ogd_step(Point{0.0}, Point{1.0}, 0.0));
}
