#include <doctest.h>

#include <cmath>
#include <random>

#include "ektlab/geometry.hpp"

using namespace ekt;

namespace {

// Independent distance oracle: integrate nu along the straight diameter,
// valid whenever both endpoints sit on a diameter through the origin.
double diameter_length_quadrature(const ModelParams& params, double r_from, double r_to) {
  const int n = 20000;
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double r = r_from + (r_to - r_from) * (i + 0.5) / n;
    acc += conformal_factor(params, BasePoint{r, 0.0});
  }
  return acc * (r_to - r_from) / n;
}

BasePoint sample_disc(std::mt19937_64& rng, double radius) {
  std::uniform_real_distribution<double> u(-radius, radius);
  while (true) {
    BasePoint p{u(rng), u(rng)};
    if (p.r2() < radius * radius) return p;
  }
}

}  // namespace

TEST_CASE("conformal factor closed form") {
  CHECK(conformal_factor({0.0, 0.0}, {3.7, -2.0}) == doctest::Approx(1.0));
  CHECK(conformal_factor({-1.0, 0.0}, {0.0, 0.0}) == doctest::Approx(1.0));
  CHECK(conformal_factor({-1.0, 0.0}, {1.0, 0.0}) == doctest::Approx(4.0 / 3.0));
  CHECK(conformal_factor({-1.0, 1.0}, {0.3, 0.4}) >= 1.0);
  CHECK_THROWS_AS((void)conformal_factor({-1.0, 0.0}, {2.0, 0.0}), Error);
}

TEST_CASE("conformal factor monotone in |p| for kappa < 0") {
  const ModelParams params{-1.0, 0.0};
  double prev = 0.0;
  for (int i = 0; i < 40; ++i) {
    const double r = 1.9 * i / 39.0;
    const double nu = conformal_factor(params, {r, 0.0});
    CHECK(nu >= prev);
    prev = nu;
  }
}

TEST_CASE("metric components match the expanded form") {
  SUBCASE("Euclidean") {
    const MetricTensor g = metric_at({0.0, 0.0}, {0.7, -1.3});
    CHECK((g - Mat3::Identity()).norm() == doctest::Approx(0.0));
  }
  SUBCASE("H2xR at origin") {
    const MetricTensor g = metric_at({-1.0, 0.0}, {0.0, 0.0});
    CHECK((g - Mat3::Identity()).norm() == doctest::Approx(0.0));
  }
  SUBCASE("PSL2 at (1,0)") {
    const MetricTensor g = metric_at({-1.0, 1.0}, {1.0, 0.0});
    CHECK(g(0, 0) == doctest::Approx(16.0 / 9.0));
    CHECK(g(1, 1) == doctest::Approx(32.0 / 9.0));
    CHECK(g(0, 1) == doctest::Approx(0.0));
    CHECK(g(0, 2) == doctest::Approx(0.0));
    CHECK(g(1, 2) == doctest::Approx(-4.0 / 3.0));
    CHECK(g(2, 2) == doctest::Approx(1.0));
    CHECK(g.determinant() == doctest::Approx(256.0 / 81.0));
  }
}

TEST_CASE("det(g) == nu^4 and coframe factorization, seeded sweep") {
  std::mt19937_64 rng(421);
  for (const double kappa : {0.0, -1.0}) {
    for (const double tau : {0.0, 1.0}) {
      const ModelParams params{kappa, tau};
      const double radius = kappa < 0.0 ? 1.95 : 5.0;
      for (int i = 0; i < 1000; ++i) {
        const BasePoint p = sample_disc(rng, radius);
        const MetricTensor g = metric_at(params, p);
        const double nu = conformal_factor(params, p);
        CHECK(g.determinant() == doctest::Approx(nu * nu * nu * nu).epsilon(tol().det_identity_rel));
        CHECK((g - g.transpose()).norm() == 0.0);
        const Mat3 e = metric_coframe(params, p);
        CHECK((e.transpose() * e - g).norm() <= 1e-12 * g.norm());
        // positive definite
        Eigen::SelfAdjointEigenSolver<Mat3> es(g);
        CHECK(es.eigenvalues().minCoeff() > 0.0);
      }
    }
  }
}

TEST_CASE("base distance") {
  CHECK(base_distance({0.0, 0.0}, {0.0, 0.0}, {3.0, 4.0}) == doctest::Approx(5.0));
  CHECK(base_distance({-1.0, 0.0}, {0.4, -0.2}, {0.4, -0.2}) == doctest::Approx(0.0));

  // closed form vs quadrature oracle along the diameter
  const ModelParams hyp{-1.0, 0.0};
  const double closed = base_distance(hyp, {0.0, 0.0}, {1.0, 0.0});
  const double quad = diameter_length_quadrature(hyp, 0.0, 1.0);
  CHECK(closed == doctest::Approx(2.0 * std::atanh(0.5)).epsilon(1e-14));
  CHECK(closed == doctest::Approx(quad).epsilon(1e-7));
}

TEST_CASE("base distance symmetry and triangle inequality, seeded") {
  std::mt19937_64 rng(77);
  for (const double kappa : {0.0, -0.5, -1.0}) {
    const ModelParams params{kappa, 0.0};
    const double radius = kappa < 0.0 ? 0.9 * params.disc_radius() : 3.0;
    for (int i = 0; i < 1000; ++i) {
      const BasePoint a = sample_disc(rng, radius);
      const BasePoint b = sample_disc(rng, radius);
      const BasePoint c = sample_disc(rng, radius);
      const double ab = base_distance(params, a, b);
      const double ba = base_distance(params, b, a);
      const double bc = base_distance(params, b, c);
      const double ac = base_distance(params, a, c);
      CHECK(std::abs(ab - ba) <= 1e-9 * (1.0 + ab));
      CHECK(ac <= ab + bc + 1e-9 * (1.0 + ac));
    }
  }
}

TEST_CASE("geodesics") {
  SUBCASE("Euclidean straight segment") {
    const GeodesicSegment seg = geodesic_between({0.0, 0.0}, {0.0, 0.0}, {1.0, 1.0}, 11);
    CHECK(seg.length == doctest::Approx(std::sqrt(2.0)));
    for (const BasePoint& p : seg.polyline) CHECK(p.x == doctest::Approx(p.y));
  }
  SUBCASE("hyperbolic diameter stays on the axis") {
    const GeodesicSegment seg = geodesic_between({-1.0, 0.0}, {-0.8, 0.0}, {0.8, 0.0}, 33);
    for (const BasePoint& p : seg.polyline) CHECK(std::abs(p.y) <= 1e-13);
    CHECK(seg.polyline.front().x == doctest::Approx(-0.8));
    CHECK(seg.polyline.back().x == doctest::Approx(0.8));
  }
  SUBCASE("coincident endpoints refused") {
    CHECK_THROWS_AS((void)geodesic_between({0.0, 0.0}, {1.0, 2.0}, {1.0, 2.0}, 5), Error);
  }
  SUBCASE("length consistent with base_distance") {
    const ModelParams params{-1.0, 0.0};
    const GeodesicSegment seg = geodesic_between(params, {1.0, 0.0}, {0.0, 1.0}, 65);
    CHECK(seg.length ==
          doctest::Approx(base_distance(params, {1.0, 0.0}, {0.0, 1.0})).epsilon(1e-12));
    // polyline arc length converges to the closed form from below
    double poly = 0.0;
    for (std::size_t i = 0; i + 1 < seg.polyline.size(); ++i) {
      const BasePoint mid{(seg.polyline[i].x + seg.polyline[i + 1].x) / 2.0,
                          (seg.polyline[i].y + seg.polyline[i + 1].y) / 2.0};
      poly += conformal_factor(params, mid) *
              std::hypot(seg.polyline[i + 1].x - seg.polyline[i].x,
                         seg.polyline[i + 1].y - seg.polyline[i].y);
    }
    CHECK(poly == doctest::Approx(seg.length).epsilon(1e-4));
  }
}

TEST_CASE("hyperbolic geodesic satisfies the conformal geodesic equation") {
  // residual of x'' + 2 (grad phi . x') x' - |x'|^2 grad phi with phi = log nu,
  // finite differences along the uniformly-sampled polyline
  const ModelParams params{-1.0, 0.0};
  const int n = 401;
  const GeodesicSegment seg = geodesic_between(params, {1.0, 0.0}, {0.0, 1.0}, n);
  const double dt = seg.length / (n - 1);
  double worst = 0.0;
  for (int i = 1; i + 1 < n; ++i) {
    const Vec2 pm = to_vec(seg.polyline[i - 1]);
    const Vec2 p0 = to_vec(seg.polyline[i]);
    const Vec2 pp = to_vec(seg.polyline[i + 1]);
    const Vec2 acc = (pp - 2.0 * p0 + pm) / (dt * dt);
    const Vec2 vel = (pp - pm) / (2.0 * dt);
    // grad log nu = -kappa nu (x, y) / 2
    const double nu = conformal_factor(params, seg.polyline[i]);
    const Vec2 grad_phi = 0.5 * nu * Vec2(p0.x(), p0.y());
    const Vec2 residual = acc + 2.0 * grad_phi.dot(vel) * vel - vel.squaredNorm() * grad_phi;
    worst = std::max(worst, residual.norm());
  }
  CHECK(worst <= 200.0 * dt * dt);
}

TEST_CASE("graph area element") {
  CHECK(graph_area_element({0.0, 0.0}, {0.2, 0.3}, Vec2(0, 0)) == doctest::Approx(1.0));
  CHECK(graph_area_element({0.0, 0.0}, {0.2, 0.3}, Vec2(3, 4)) == doctest::Approx(std::sqrt(26.0)));
  CHECK(graph_area_element({-1.0, 0.0}, {1.0, 0.0}, Vec2(0, 0)) == doctest::Approx(16.0 / 9.0));
  // analytic reduction in R^3
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 200; ++i) {
    const Vec2 g(u(rng), u(rng));
    CHECK(graph_area_element({0.0, 0.0}, {u(rng), u(rng)}, g) ==
          doctest::Approx(std::sqrt(1.0 + g.squaredNorm())).epsilon(1e-15));
  }
}

TEST_CASE("rescaled metric family") {
  SUBCASE("lambda = 1 recovers the base metric") {
    const BasePoint p{0.3, -0.7};
    CHECK((rescaled_metric_at(1.0, 1.0, p) - metric_at({-1.0, 1.0}, p)).norm() == 0.0);
  }
  SUBCASE("mu_k value from direct substitution") {
    const BasePoint p{10.0, 0.0};
    const Mat3 e = rescaled_coframe_at(100.0, 1.0, p);
    CHECK(e(0, 0) == doctest::Approx(1.0 / (1.0 - 100.0 / 40000.0)).epsilon(1e-14));
    CHECK(e(0, 0) == doctest::Approx(1.00250627).epsilon(1e-8));
  }
  SUBCASE("identity at origin") {
    CHECK((rescaled_metric_at(100.0, 1.0, {0.0, 0.0}) - Mat3::Identity()).norm() ==
          doctest::Approx(0.0));
  }
  SUBCASE("converges to identity as lambda grows") {
    const BasePoint p{1.0, 0.5};
    double prev = 1e100;
    for (const double lambda : {10.0, 100.0, 1000.0}) {
      const double dev = (rescaled_metric_at(lambda, 1.0, p) - Mat3::Identity())
                             .cwiseAbs()
                             .maxCoeff();
      CHECK(dev < prev);
      prev = dev;
    }
    CHECK(prev <= 2.0 / 1000.0);  // ~ C / lambda
  }
}

TEST_CASE("homothety") {
  const AmbientPoint p{{0.5, 0.0}, 1.0};
  const AmbientPoint q = homothety(2.0, p);
  CHECK(q.base.x == doctest::Approx(1.0));
  CHECK(q.base.y == doctest::Approx(0.0));
  CHECK(q.t == doctest::Approx(2.0));
  const AmbientPoint id = homothety(1.0, p);
  CHECK(id.base.x == p.base.x);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const AmbientPoint a{{u(rng), u(rng)}, u(rng)};
    const double lambda = std::exp(u(rng) * 3.0);
    const AmbientPoint rt = homothety(1.0 / lambda, homothety(lambda, a));
    CHECK(std::abs(rt.base.x - a.base.x) <= 1e-15 * std::max(1.0, std::abs(a.base.x)));
    CHECK(std::abs(rt.t - a.t) <= 1e-15 * std::max(1.0, std::abs(a.t)));
  }
}

TEST_CASE("pullback identity") {
  SUBCASE("specific values") {
    auto [lhs, rhs] = pullback_check(3.0, 0.0, {0.1, 0.2}, Vec3(1, 0, 0), Vec3(1, 0, 0));
    CHECK(lhs == doctest::Approx(rhs).epsilon(tol().pullback_rel));
  }
  SUBCASE("seeded property sweep") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (const double lambda : {1.0, 2.0, 10.0, 100.0}) {
      for (const double tau : {0.0, 1.0}) {
        for (int i = 0; i < 1000; ++i) {
          const BasePoint p = sample_disc(rng, 1.9);
          const Vec3 v(u(rng), u(rng), u(rng));
          const Vec3 w(u(rng), u(rng), u(rng));
          auto [lhs, rhs] = pullback_check(lambda, tau, p, v, w);
          const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
          CHECK(std::abs(lhs - rhs) <= tol().pullback_rel * scale);
        }
      }
    }
  }
}

TEST_CASE("base reflections are involutive isometries") {
  std::mt19937_64 rng(9);
  const ModelParams params{-1.0, 0.0};
  for (int i = 0; i < 300; ++i) {
    const BasePoint p = sample_disc(rng, 1.8);
    const BasePoint x0 = sample_disc(rng, 1.0);
    const BasePoint q = base_rotate_pi(params, x0, base_rotate_pi(params, x0, p));
    CHECK(std::hypot(q.x - p.x, q.y - p.y) <= 1e-13);
    // fixed point
    const BasePoint f = base_rotate_pi(params, x0, x0);
    CHECK(std::hypot(f.x - x0.x, f.y - x0.y) <= 1e-14);
    // distance preserved
    const BasePoint a = sample_disc(rng, 1.8);
    CHECK(base_distance(params, base_rotate_pi(params, x0, p), base_rotate_pi(params, x0, a)) ==
          doctest::Approx(base_distance(params, p, a)).epsilon(1e-10));
  }
  // geodesic reflection: fixes the geodesic, involutive, isometric
  const BasePoint ga{0.9, 0.1}, gb{-0.2, 0.8};
  const GeodesicSegment seg = geodesic_between(params, ga, gb, 9);
  for (const BasePoint& s : seg.polyline) {
    const BasePoint r = base_reflect_geodesic(params, ga, gb, s);
    CHECK(std::hypot(r.x - s.x, r.y - s.y) <= 1e-12);
  }
  for (int i = 0; i < 200; ++i) {
    const BasePoint p = sample_disc(rng, 1.8);
    const BasePoint q = sample_disc(rng, 1.8);
    const BasePoint rp = base_reflect_geodesic(params, ga, gb, p);
    const BasePoint rq = base_reflect_geodesic(params, ga, gb, q);
    const BasePoint pp = base_reflect_geodesic(params, ga, gb, rp);
    CHECK(std::hypot(pp.x - p.x, pp.y - p.y) <= 1e-12);
    CHECK(base_distance(params, rp, rq) ==
          doctest::Approx(base_distance(params, p, q)).epsilon(1e-10));
  }
}
