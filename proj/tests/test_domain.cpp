#include <doctest.h>

#include <cmath>

#include "pfmpm/domain.hpp"

using namespace pfmpm;

namespace {

Material steel() {
  Material m;
  m.name = "steel";
  m.E = 190000.0;
  m.nu = 0.3;
  m.rho = 8000.0;
  m.l0 = 1.0;
  m.Gc_bar = 6.0;
  m.plane = PlaneMode::Stress;
  m.finalize();
  return m;
}

SplineGrid grid20() { return SplineGrid::build({{0.0, 0.0}, {20.0, 20.0}}, 1.0, 2); }

}  // namespace

TEST_CASE("rectangle covering 10x10 cells at density 3 gives 900 points") {
  const SplineGrid g = grid20();
  BodyShape b;
  b.name = "block";
  b.geometry = RectangleShape{{{5.0, 5.0}, {15.0, 15.0}}};
  const Material m = steel();
  const auto pts = discretize(b, m, g, 3, 2.0);
  CHECK(pts.size() == 900);
  for (const MaterialPoint& p : pts) {
    CHECK(p.V == doctest::Approx((1.0 / 3.0) * (1.0 / 3.0) * 2.0));
    CHECK(p.M == doctest::Approx(m.rho * p.V));
  }
}

TEST_CASE("disk area converges within 2 percent") {
  const SplineGrid g = SplineGrid::build({{0.0, 0.0}, {40.0, 40.0}}, 1.0, 2);
  BodyShape b;
  b.geometry = DiskShape{{20.0, 20.0}, 12.0};
  const auto pts = discretize(b, steel(), g, 3, 1.0);
  const double area = pts.size() * (1.0 / 9.0);
  CHECK(std::abs(area - M_PI * 144.0) / (M_PI * 144.0) < 0.02);
}

TEST_CASE("ring keeps the annulus only") {
  const SplineGrid g = grid20();
  BodyShape b;
  b.geometry = RingShape{{10.0, 10.0}, 6.0, 4.0};
  const auto pts = discretize(b, steel(), g, 3, 1.0);
  REQUIRE(!pts.empty());
  for (const MaterialPoint& p : pts) {
    const double r = (p.x - Vec2(10.0, 10.0)).norm();
    CHECK(r <= 6.0 + 1e-12);
    CHECK(r >= 4.0 - 1e-12);
  }
  const double area = pts.size() / 9.0;
  const double exact = M_PI * (36.0 - 16.0);
  CHECK(std::abs(area - exact) / exact < 0.02);
}

TEST_CASE("polygon containment") {
  PolygonShape tri;
  tri.vertices = {{0.0, 0.0}, {4.0, 0.0}, {0.0, 4.0}};
  CHECK(shape_contains(ShapeGeometry{tri}, {1.0, 1.0}));
  CHECK(!shape_contains(ShapeGeometry{tri}, {3.0, 3.0}));
}

TEST_CASE("empty discretization is a configuration error") {
  const SplineGrid g = grid20();
  BodyShape b;
  b.name = "ghost";
  b.geometry = DiskShape{{10.0, 10.0}, 0.01};
  CHECK_THROWS_AS(discretize(b, steel(), g, 1, 1.0), ConfigError);
}

TEST_CASE("discretization is deterministic") {
  const SplineGrid g = grid20();
  BodyShape b;
  b.geometry = DiskShape{{10.0, 10.0}, 5.0};
  const auto a = discretize(b, steel(), g, 3, 1.0);
  const auto c = discretize(b, steel(), g, 3, 1.0);
  REQUIRE(a.size() == c.size());
  for (size_t i = 0; i < a.size(); ++i) CHECK(a[i].x == c[i].x);
}

TEST_CASE("pre-crack seeding magnitude and band") {
  const SplineGrid g = grid20();
  BodyShape b;
  b.name = "block";
  b.geometry = RectangleShape{{{2.0, 2.0}, {18.0, 18.0}}};
  const Material m = steel();
  auto pts = discretize(b, m, g, 3, 1.0);

  PreCrack crack;
  crack.body = "block";
  crack.from = {2.0, 10.0};
  crack.to = {10.0, 10.0};
  crack.seeding_magnitude = 1000.0;
  seed_precrack(pts, crack, m);

  const double peak = 1000.0 * m.Gc_bar / (4.0 * m.l0);
  double seen_peak = 0.0;
  for (const MaterialPoint& p : pts) {
    const double d = point_segment_distance(p.x, crack.from, crack.to);
    if (d >= m.l0) {
      CHECK(p.H == 0.0);
    } else {
      CHECK(p.H == doctest::Approx(peak * (1.0 - d / m.l0)));
      seen_peak = std::max(seen_peak, p.H);
    }
  }
  // nearest lattice point to the segment sits h/6 away
  CHECK(seen_peak > 0.8 * peak);

  // the formula at d = 0 is exactly B Gc / (4 l0)
  std::vector<MaterialPoint> one(1);
  one[0].x = {5.0, 10.0};
  seed_precrack(one, crack, m);
  CHECK(one[0].H == doctest::Approx(peak));

  PreCrack degenerate = crack;
  degenerate.to = degenerate.from;
  CHECK_THROWS_AS(seed_precrack(pts, degenerate, m), ConfigError);
}

TEST_CASE("initial velocity fields") {
  std::vector<MaterialPoint> pts(3);
  pts[0].x = {0.0, 0.0};
  pts[1].x = {0.0, 50.0};
  pts[2].x = {2.0, -10.0};

  SUBCASE("constant") {
    BodyShape b;
    b.initial_velocity.offset = {0.02, 0.0};
    apply_initial_velocity(pts, b);
    for (const auto& p : pts) CHECK(p.v == Vec2(0.02, 0.0));
  }
  SUBCASE("linear in y: vx = 0.0002 y") {
    BodyShape b;
    b.initial_velocity.matrix << 0.0, 0.0002, 0.0, 0.0;
    apply_initial_velocity(pts, b);
    CHECK(pts[0].v == Vec2(0.0, 0.0));
    CHECK(pts[1].v.x() == doctest::Approx(0.01));
    CHECK(pts[2].v.x() == doctest::Approx(-0.002));
  }
}

TEST_CASE("total mass matches the analytic area within 2 percent") {
  const SplineGrid g = SplineGrid::build({{0.0, 0.0}, {60.0, 60.0}}, 1.0, 2);
  BodyShape b;
  b.geometry = DiskShape{{30.0, 30.0}, 14.0};
  const Material m = steel();
  const auto pts = discretize(b, m, g, 3, 2.0);
  double mass = 0.0;
  for (const auto& p : pts) mass += p.M;
  const double exact = m.rho * M_PI * 14.0 * 14.0 * 2.0;
  CHECK(std::abs(mass - exact) / exact < 0.02);
}
