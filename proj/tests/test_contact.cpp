#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "pfmpm/config.hpp"
#include "pfmpm/contact.hpp"

using namespace pfmpm;
using pfmpm::testing::two_block_impact_config;

namespace {

/// Two-field nodal fixture at a single node with prescribed masses, mass
/// gradients and trial velocities.
struct NodeFixture {
  std::vector<FieldNodalState> fields;
  const int node = 0;

  NodeFixture(double m1, double m2, const Vec2& g1, const Vec2& g2, const Vec2& v1,
              const Vec2& v2) {
    fields.resize(2);
    for (auto& f : fields) f.resize(4);
    set(0, m1, g1, v1);
    set(1, m2, g2, v2);
  }

  void set(int d, double m, const Vec2& g, const Vec2& v) {
    FieldNodalState& f = fields[d];
    f.mass[node] = m;
    f.mass_grad[node] = g;
    f.p_trial[node] = m * v;
    f.v_trial[node] = v;
    f.v_corr[node] = v;
    f.has_mass[node] = 1;
    f.active_nodes = {node};
  }
};

}  // namespace

TEST_CASE("detection requires both fields to carry mass at the node") {
  std::vector<FieldNodalState> fields(2);
  for (auto& f : fields) f.resize(8);
  ContactParams params;

  SUBCASE("one field only: empty") {
    fields[0].mass[3] = 1.0;
    fields[0].has_mass[3] = 1;
    fields[0].active_nodes = {3};
    CHECK(detect_contact(fields, params).empty());
  }
  SUBCASE("disjoint supports: empty") {
    fields[0].mass[1] = 1.0;
    fields[0].has_mass[1] = 1;
    fields[0].active_nodes = {1};
    fields[1].mass[5] = 1.0;
    fields[1].has_mass[5] = 1;
    fields[1].active_nodes = {5};
    CHECK(detect_contact(fields, params).empty());
  }
  SUBCASE("shared node is a candidate with collinear normals") {
    NodeFixture fx(1.0, 2.0, Vec2(1.0, 0.0), Vec2(-1.0, 0.0), Vec2::Zero(), Vec2::Zero());
    const auto nodes = detect_contact(fx.fields, params);
    REQUIRE(nodes.size() == 1);
    CHECK(!nodes[0].degenerate);
    CHECK((nodes[0].n1 - Vec2(1.0, 0.0)).norm() < 1e-15);
    CHECK((nodes[0].n1 + nodes[0].n2).norm() < 1e-15);
    CHECK(std::abs(nodes[0].s1.dot(nodes[0].n1)) < 1e-15);
  }
  SUBCASE("equal mass gradients are degenerate and skipped") {
    NodeFixture fx(1.0, 2.0, Vec2(1.0, 0.0), Vec2(1.0, 0.0), Vec2(1, 0), Vec2(-1, 0));
    auto nodes = detect_contact(fx.fields, params);
    REQUIRE(nodes.size() == 1);
    CHECK(nodes[0].degenerate);
    contact_forces(nodes, fx.fields, 0.1, params);
    CHECK(fx.fields[0].f_cont[0].norm() == 0.0);
  }
}

TEST_CASE("head-on equal masses stop at the node and share the impulse") {
  const double m = 2.0, v = 0.3, dt = 0.05;
  NodeFixture fx(m, m, Vec2(1, 0), Vec2(-1, 0), Vec2(v, 0), Vec2(-v, 0));
  ContactParams params;
  auto nodes = detect_contact(fx.fields, params);
  REQUIRE(nodes.size() == 1);
  contact_forces(nodes, fx.fields, dt, params);
  CHECK(nodes[0].gate);
  CHECK(nodes[0].f_nor == doctest::Approx(-m * v / dt));
  CHECK(nodes[0].f_tan == doctest::Approx(0.0));
  correct_velocities(fx.fields, dt);
  CHECK(fx.fields[0].v_corr[0].norm() < 1e-15);
  CHECK(fx.fields[1].v_corr[0].norm() < 1e-15);

  const auto report = verify_constraints(nodes, fx.fields, dt, params);
  CHECK(report.ok());
  CHECK(report.checked_nodes == 1);
}

TEST_CASE("separating bodies fail the gate and keep their trial velocities") {
  NodeFixture fx(1.0, 1.0, Vec2(1, 0), Vec2(-1, 0), Vec2(-0.2, 0), Vec2(0.2, 0));
  ContactParams params;
  auto nodes = detect_contact(fx.fields, params);
  contact_forces(nodes, fx.fields, 0.1, params);
  CHECK(!nodes[0].gate);
  CHECK(fx.fields[0].f_cont[0].norm() == 0.0);
  const Vec2 v0 = fx.fields[0].v_trial[0];
  correct_velocities(fx.fields, 0.1);
  CHECK(fx.fields[0].v_corr[0] == v0);  // bitwise: untouched
  CHECK(verify_constraints(nodes, fx.fields, 0.1, params).ok());
}

TEST_CASE("frictionless oblique impact corrects the normal component only") {
  const double dt = 0.02;
  NodeFixture fx(1.0, 3.0, Vec2(1, 0), Vec2(-1, 0), Vec2(0.4, 0.1), Vec2(-0.2, -0.3));
  ContactParams params;  // mu_f = 0
  auto nodes = detect_contact(fx.fields, params);
  contact_forces(nodes, fx.fields, dt, params);
  correct_velocities(fx.fields, dt);

  const Vec2 vcm = (1.0 * Vec2(0.4, 0.1) + 3.0 * Vec2(-0.2, -0.3)) / 4.0;
  // normal components match the center of mass, tangential components stand
  CHECK(fx.fields[0].v_corr[0].x() == doctest::Approx(vcm.x()).epsilon(1e-12));
  CHECK(fx.fields[1].v_corr[0].x() == doctest::Approx(vcm.x()).epsilon(1e-12));
  CHECK(fx.fields[0].v_corr[0].y() == doctest::Approx(0.1));
  CHECK(fx.fields[1].v_corr[0].y() == doctest::Approx(-0.3));
  CHECK(verify_constraints(nodes, fx.fields, dt, params).ok());
}

TEST_CASE("stick when inside the friction cone: both fields move at v_cm") {
  const double dt = 0.02;
  NodeFixture fx(1.0, 1.0, Vec2(1, 0), Vec2(-1, 0), Vec2(0.3, 0.02), Vec2(-0.3, -0.02));
  ContactParams params;
  params.mu_f = 2.0;  // large cone, stick
  auto nodes = detect_contact(fx.fields, params);
  contact_forces(nodes, fx.fields, dt, params);
  CHECK(!nodes[0].sliding);
  correct_velocities(fx.fields, dt);
  CHECK(fx.fields[0].v_corr[0].norm() < 1e-15);
  CHECK(fx.fields[1].v_corr[0].norm() < 1e-15);
  CHECK(verify_constraints(nodes, fx.fields, dt, params).ok());
}

TEST_CASE("sliding clamps the tangential force to the cone and opposes slip") {
  const double dt = 0.02;
  NodeFixture fx(1.0, 1.0, Vec2(1, 0), Vec2(-1, 0), Vec2(0.3, 0.2), Vec2(-0.3, -0.2));
  ContactParams params;
  params.mu_f = 0.1;
  auto nodes = detect_contact(fx.fields, params);
  contact_forces(nodes, fx.fields, dt, params);
  REQUIRE(nodes[0].gate);
  CHECK(nodes[0].sliding);
  CHECK(std::abs(nodes[0].f_tan) == doctest::Approx(params.mu_f * std::abs(nodes[0].f_nor)));
  correct_velocities(fx.fields, dt);
  // normal closed, tangential slip survives
  const double gamma_n =
      (fx.fields[0].v_corr[0] - fx.fields[1].v_corr[0]).dot(nodes[0].n1);
  const double gamma_s =
      (fx.fields[0].v_corr[0] - fx.fields[1].v_corr[0]).dot(nodes[0].s1);
  CHECK(std::abs(gamma_n) < 1e-15);
  CHECK(std::abs(gamma_s) > 0.0);
  CHECK(nodes[0].f_tan * gamma_s < 0.0);
  CHECK(verify_constraints(nodes, fx.fields, dt, params).ok());
}

TEST_CASE("clamped tension branch keeps separation force-free") {
  // Construct the clamp directly: force computation without the gate would
  // give a positive (tensile) normal force; min(0, .) zeroes it.
  const double dt = 0.1;
  NodeFixture fx(1.0, 1.0, Vec2(1, 0), Vec2(-1, 0), Vec2(-0.1, 0), Vec2(0.1, 0));
  ContactParams params;
  auto nodes = detect_contact(fx.fields, params);
  // bypass the gate to exercise the clamp
  const Vec2 vcm = Vec2::Zero();
  const double f_nor_s = (1.0 / dt) * (vcm - fx.fields[0].v_trial[0]).dot(nodes[0].n1);
  CHECK(f_nor_s > 0.0);
  CHECK(std::min(0.0, f_nor_s) == 0.0);
}

TEST_CASE("momentum is conserved pairwise for any contact resolution") {
  const double dt = 0.05;
  for (double mu : {0.0, 0.3, 5.0}) {
    NodeFixture fx(1.7, 0.6, Vec2(0.8, 0.6), Vec2(-0.7, -0.71), Vec2(0.25, -0.1),
                   Vec2(-0.15, 0.3));
    ContactParams params;
    params.mu_f = mu;
    auto nodes = detect_contact(fx.fields, params);
    const Vec2 before = 1.7 * fx.fields[0].v_trial[0] + 0.6 * fx.fields[1].v_trial[0];
    contact_forces(nodes, fx.fields, dt, params);
    correct_velocities(fx.fields, dt);
    const Vec2 after = 1.7 * fx.fields[0].v_corr[0] + 0.6 * fx.fields[1].v_corr[0];
    CHECK((after - before).norm() < 1e-14 * before.norm() + 1e-16);
    CHECK(verify_constraints(nodes, fx.fields, dt, params).ok());
  }
}

TEST_CASE("debug hook: broken collinearity is reported as a C.1 violation") {
  NodeFixture fx(1.0, 1.0, Vec2(1, 0), Vec2(-1, 0), Vec2(0.1, 0), Vec2(-0.1, 0));
  ContactParams params;
  params.debug_break_collinearity = true;
  auto nodes = detect_contact(fx.fields, params);
  contact_forces(nodes, fx.fields, 0.1, params);
  correct_velocities(fx.fields, 0.1);
  const auto report = verify_constraints(nodes, fx.fields, 0.1, params);
  REQUIRE(!report.ok());
  bool c1 = false;
  for (const auto& v : report.violations) c1 |= v.condition == "C.1";
  CHECK(c1);
}

TEST_CASE("two approaching blocks in a real grid meet at the midplane") {
  // end-to-end: contact through p2g from a real two-body configuration
  SimConfig cfg = two_block_impact_config(0.02);
  Simulation sim = build_simulation(cfg);
  // step until the contact gate first fires, then verify constraints hold
  bool saw_contact = false;
  for (int s = 0; s < 60 && !saw_contact; ++s) {
    const StepStats st = sim.step();
    saw_contact = st.gated_nodes > 0;
  }
  CHECK(saw_contact);
  const auto report =
      verify_constraints({}, sim.fields(), sim.dt(), ContactParams{});
  CHECK(report.ok());

  // total linear momentum is conserved through the impact
  Vec2 total = Vec2::Zero();
  for (const auto& p : sim.particles()) total += p.M * p.v;
  CHECK(std::abs(total.x()) < 1e-12);
  CHECK(std::abs(total.y()) < 1e-12);
}
