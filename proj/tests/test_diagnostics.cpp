#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "pfmpm/diagnostics.hpp"

using namespace pfmpm;

namespace {

SnapshotFrame frame_at(double t, const std::vector<SnapshotRow>& rows) {
  SnapshotFrame f;
  f.t = t;
  f.rows = rows;
  return f;
}

SnapshotRow particle(double x, double y, double c, int field = 0) {
  SnapshotRow r;
  r.x = x;
  r.y = y;
  r.c = c;
  r.field_id = field;
  return r;
}

}  // namespace

TEST_CASE("static damaged region has zero tip speed") {
  std::vector<SnapshotFrame> frames;
  for (int i = 0; i < 6; ++i)
    frames.push_back(frame_at(i * 1.0, {particle(3.0, 1.0, 0.1), particle(5.0, 1.0, 0.9)}));
  const auto tracks = track_tip(frames, 'x');
  REQUIRE(tracks.size() == 6);
  for (const auto& t : tracks) {
    CHECK(t.tip_position == doctest::Approx(3.0));
    CHECK(t.tip_speed == doctest::Approx(0.0));
    CHECK(!t.non_monotone);
  }
}

TEST_CASE("synthetic advancing tip: 0.1 mm per frame at 1 us spacing") {
  std::vector<SnapshotFrame> frames;
  for (int i = 0; i < 10; ++i)
    frames.push_back(frame_at(i * 1.0, {particle(2.0 + 0.1 * i, 0.0, 0.2)}));
  const auto tracks = track_tip(frames, 'x');
  REQUIRE(tracks.size() == 10);
  for (const auto& t : tracks) CHECK(t.tip_speed == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("reversed-time sequence yields negated speeds") {
  std::vector<SnapshotFrame> fwd, rev;
  for (int i = 0; i < 8; ++i)
    fwd.push_back(frame_at(i * 2.0, {particle(1.0 + 0.3 * i, 0.0, 0.1)}));
  for (int i = 0; i < 8; ++i)
    rev.push_back(frame_at(i * 2.0, {particle(1.0 + 0.3 * (7 - i), 0.0, 0.1)}));
  const auto tf = track_tip(fwd, 'x');
  const auto tr = track_tip(rev, 'x');
  REQUIRE(tf.size() == tr.size());
  for (size_t i = 0; i < tf.size(); ++i)
    CHECK(tr[i].tip_speed == doctest::Approx(-tf[tf.size() - 1 - i].tip_speed));
  // retreating tips are flagged, not erased
  bool flagged = false;
  for (const auto& t : tr) flagged |= t.non_monotone;
  CHECK(flagged);
}

TEST_CASE("frames without sub-threshold particles yield an empty track") {
  std::vector<SnapshotFrame> frames{frame_at(0.0, {particle(1.0, 1.0, 0.99)})};
  CHECK(track_tip(frames, 'x').empty());
}

TEST_CASE("region and field filters restrict the tracked set") {
  std::vector<SnapshotFrame> frames{frame_at(
      0.0, {particle(9.0, 0.0, 0.1, 1), particle(4.0, 0.0, 0.1, 0), particle(6.0, 5.0, 0.1, 0)})};
  const Rect band{{0.0, -1.0}, {10.0, 1.0}};
  const auto tracks = track_tip(frames, 'x', 0.5, &band, 0);
  REQUIRE(tracks.size() == 1);
  CHECK(tracks[0].tip_position == doctest::Approx(4.0));
}

TEST_CASE("fragment counting") {
  SUBCASE("intact body is one fragment") {
    std::vector<SnapshotRow> rows;
    for (int i = 0; i < 10; ++i)
      for (int j = 0; j < 3; ++j) rows.push_back(particle(i * 0.3, j * 0.3, 1.0));
    CHECK(count_fragments(frame_at(0.0, rows), 0, 0.45) == 1);
  }
  SUBCASE("a removed band wider than the link radius splits the body") {
    std::vector<SnapshotRow> rows;
    for (int i = 0; i < 10; ++i) {
      const double x = i * 0.3;
      const double c = (x > 1.2 && x < 1.9) ? 0.01 : 1.0;  // dead band
      rows.push_back(particle(x, 0.0, c));
    }
    CHECK(count_fragments(frame_at(0.0, rows), 0, 0.45) == 2);
  }
  SUBCASE("count is invariant to particle order") {
    std::vector<SnapshotRow> rows;
    for (int i = 0; i < 40; ++i) rows.push_back(particle(i % 7 * 1.1, i / 7 * 1.3, 1.0));
    const int a = count_fragments(frame_at(0.0, rows), 0, 1.4);
    std::reverse(rows.begin(), rows.end());
    const int b = count_fragments(frame_at(0.0, rows), 0, 1.4);
    CHECK(a == b);
  }
  SUBCASE("fields are counted separately") {
    std::vector<SnapshotRow> rows{particle(0, 0, 1.0, 0), particle(5, 0, 1.0, 1)};
    CHECK(count_fragments(frame_at(0.0, rows), 0, 1.0) == 1);
    CHECK(count_fragments(frame_at(0.0, rows), 1, 1.0) == 1);
  }
}

TEST_CASE("rayleigh speed matches the published 2125 m/s anchor") {
  const LameParams lame = lame_from_engineering(32000.0, 0.2, 2450.0, PlaneMode::Strain);
  const double cr = rayleigh_speed(lame, 2450.0);
  CHECK(cr == doctest::Approx(2.125).epsilon(0.005));  // mm/us
  // always below the shear speed
  CHECK(cr < std::sqrt(lame.mu / 2450.0));
}
