#include "pfmpm/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <unordered_map>

namespace pfmpm {

std::vector<TipTrack> track_tip(const std::vector<SnapshotFrame>& frames, char axis,
                                double c_threshold, const Rect* region, int field_id) {
  std::vector<TipTrack> tracks;
  for (const SnapshotFrame& f : frames) {
    double tip = -std::numeric_limits<double>::infinity();
    bool found = false;
    for (const SnapshotRow& r : f.rows) {
      if (r.c >= c_threshold) continue;
      if (field_id >= 0 && r.field_id != field_id) continue;
      const Vec2 x(r.x, r.y);
      if (region && !region->contains(x)) continue;
      tip = std::max(tip, axis == 'x' ? r.x : r.y);
      found = true;
    }
    if (!found) continue;
    TipTrack tt;
    tt.t = f.t;
    tt.tip_position = tip;
    tracks.push_back(tt);
  }

  const int n = static_cast<int>(tracks.size());
  for (int i = 0; i < n; ++i) {
    const int lo = std::max(0, i - 2);
    const int hi = std::min(n - 1, i + 2);
    const double dt = tracks[hi].t - tracks[lo].t;
    tracks[i].tip_speed = dt != 0.0 ? (tracks[hi].tip_position - tracks[lo].tip_position) / dt : 0.0;
    if (i > 0 && tracks[i].tip_position < tracks[i - 1].tip_position - 1e-12)
      tracks[i].non_monotone = true;
  }
  return tracks;
}

int count_fragments(const SnapshotFrame& frame, int field_id, double link_radius,
                    double c_threshold) {
  std::vector<Vec2> pts;
  for (const SnapshotRow& r : frame.rows)
    if (r.field_id == field_id && r.c >= c_threshold) pts.emplace_back(r.x, r.y);
  if (pts.empty()) return 0;

  const int n = static_cast<int>(pts.size());
  std::vector<int> parent(n);
  for (int i = 0; i < n; ++i) parent[i] = i;
  std::function<int(int)> find = [&](int i) {
    while (parent[i] != i) {
      parent[i] = parent[parent[i]];
      i = parent[i];
    }
    return i;
  };
  auto unite = [&](int a, int b) { parent[find(a)] = find(b); };

  // Spatial hash with cell size = link radius.
  const double cell = link_radius;
  std::unordered_map<long long, std::vector<int>> bins;
  auto key = [&](const Vec2& p) {
    const long long ix = static_cast<long long>(std::floor(p.x() / cell));
    const long long iy = static_cast<long long>(std::floor(p.y() / cell));
    return (ix << 32) ^ (iy & 0xffffffffLL);
  };
  for (int i = 0; i < n; ++i) bins[key(pts[i])].push_back(i);

  const double r2 = link_radius * link_radius;
  for (int i = 0; i < n; ++i) {
    const long long ix = static_cast<long long>(std::floor(pts[i].x() / cell));
    const long long iy = static_cast<long long>(std::floor(pts[i].y() / cell));
    for (long long dx = -1; dx <= 1; ++dx) {
      for (long long dy = -1; dy <= 1; ++dy) {
        const long long k = ((ix + dx) << 32) ^ ((iy + dy) & 0xffffffffLL);
        auto it = bins.find(k);
        if (it == bins.end()) continue;
        for (int j : it->second)
          if (j > i && (pts[i] - pts[j]).squaredNorm() <= r2) unite(i, j);
      }
    }
  }

  int components = 0;
  for (int i = 0; i < n; ++i)
    if (find(i) == i) ++components;
  return components;
}

double rayleigh_speed(const LameParams& lame, double rho) {
  const double cs = std::sqrt(lame.mu / rho);
  const double cp = lame.c_dil;
  const double kappa2 = (cs * cs) / (cp * cp);
  // Secular equation (2 - x^2)^2 = 4 sqrt(1 - x^2) sqrt(1 - kappa^2 x^2),
  // x = c_R / c_s in (0, 1).
  auto f = [&](double x) {
    const double x2 = x * x;
    return (2.0 - x2) * (2.0 - x2) - 4.0 * std::sqrt(1.0 - x2) * std::sqrt(1.0 - kappa2 * x2);
  };
  double lo = 1e-6, hi = 1.0 - 1e-12;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (f(lo) * f(mid) <= 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi) * cs;
}

void write_tip_track_csv(const std::string& path, const std::vector<TipTrack>& tracks) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << "t_us,tip_mm,speed_mm_per_us\n";
  for (const TipTrack& t : tracks)
    out << format_sci(t.t) << ',' << format_sci(t.tip_position) << ',' << format_sci(t.tip_speed)
        << '\n';
  if (!out) throw IoError("write failed for '" + path + "'");
}

void write_fragments_csv(const std::string& path, const std::vector<FragmentCount>& counts) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << "t_us,field_id,fragments\n";
  for (const FragmentCount& c : counts)
    out << format_sci(c.t) << ',' << c.field_id << ',' << c.fragments << '\n';
  if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace pfmpm
