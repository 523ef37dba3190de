#include "pfmpm/domain.hpp"

#include <cmath>

namespace pfmpm {

bool shape_contains(const ShapeGeometry& shape, const Vec2& p) {
  return std::visit(
      [&p](const auto& s) -> bool {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, RectangleShape>) {
          return s.rect.contains(p);
        } else if constexpr (std::is_same_v<T, DiskShape>) {
          return (p - s.center).squaredNorm() <= s.radius * s.radius;
        } else if constexpr (std::is_same_v<T, RingShape>) {
          const double r2 = (p - s.center).squaredNorm();
          return r2 <= s.r_outer * s.r_outer && r2 >= s.r_inner * s.r_inner;
        } else {
          // Even-odd ray casting.
          const auto& v = s.vertices;
          bool in = false;
          const size_t n = v.size();
          for (size_t i = 0, j = n - 1; i < n; j = i++) {
            const bool cross = (v[i].y() > p.y()) != (v[j].y() > p.y());
            if (cross) {
              const double xint =
                  v[j].x() + (v[i].x() - v[j].x()) * (p.y() - v[j].y()) / (v[i].y() - v[j].y());
              if (p.x() < xint) in = !in;
            }
          }
          return in;
        }
      },
      shape);
}

std::vector<MaterialPoint> discretize(const BodyShape& body, const Material& material,
                                      const SplineGrid& grid, int cell_density,
                                      double thickness) {
  if (cell_density < 1) throw ConfigError("cell density must be at least 1");
  const double h = grid.h();
  const double spacing = h / cell_density;
  const Vec2 origin = grid.bounds().min;

  std::vector<MaterialPoint> points;
  const int nx = grid.spans(0) * cell_density;
  const int ny = grid.spans(1) * cell_density;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const Vec2 x = origin + Vec2((i + 0.5) * spacing, (j + 0.5) * spacing);
      if (!shape_contains(body.geometry, x)) continue;
      MaterialPoint p;
      p.field_id = body.field_id;
      p.material_id = body.material_id;
      p.x = x;
      p.V = spacing * spacing * thickness;
      p.rho = material.rho;
      p.M = material.rho * p.V;
      p.phi = material.phi;
      points.push_back(p);
    }
  }
  if (points.empty())
    throw ConfigError("body '" + body.name + "' produced no material points");
  return points;
}

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 == 0.0) return (p - a).norm();
  const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

void seed_precrack(std::vector<MaterialPoint>& points, const PreCrack& crack,
                   const Material& material) {
  if ((crack.to - crack.from).norm() <= 0.0)
    throw ConfigError("pre-crack segment has zero length");
  const double l0 = material.l0;
  const double peak = crack.seeding_magnitude * material.Gc_bar / (4.0 * l0);
  for (MaterialPoint& p : points) {
    const double d = point_segment_distance(p.x, crack.from, crack.to);
    if (d < l0) p.H = std::max(p.H, peak * (1.0 - d / l0));
  }
}

void apply_initial_velocity(std::vector<MaterialPoint>& points, const BodyShape& body) {
  for (MaterialPoint& p : points) p.v = body.initial_velocity.at(p.x);
}

}  // namespace pfmpm
