#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pfmpm/bspline.hpp"
#include "pfmpm/constitutive.hpp"
#include "pfmpm/gamma.hpp"
#include "pfmpm/types.hpp"

namespace pfmpm {

struct Material {
  std::string name;
  double E = 0.0;        // N/mm^2
  double nu = 0.0;
  double rho = 0.0;      // kg/m^3 == consistent mass unit per mm^3
  double l0 = 1.0;       // mm
  double k_f = 0.0;
  double Gc_bar = 1.0;   // N/mm
  double phi = 0.0;      // material orientation, radians
  GammaTensor gamma;
  PlaneMode plane = PlaneMode::Stress;
  LameParams lame;       // derived

  void finalize() { lame = lame_from_engineering(E, nu, rho, plane); }
};

struct MaterialPoint {
  int field_id = 0;
  Vec2 x = Vec2::Zero();   // position, mm
  Vec2 u = Vec2::Zero();   // displacement, mm
  Vec2 v = Vec2::Zero();   // velocity, mm/us
  Vec2 a = Vec2::Zero();   // acceleration, mm/us^2 (diagnostic)
  double V = 0.0;          // volume, mm^3
  double M = 0.0;          // mass, N us^2/mm
  double rho = 0.0;
  Mat2 eps = Mat2::Zero(); // committed strain
  Mat2 sig = Mat2::Zero(); // committed stress, N/mm^2
  double H = 0.0;          // history field, N/mm^2
  double c = 1.0;          // phase field value at the particle
  int material_id = 0;
  double phi = 0.0;        // material orientation

  // Per-step working state owned by the solver.
  Vec2 grad_c = Vec2::Zero();        // global frame
  Mat2 hess_c = Mat2::Zero();        // material frame
  double g = 1.0;                    // degradation
  Mat2 eps_work = Mat2::Zero();
  Mat2 sig_work = Mat2::Zero();
  double psi_plus = 0.0;
  double psi_minus = 0.0;
  double H_work = 0.0;
};

struct RectangleShape {
  Rect rect;
};
struct DiskShape {
  Vec2 center = Vec2::Zero();
  double radius = 0.0;
};
struct RingShape {
  Vec2 center = Vec2::Zero();
  double r_outer = 0.0;
  double r_inner = 0.0;
};
struct PolygonShape {
  std::vector<Vec2> vertices;  // counter-clockwise, implicitly closed
};

using ShapeGeometry = std::variant<RectangleShape, DiskShape, RingShape, PolygonShape>;

/// Initial velocity: v(x) = offset + matrix * (x - origin).
struct VelocityField {
  Vec2 offset = Vec2::Zero();
  Mat2 matrix = Mat2::Zero();
  Vec2 origin = Vec2::Zero();
  Vec2 at(const Vec2& x) const { return offset + matrix * (x - origin); }
};

struct BodyShape {
  std::string name;
  ShapeGeometry geometry;
  int field_id = 0;
  int material_id = 0;
  VelocityField initial_velocity;
};

bool shape_contains(const ShapeGeometry& shape, const Vec2& p);

struct PreCrack {
  std::string body;                // body whose particles are seeded
  Vec2 from = Vec2::Zero();
  Vec2 to = Vec2::Zero();
  double seeding_magnitude = 1000.0;  // multiplier B
};

enum class EdgeNormal { PlusX, MinusX, PlusY, MinusY };

struct TractionLoad {
  Rect band;                  // selects boundary-layer particles
  EdgeNormal surface_normal = EdgeNormal::PlusY;  // outward normal of the loaded surface
  Vec2 traction = Vec2::Zero();                   // N/mm^2
  double ramp_us = 0.0;       // 0 = constant; otherwise linear ramp to full value
};

/// Cell-regular lattice fill: each grid cell is subdivided cell_density times
/// per axis, candidate points sit at subcell centers, and a point is kept iff
/// its center lies inside the shape. V = (h/cell_density)^2 * thickness.
std::vector<MaterialPoint> discretize(const BodyShape& body, const Material& material,
                                      const SplineGrid& grid, int cell_density,
                                      double thickness);

/// For each point within distance l0 of the segment:
/// H = max(H, B * Gc_bar/(4 l0) * (1 - d/l0)).
void seed_precrack(std::vector<MaterialPoint>& points, const PreCrack& crack,
                   const Material& material);

void apply_initial_velocity(std::vector<MaterialPoint>& points, const BodyShape& body);

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b);

}  // namespace pfmpm
