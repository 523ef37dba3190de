#pragma once

// Shared construction helpers for the unit tests.

#include <string>

#include "pfmpm/config.hpp"

namespace pfmpm::testing {

inline Material simple_material(double E = 190000.0, double nu = 0.3, double rho = 8000.0,
                                double l0 = 1.0, double Gc = 6.0,
                                PlaneMode plane = PlaneMode::Stress) {
  Material m;
  m.name = "mat";
  m.E = E;
  m.nu = nu;
  m.rho = rho;
  m.l0 = l0;
  m.Gc_bar = Gc;
  m.plane = plane;
  m.finalize();
  return m;
}

/// Single square body centered in a padded grid, at rest.
inline SimConfig single_block_config(double grid_w = 20.0, double grid_h = 20.0,
                                     double cell = 1.0) {
  SimConfig cfg;
  cfg.grid_bounds = {{0.0, 0.0}, {grid_w, grid_h}};
  cfg.h = cell;
  cfg.order = 2;
  cfg.thickness = 1.0;
  cfg.plane = PlaneMode::Stress;
  cfg.cell_density = 3;
  cfg.materials.push_back(simple_material());
  BodyShape b;
  b.name = "block";
  b.field_id = 0;
  b.material_id = 0;
  b.geometry = RectangleShape{{{grid_w / 2 - 4.0, grid_h / 2 - 4.0},
                               {grid_w / 2 + 4.0, grid_h / 2 + 4.0}}};
  cfg.bodies.push_back(b);
  cfg.solver.n_steps = 1;
  return cfg;
}

/// Two squares approaching head-on along x, one cell apart.
inline SimConfig two_block_impact_config(double v0 = 0.02, double mu_f = 0.0) {
  SimConfig cfg;
  cfg.grid_bounds = {{0.0, 0.0}, {30.0, 12.0}};
  cfg.h = 1.0;
  cfg.order = 2;
  cfg.thickness = 1.0;
  cfg.plane = PlaneMode::Stress;
  cfg.cell_density = 3;
  Material m = simple_material();
  m.Gc_bar = 1e9;  // keep both bodies effectively elastic
  cfg.materials.push_back(m);

  BodyShape left;
  left.name = "left";
  left.field_id = 0;
  left.material_id = 0;
  left.geometry = RectangleShape{{{4.0, 4.0}, {12.0, 8.0}}};
  left.initial_velocity.offset = {v0, 0.0};
  cfg.bodies.push_back(left);

  BodyShape right;
  right.name = "right";
  right.field_id = 1;
  right.material_id = 0;
  right.geometry = RectangleShape{{{13.0, 4.0}, {21.0, 8.0}}};
  right.initial_velocity.offset = {-v0, 0.0};
  cfg.bodies.push_back(right);

  cfg.contact.mu_f = mu_f;
  cfg.solver.n_steps = 1;
  return cfg;
}

}  // namespace pfmpm::testing
