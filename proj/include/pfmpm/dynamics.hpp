#pragma once

#include <vector>

#include "pfmpm/bspline.hpp"
#include "pfmpm/domain.hpp"

namespace pfmpm {

/// Nodal arrays for one discrete field, dense over the grid nodes.
struct FieldNodalState {
  Eigen::VectorXd mass;            // lumped mass M^u
  std::vector<Vec2> mass_grad;     // sum_p grad N_I M_p, for contact normals
  std::vector<Vec2> momentum;
  std::vector<Vec2> f_int;
  std::vector<Vec2> f_ext;
  std::vector<Vec2> f_cont;
  std::vector<Vec2> p_trial;
  std::vector<Vec2> v_trial;
  std::vector<Vec2> v_corr;
  std::vector<char> has_mass;      // above the inert-node threshold
  std::vector<int> active_nodes;   // nodes supporting at least one particle

  void resize(int node_count);
  void reset();
};

struct FixedBoundary {
  Rect band;        // grid nodes inside are constrained
  bool fix_x = true;
  bool fix_y = true;
};

struct Loads {
  Vec2 gravity = Vec2::Zero();  // mm/us^2
  std::vector<TractionLoad> tractions;
};

/// Mass, mass gradients, momentum and internal forces from the particles.
void p2g(const std::vector<MaterialPoint>& particles, const std::vector<int>& field_particles,
         const std::vector<BasisEval>& eval_global, FieldNodalState& state);

/// Body forces on all particles plus traction carried by the nearest-to-surface
/// particle layer inside each load band (per-particle force =
/// traction * lattice spacing * thickness).
void external_forces(const std::vector<MaterialPoint>& particles, int field_id,
                     const std::vector<int>& field_particles,
                     const std::vector<BasisEval>& eval_global, const Loads& loads,
                     double lattice_spacing, double thickness, double t_us,
                     const std::vector<std::vector<int>>& traction_carriers,
                     FieldNodalState& state);

/// Particle indices carrying each traction load (one layer per load). Computed
/// once at t=0; throws if a band selects no particles.
std::vector<std::vector<int>> traction_carrier_layers(const std::vector<MaterialPoint>& particles,
                                                      const Loads& loads,
                                                      double lattice_spacing);

/// Grid nodes whose basis support intersects a fixed band, with a component
/// mask (1 = x, 2 = y).
std::vector<std::pair<int, int>> constrained_nodes(const SplineGrid& grid,
                                                   const std::vector<FixedBoundary>& fixed);

void apply_constraint_mask(const std::vector<std::pair<int, int>>& constrained,
                           FieldNodalState& state, bool contact_only);

/// Zeroes constrained components of momentum and forces on nodes whose
/// supports intersect the fixed bands.
void apply_essential_bcs(const SplineGrid& grid, const std::vector<FixedBoundary>& fixed,
                         FieldNodalState& state);

/// p_trial = p + dt (f_ext - f_int); v_trial = p_trial / M on non-inert nodes.
void trial_update(FieldNodalState& state, double dt);

/// Strain increment from the symmetric gradient of end-of-step nodal
/// velocities; stress through the degradation split; psi+ and the working
/// history field. With `double_map` the nodal velocities are re-projected
/// from the FLIP-updated particle velocities before the gradient is taken
/// (the velocities in state.v_corr are used directly otherwise).
void update_strain_stress(std::vector<MaterialPoint>& particles,
                          const std::vector<int>& field_particles,
                          const std::vector<BasisEval>& eval_global, const FieldNodalState& state,
                          const std::vector<Material>& materials, double dt, bool double_map);

/// FLIP particle update: displacement/position from corrected velocities,
/// velocity from nodal force increments, acceleration as a diagnostic, and
/// commit of the working strain/stress/history.
void advect_particles(std::vector<MaterialPoint>& particles,
                      const std::vector<int>& field_particles,
                      const std::vector<BasisEval>& eval_global, const FieldNodalState& state,
                      double dt);

}  // namespace pfmpm
