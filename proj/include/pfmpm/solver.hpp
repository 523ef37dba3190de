#pragma once

#include <functional>
#include <vector>

#include "pfmpm/contact.hpp"
#include "pfmpm/dynamics.hpp"
#include "pfmpm/phase_field.hpp"

namespace pfmpm {

struct SolverControls {
  double dt = 0.0;          // explicit timestep; <= 0 selects the CFL value
  double alpha_c = 0.80;    // CFL safety factor
  long n_steps = 0;
  int n_staggs = 1;
  double tol_c = 1e-6;      // phase-field residual tolerance
  int check_every = 100;    // constraint-check stride outside check mode
  bool phase_field_on = true;
  double blowup_factor = 2.0;
  bool check_mode = false;  // verify constraints and invariants every step
  // Strain increments from double-mapped (re-projected) end-of-step particle
  // velocities instead of the corrected nodal velocities directly.
  bool double_map_strain = true;
};

struct EnergyRecord {
  double t = 0.0;
  double elastic = 0.0;   // mJ
  double fracture = 0.0;  // mJ
  double kinetic = 0.0;   // mJ
};

struct StepStats {
  int staggers = 0;
  int pf_solves = 0;
  double residual_first = 0.0;
  double residual_last = 0.0;
  int contact_nodes = 0;
  int gated_nodes = 0;
  long violations = 0;
};

struct RunSummary {
  long steps = 0;
  double wall_seconds = 0.0;
  double max_residual = 0.0;
  long violations = 0;
};

struct RunHooks {
  std::function<void(const class Simulation&, long step)> on_snapshot;
  std::function<void(const EnergyRecord&)> on_energy;
  std::function<void(long step, const ConstraintReport&)> on_constraints;
  long snapshot_every = 0;  // 0 disables intermediate snapshots
  long energy_every = 1;
};

/// dt_cr = alpha_c * h / max material dilatational wave speed.
double critical_dt(const std::vector<Material>& materials, double h, double alpha_c = 0.80);

/// One-step-at-a-time driver for the staggered explicit scheme.
class Simulation {
 public:
  Simulation(SplineGrid grid, std::vector<Material> materials,
             std::vector<MaterialPoint> particles, int n_fields, Loads loads,
             std::vector<FixedBoundary> fixed, ContactParams contact, SolverControls controls,
             double thickness, double lattice_spacing);

  StepStats step();
  RunSummary run(const RunHooks& hooks);

  EnergyRecord energies() const;

  const std::vector<MaterialPoint>& particles() const { return particles_; }
  const std::vector<Material>& materials() const { return materials_; }
  const SplineGrid& grid() const { return grid_; }
  const SolverControls& controls() const { return controls_; }
  const std::vector<FieldNodalState>& fields() const { return fields_; }
  const std::vector<PhaseFieldSystem>& phase_field_systems() const { return systems_; }
  const ConstraintReport& last_constraint_report() const { return last_report_; }
  double t() const { return t_; }
  long step_count() const { return step_count_; }
  double dt() const { return controls_.dt; }
  long total_pf_solves() const { return total_pf_solves_; }
  double external_work() const { return external_work_; }
  int n_fields() const { return n_fields_; }

 private:
  SplineGrid grid_;
  std::vector<Material> materials_;
  std::vector<MaterialPoint> particles_;
  int n_fields_;
  Loads loads_;
  std::vector<FixedBoundary> fixed_;
  ContactParams contact_;
  SolverControls controls_;
  double thickness_;
  double lattice_spacing_;

  std::vector<std::vector<int>> field_particles_;
  std::vector<std::vector<int>> traction_carriers_;
  std::vector<std::pair<int, int>> constrained_;
  std::vector<FieldNodalState> fields_;
  std::vector<PhaseFieldSystem> systems_;
  std::vector<BasisEval> eval_global_;
  std::vector<BasisEval> eval_material_;
  bool needs_material_frame_ = false;

  double t_ = 0.0;
  long step_count_ = 0;
  long total_pf_solves_ = 0;
  double external_work_ = 0.0;
  double energy_reference_ = -1.0;  // set after the first step
  ConstraintReport last_report_;

  void evaluate_bases();
  void pinned_phase_field();
  void check_energy_bound();
  void check_invariants();
};

}  // namespace pfmpm
