#include "pfmpm/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

namespace pfmpm {

double critical_dt(const std::vector<Material>& materials, double h, double alpha_c) {
  double c_max = 0.0;
  for (const Material& m : materials) c_max = std::max(c_max, m.lame.c_dil);
  if (!(c_max > 0.0)) throw ConfigError("no material with a positive wave speed");
  return alpha_c * h / c_max;
}

Simulation::Simulation(SplineGrid grid, std::vector<Material> materials,
                       std::vector<MaterialPoint> particles, int n_fields, Loads loads,
                       std::vector<FixedBoundary> fixed, ContactParams contact,
                       SolverControls controls, double thickness, double lattice_spacing)
    : grid_(std::move(grid)),
      materials_(std::move(materials)),
      particles_(std::move(particles)),
      n_fields_(n_fields),
      loads_(std::move(loads)),
      fixed_(std::move(fixed)),
      contact_(contact),
      controls_(controls),
      thickness_(thickness),
      lattice_spacing_(lattice_spacing) {
  if (n_fields_ < 1) throw ConfigError("at least one discrete field is required");
  if (controls_.dt <= 0.0)
    controls_.dt = critical_dt(materials_, grid_.h(), controls_.alpha_c);
  if (controls_.n_staggs < 1) throw ConfigError("N_staggs must be at least 1");

  field_particles_.resize(n_fields_);
  for (size_t i = 0; i < particles_.size(); ++i) {
    const int d = particles_[i].field_id;
    if (d < 0 || d >= n_fields_) throw ConfigError("particle references an unknown field");
    field_particles_[d].push_back(static_cast<int>(i));
  }

  traction_carriers_ = traction_carrier_layers(particles_, loads_, lattice_spacing_);
  constrained_ = constrained_nodes(grid_, fixed_);

  fields_.resize(n_fields_);
  for (FieldNodalState& f : fields_) f.resize(grid_.node_count());
  systems_.resize(n_fields_);
  eval_global_.resize(particles_.size());

  for (const Material& m : materials_)
    if (m.phi != 0.0) needs_material_frame_ = true;
  if (needs_material_frame_) eval_material_.resize(particles_.size());
}

void Simulation::evaluate_bases() {
  for (size_t i = 0; i < particles_.size(); ++i) {
    try {
      eval_global_[i] = grid_.eval_basis(particles_[i].x);
    } catch (const OutOfDomainError& e) {
      std::ostringstream os;
      os << "particle " << i << " at step " << step_count_ << ": " << e.what();
      throw OutOfDomainError(os.str());
    }
    if (needs_material_frame_)
      eval_material_[i] = rotate_derivatives(eval_global_[i], -particles_[i].phi);
  }
}

void Simulation::pinned_phase_field() {
  for (MaterialPoint& p : particles_) {
    p.c = 1.0;
    p.grad_c.setZero();
    p.hess_c.setZero();
    p.g = degradation(1.0, materials_[p.material_id].k_f);
  }
}

StepStats Simulation::step() {
  StepStats stats;
  const double dt = controls_.dt;
  const std::vector<BasisEval>& eval_mat = needs_material_frame_ ? eval_material_ : eval_global_;

  for (MaterialPoint& p : particles_) {
    p.H_work = p.H;
    p.eps_work = p.eps;
    p.sig_work = p.sig;
  }

  evaluate_bases();

  for (int d = 0; d < n_fields_; ++d) {
    fields_[d].reset();
    p2g(particles_, field_particles_[d], eval_global_, fields_[d]);
  }

  std::vector<ContactNode> contacts = detect_contact(fields_, contact_);
  stats.contact_nodes = static_cast<int>(contacts.size());

  for (int d = 0; d < n_fields_; ++d) {
    external_forces(particles_, d, field_particles_[d], eval_global_, loads_, lattice_spacing_,
                    thickness_, t_, traction_carriers_, fields_[d]);
    apply_constraint_mask(constrained_, fields_[d], false);
  }

  if (!controls_.phase_field_on) pinned_phase_field();

  for (int k = 1; k <= controls_.n_staggs; ++k) {
    stats.staggers = k;

    if (controls_.phase_field_on) {
      for (int d = 0; d < n_fields_; ++d) {
        systems_[d] = assemble_phase_field(particles_, field_particles_[d], eval_mat, materials_,
                                           grid_.node_count());
        solve_phase_field(systems_[d]);
        interpolate_c(particles_, field_particles_[d], eval_global_, eval_mat, systems_[d],
                      materials_);
        ++stats.pf_solves;
        ++total_pf_solves_;
      }
    }

    for (int d = 0; d < n_fields_; ++d) {
      for (int n : fields_[d].active_nodes) fields_[d].f_cont[n].setZero();
      trial_update(fields_[d], dt);
    }

    contact_forces(contacts, fields_, dt, contact_);
    for (int d = 0; d < n_fields_; ++d) apply_constraint_mask(constrained_, fields_[d], true);
    correct_velocities(fields_, dt);

    for (int d = 0; d < n_fields_; ++d)
      update_strain_stress(particles_, field_particles_[d], eval_global_, fields_[d], materials_,
                           dt, controls_.double_map_strain);

    if (controls_.phase_field_on) {
      double r2 = 0.0;
      for (int d = 0; d < n_fields_; ++d) {
        if (systems_[d].empty()) continue;
        r2 += residual_phase_field(particles_, field_particles_[d], eval_global_, eval_mat,
                                   systems_[d], materials_)
                  .squaredNorm();
      }
      const double r = std::sqrt(r2);
      if (k == 1) stats.residual_first = r;
      stats.residual_last = r;
      if (r <= controls_.tol_c) break;
    } else {
      break;
    }
  }

  for (const ContactNode& cn : contacts)
    if (cn.gate) ++stats.gated_nodes;

  const bool do_check =
      controls_.check_mode || (controls_.check_every > 0 && step_count_ % controls_.check_every == 0);
  if (do_check) {
    last_report_ = verify_constraints(contacts, fields_, dt, contact_);
    stats.violations = static_cast<long>(last_report_.violations.size());
    if (controls_.check_mode) check_invariants();
  }

  for (int d = 0; d < n_fields_; ++d)
    advect_particles(particles_, field_particles_[d], eval_global_, fields_[d], dt);

  for (size_t i = 0; i < particles_.size(); ++i) {
    if (!grid_.inside(particles_[i].x)) {
      std::ostringstream os;
      os << "particle " << i << " left the grid at step " << step_count_ << " (position "
         << particles_[i].x.x() << ", " << particles_[i].x.y() << ")";
      throw OutOfDomainError(os.str());
    }
  }

  // External work feeds the energy-boundedness monitor.
  double dW = 0.0;
  for (int d = 0; d < n_fields_; ++d)
    for (int n : fields_[d].active_nodes) dW += dt * fields_[d].f_ext[n].dot(fields_[d].v_corr[n]);
  external_work_ += dW;

  t_ += dt;
  ++step_count_;

  if (energy_reference_ < 0.0) {
    const EnergyRecord e = energies();
    energy_reference_ = e.elastic + e.fracture + e.kinetic;
  }
  check_energy_bound();
  return stats;
}

EnergyRecord Simulation::energies() const {
  EnergyRecord rec;
  rec.t = t_;
  for (const MaterialPoint& p : particles_) {
    const Material& m = materials_[p.material_id];
    rec.elastic += (p.g * p.psi_plus + p.psi_minus) * p.V;
    const double cm1 = p.c - 1.0;
    double z = cm1 * cm1 / (4.0 * m.l0) + m.l0 * p.grad_c.squaredNorm();
    if (!m.gamma.is_zero())
      z += m.l0 * m.l0 * m.l0 * m.gamma.contract(p.hess_c, p.hess_c);
    rec.fracture += m.Gc_bar * z * p.V;
    rec.kinetic += 0.5 * p.M * p.v.squaredNorm();
  }
  return rec;
}

void Simulation::check_energy_bound() {
  if (energy_reference_ < 0.0) return;
  const EnergyRecord e = energies();
  const double total = e.elastic + e.fracture + e.kinetic;
  const double budget = 1.05 * (energy_reference_ + std::max(external_work_, 0.0));
  if (total > controls_.blowup_factor * budget + 1e-9) {
    std::ostringstream os;
    os << "energy blow-up detected at step " << step_count_ << ": total " << total
       << " mJ exceeds " << controls_.blowup_factor << "x budget " << budget << " mJ";
    throw BlowUpError(os.str());
  }
}

void Simulation::check_invariants() {
  // Mass conservation per field between particles and grid.
  for (int d = 0; d < n_fields_; ++d) {
    double mp = 0.0;
    for (int pi : field_particles_[d]) mp += particles_[pi].M;
    double mg = 0.0;
    for (int n : fields_[d].active_nodes) mg += fields_[d].mass[n];
    if (std::abs(mg - mp) > 1e-12 * std::max(mp, 1e-300)) {
      std::ostringstream os;
      os << "nodal mass " << mg << " != particle mass " << mp << " for field " << d << " at step "
         << step_count_;
      throw SolveError(os.str());
    }
  }
}

RunSummary Simulation::run(const RunHooks& hooks) {
  const auto t_start = std::chrono::steady_clock::now();
  RunSummary summary;

  if (hooks.on_snapshot) hooks.on_snapshot(*this, 0);
  if (hooks.on_energy) hooks.on_energy(energies());

  for (long s = 0; s < controls_.n_steps; ++s) {
    const StepStats st = step();
    summary.max_residual = std::max(summary.max_residual, st.residual_last);
    summary.violations += st.violations;
    if (st.violations > 0 && hooks.on_constraints) hooks.on_constraints(step_count_, last_report_);

    const bool last = s + 1 == controls_.n_steps;
    if (hooks.on_energy && (hooks.energy_every > 0 && (step_count_ % hooks.energy_every == 0 || last)))
      hooks.on_energy(energies());
    if (hooks.on_snapshot && ((hooks.snapshot_every > 0 && step_count_ % hooks.snapshot_every == 0) || last))
      hooks.on_snapshot(*this, step_count_);
  }

  summary.steps = step_count_;
  summary.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return summary;
}

}  // namespace pfmpm
