#include "pfmpm/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace pfmpm {

void FieldNodalState::resize(int node_count) {
  mass = Eigen::VectorXd::Zero(node_count);
  mass_grad.assign(node_count, Vec2::Zero());
  momentum.assign(node_count, Vec2::Zero());
  f_int.assign(node_count, Vec2::Zero());
  f_ext.assign(node_count, Vec2::Zero());
  f_cont.assign(node_count, Vec2::Zero());
  p_trial.assign(node_count, Vec2::Zero());
  v_trial.assign(node_count, Vec2::Zero());
  v_corr.assign(node_count, Vec2::Zero());
  has_mass.assign(node_count, 0);
  active_nodes.clear();
}

void FieldNodalState::reset() {
  for (int n : active_nodes) {
    mass[n] = 0.0;
    mass_grad[n].setZero();
    momentum[n].setZero();
    f_int[n].setZero();
    f_ext[n].setZero();
    f_cont[n].setZero();
    p_trial[n].setZero();
    v_trial[n].setZero();
    v_corr[n].setZero();
    has_mass[n] = 0;
  }
  active_nodes.clear();
}

void p2g(const std::vector<MaterialPoint>& particles, const std::vector<int>& field_particles,
         const std::vector<BasisEval>& eval_global, FieldNodalState& state) {
  double mass_sum = 0.0;
  for (int pi : field_particles) {
    const MaterialPoint& p = particles[pi];
    const BasisEval& e = eval_global[pi];
    mass_sum += p.M;
    for (int q = 0; q < e.count; ++q) {
      const int I = e.node_ids[q];
      state.active_nodes.push_back(I);
      state.mass[I] += p.M * e.N[q];
      state.mass_grad[I] += p.M * e.dN[q];
      state.momentum[I] += p.M * e.N[q] * p.v;
      state.f_int[I] += p.V * (p.sig * e.dN[q]);
    }
  }
  std::sort(state.active_nodes.begin(), state.active_nodes.end());
  state.active_nodes.erase(std::unique(state.active_nodes.begin(), state.active_nodes.end()),
                           state.active_nodes.end());

  // Fringe nodes with vanishing lumped mass stay inert so velocity divisions
  // do not amplify noise.
  const double mass_eps =
      field_particles.empty() ? 0.0 : 1e-12 * mass_sum / field_particles.size();
  for (int n : state.active_nodes) state.has_mass[n] = state.mass[n] > mass_eps ? 1 : 0;
}

std::vector<std::vector<int>> traction_carrier_layers(const std::vector<MaterialPoint>& particles,
                                                      const Loads& loads,
                                                      double lattice_spacing) {
  std::vector<std::vector<int>> carriers(loads.tractions.size());
  for (size_t li = 0; li < loads.tractions.size(); ++li) {
    const TractionLoad& load = loads.tractions[li];
    const bool along_x =
        load.surface_normal == EdgeNormal::PlusY || load.surface_normal == EdgeNormal::MinusY;
    const bool want_max =
        load.surface_normal == EdgeNormal::PlusY || load.surface_normal == EdgeNormal::PlusX;

    // One carrier per lattice column: the particle nearest the loaded surface.
    std::map<long, int> best;
    for (size_t pi = 0; pi < particles.size(); ++pi) {
      const Vec2& x = particles[pi].x;
      if (!load.band.contains(x)) continue;
      const double tangent = along_x ? x.x() : x.y();
      const double normal = along_x ? x.y() : x.x();
      // lattice points sit at half-integer multiples of the spacing, so floor
      // bins them into stable columns
      const long col = static_cast<long>(std::floor(tangent / lattice_spacing));
      auto it = best.find(col);
      if (it == best.end()) {
        best[col] = static_cast<int>(pi);
      } else {
        const Vec2& xb = particles[it->second].x;
        const double nb = along_x ? xb.y() : xb.x();
        if ((want_max && normal > nb) || (!want_max && normal < nb))
          it->second = static_cast<int>(pi);
      }
    }
    for (const auto& [col, pi] : best) carriers[li].push_back(pi);
    if (carriers[li].empty())
      throw ConfigError("traction band " + std::to_string(li) + " selects no particles");
  }
  return carriers;
}

void external_forces(const std::vector<MaterialPoint>& particles, int field_id,
                     const std::vector<int>& field_particles,
                     const std::vector<BasisEval>& eval_global, const Loads& loads,
                     double lattice_spacing, double thickness, double t_us,
                     const std::vector<std::vector<int>>& traction_carriers,
                     FieldNodalState& state) {
  if (!loads.gravity.isZero(0.0)) {
    for (int pi : field_particles) {
      const MaterialPoint& p = particles[pi];
      const BasisEval& e = eval_global[pi];
      const Vec2 f = p.M * loads.gravity;
      for (int q = 0; q < e.count; ++q) state.f_ext[e.node_ids[q]] += e.N[q] * f;
    }
  }
  for (size_t li = 0; li < loads.tractions.size(); ++li) {
    const TractionLoad& load = loads.tractions[li];
    const double ramp = load.ramp_us > 0.0 ? std::min(1.0, t_us / load.ramp_us) : 1.0;
    const Vec2 fp = load.traction * lattice_spacing * thickness * ramp;
    for (int pi : traction_carriers[li]) {
      if (particles[pi].field_id != field_id) continue;
      const BasisEval& e = eval_global[pi];
      for (int q = 0; q < e.count; ++q) state.f_ext[e.node_ids[q]] += e.N[q] * fp;
    }
  }
}

std::vector<std::pair<int, int>> constrained_nodes(const SplineGrid& grid,
                                                   const std::vector<FixedBoundary>& fixed) {
  std::vector<std::pair<int, int>> out;
  if (fixed.empty()) return out;
  const int order = grid.order();
  const double h = grid.h();
  const Vec2 o = grid.bounds().min;
  for (int iy = 0; iy < grid.control_points(1); ++iy) {
    for (int ix = 0; ix < grid.control_points(0); ++ix) {
      // Physical support box of the basis function pair (ix, iy).
      const double x0 = o.x() + std::max(0, ix - order) * h;
      const double x1 = o.x() + std::min(grid.spans(0), ix + 1) * h;
      const double y0 = o.y() + std::max(0, iy - order) * h;
      const double y1 = o.y() + std::min(grid.spans(1), iy + 1) * h;
      int mask = 0;
      for (const FixedBoundary& fb : fixed) {
        const bool overlap = x1 >= fb.band.min.x() && x0 <= fb.band.max.x() &&
                             y1 >= fb.band.min.y() && y0 <= fb.band.max.y();
        if (!overlap) continue;
        if (fb.fix_x) mask |= 1;
        if (fb.fix_y) mask |= 2;
      }
      if (mask) out.emplace_back(iy * grid.control_points(0) + ix, mask);
    }
  }
  return out;
}

void apply_constraint_mask(const std::vector<std::pair<int, int>>& constrained,
                           FieldNodalState& state, bool contact_only) {
  for (const auto& [node, mask] : constrained) {
    auto clear = [mask = mask](Vec2& v) {
      if (mask & 1) v.x() = 0.0;
      if (mask & 2) v.y() = 0.0;
    };
    clear(state.f_cont[node]);
    if (contact_only) continue;
    clear(state.momentum[node]);
    clear(state.f_int[node]);
    clear(state.f_ext[node]);
  }
}

void apply_essential_bcs(const SplineGrid& grid, const std::vector<FixedBoundary>& fixed,
                         FieldNodalState& state) {
  apply_constraint_mask(constrained_nodes(grid, fixed), state, false);
}

void trial_update(FieldNodalState& state, double dt) {
  for (int n : state.active_nodes) {
    state.p_trial[n] = state.momentum[n] + dt * (state.f_ext[n] - state.f_int[n]);
    state.v_trial[n] = state.has_mass[n] ? Vec2(state.p_trial[n] / state.mass[n]) : Vec2::Zero();
    state.v_corr[n] = state.v_trial[n];
  }
}

void update_strain_stress(std::vector<MaterialPoint>& particles,
                          const std::vector<int>& field_particles,
                          const std::vector<BasisEval>& eval_global, const FieldNodalState& state,
                          const std::vector<Material>& materials, double dt, bool double_map) {
  // End-of-step nodal velocities for the strain increment. The double-mapped
  // variant projects the FLIP-updated particle momenta back to the grid,
  // which keeps the free-vibration energy bounded over long runs.
  std::vector<Vec2> v_nodes;
  const std::vector<Vec2>* v_strain = &state.v_corr;
  if (double_map) {
    v_nodes.assign(state.mass.size(), Vec2::Zero());
    for (int pi : field_particles) {
      const MaterialPoint& p = particles[pi];
      const BasisEval& e = eval_global[pi];
      Vec2 dv = Vec2::Zero();
      for (int q = 0; q < e.count; ++q) {
        const int I = e.node_ids[q];
        if (!state.has_mass[I]) continue;
        dv += e.N[q] * (state.f_ext[I] + state.f_cont[I] - state.f_int[I]) / state.mass[I];
      }
      const Vec2 v_new = p.v + dt * dv;
      for (int q = 0; q < e.count; ++q) v_nodes[e.node_ids[q]] += p.M * e.N[q] * v_new;
    }
    for (int n : state.active_nodes)
      v_nodes[n] = state.has_mass[n] ? Vec2(v_nodes[n] / state.mass[n]) : Vec2::Zero();
    v_strain = &v_nodes;
  }

  for (int pi : field_particles) {
    MaterialPoint& p = particles[pi];
    const Material& m = materials[p.material_id];
    const BasisEval& e = eval_global[pi];
    Mat2 grad_v = Mat2::Zero();
    for (int q = 0; q < e.count; ++q) {
      const int I = e.node_ids[q];
      if (!state.has_mass[I]) continue;
      grad_v += (*v_strain)[I] * e.dN[q].transpose();
    }
    p.eps_work = p.eps + 0.5 * dt * (grad_v + grad_v.transpose());
    const SplitEnergy se = split_energy(p.eps_work, m.lame);
    p.sig_work = p.g * se.sigma_plus + se.sigma_minus;
    p.psi_plus = se.psi_plus;
    p.psi_minus = se.psi_minus;
    p.H_work = update_history(p.H, se.psi_plus);
  }
}

void advect_particles(std::vector<MaterialPoint>& particles,
                      const std::vector<int>& field_particles,
                      const std::vector<BasisEval>& eval_global, const FieldNodalState& state,
                      double dt) {
  for (int pi : field_particles) {
    MaterialPoint& p = particles[pi];
    const BasisEval& e = eval_global[pi];
    Vec2 vel = Vec2::Zero();
    Vec2 acc = Vec2::Zero();
    for (int q = 0; q < e.count; ++q) {
      const int I = e.node_ids[q];
      if (!state.has_mass[I]) continue;
      vel += e.N[q] * state.v_corr[I];
      acc += e.N[q] * (state.f_ext[I] + state.f_cont[I] - state.f_int[I]) / state.mass[I];
    }
    p.u += dt * vel;
    p.v += dt * acc;  // FLIP increment
    p.a = acc;
    p.x += dt * vel;
    p.eps = p.eps_work;
    p.sig = p.sig_work;
    p.H = p.H_work;
  }
}

}  // namespace pfmpm
