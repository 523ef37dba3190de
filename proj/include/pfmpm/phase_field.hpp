#pragma once

#include <Eigen/Sparse>

#include <vector>

#include "pfmpm/bspline.hpp"
#include "pfmpm/domain.hpp"

namespace pfmpm {

/// Per-field linear system K c = F on the field's active nodes.
struct PhaseFieldSystem {
  Eigen::SparseMatrix<double> K;
  Eigen::VectorXd F;
  Eigen::VectorXd c;                 // nodal solution (compact numbering)
  std::vector<int> nodes;            // compact index -> global node id
  std::vector<int> node_to_compact;  // global node id -> compact index, -1 if absent
  bool empty() const { return nodes.empty(); }
};

/// K_IJ = sum_p [F_p N_J N_I + 4 l0^2 grad N_J . grad N_I
///               + 4 l0^4 sum_ijkl g_ijkl d2N_J d2N_I] V_p,
/// F_I = sum_p N_I V_p, with F_p = 4 l0 (1 - k_f) H_p / Gc_bar + 1 and the
/// first/second derivatives taken in the material frame. H is read from the
/// particles' working history field.
PhaseFieldSystem assemble_phase_field(const std::vector<MaterialPoint>& particles,
                                      const std::vector<int>& field_particles,
                                      const std::vector<BasisEval>& eval_material,
                                      const std::vector<Material>& materials, int node_count);

/// Direct sparse solve; guarantees ||K c - F|| <= 1e-10 ||F|| or throws.
void solve_phase_field(PhaseFieldSystem& sys);

/// Maps nodal c to the particles: value, gradient (global frame), Hessian
/// (material frame) and degradation g.
void interpolate_c(std::vector<MaterialPoint>& particles, const std::vector<int>& field_particles,
                   const std::vector<BasisEval>& eval_global,
                   const std::vector<BasisEval>& eval_material, const PhaseFieldSystem& sys,
                   const std::vector<Material>& materials);

/// Nodal residual R = S(c_p state) - F evaluated from the particle-level phase
/// field state (after possible history updates).
Eigen::VectorXd residual_phase_field(const std::vector<MaterialPoint>& particles,
                                     const std::vector<int>& field_particles,
                                     const std::vector<BasisEval>& eval_global,
                                     const std::vector<BasisEval>& eval_material,
                                     const PhaseFieldSystem& sys,
                                     const std::vector<Material>& materials);

}  // namespace pfmpm
