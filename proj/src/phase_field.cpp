#include "pfmpm/phase_field.hpp"

#include <Eigen/SparseLU>

#include <cmath>
#include <sstream>

namespace pfmpm {

namespace {

inline double zero_order_coefficient(const MaterialPoint& p, const Material& m) {
  return 4.0 * m.l0 * (1.0 - m.k_f) * p.H_work / m.Gc_bar + 1.0;
}

}  // namespace

PhaseFieldSystem assemble_phase_field(const std::vector<MaterialPoint>& particles,
                                      const std::vector<int>& field_particles,
                                      const std::vector<BasisEval>& eval_material,
                                      const std::vector<Material>& materials, int node_count) {
  PhaseFieldSystem sys;
  sys.node_to_compact.assign(node_count, -1);
  if (field_particles.empty()) return sys;

  for (int pi : field_particles) {
    const BasisEval& e = eval_material[pi];
    for (int q = 0; q < e.count; ++q) {
      int& slot = sys.node_to_compact[e.node_ids[q]];
      if (slot < 0) {
        slot = static_cast<int>(sys.nodes.size());
        sys.nodes.push_back(e.node_ids[q]);
      }
    }
  }
  const int n = static_cast<int>(sys.nodes.size());
  sys.F = Eigen::VectorXd::Zero(n);

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(field_particles.size() * BasisEval::kMaxSupport * BasisEval::kMaxSupport);

  for (int pi : field_particles) {
    const MaterialPoint& p = particles[pi];
    const Material& m = materials[p.material_id];
    const BasisEval& e = eval_material[pi];
    const double Fp = zero_order_coefficient(p, m);
    const double l0sq4 = 4.0 * m.l0 * m.l0;
    const double l0q4 = 4.0 * m.l0 * m.l0 * m.l0 * m.l0;
    const bool with_hess = !m.gamma.is_zero();

    for (int i = 0; i < e.count; ++i) {
      const int I = sys.node_to_compact[e.node_ids[i]];
      sys.F[I] += e.N[i] * p.V;
      for (int j = 0; j < e.count; ++j) {
        const int J = sys.node_to_compact[e.node_ids[j]];
        double k = Fp * e.N[j] * e.N[i] + l0sq4 * e.dN[j].dot(e.dN[i]);
        if (with_hess) k += l0q4 * m.gamma.contract(e.ddN[j], e.ddN[i]);
        trips.emplace_back(I, J, k * p.V);
      }
    }
  }

  sys.K.resize(n, n);
  sys.K.setFromTriplets(trips.begin(), trips.end());
  return sys;
}

void solve_phase_field(PhaseFieldSystem& sys) {
  if (sys.empty()) return;
  const double f_norm = sys.F.norm();

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(sys.K);
  bool ok = ldlt.info() == Eigen::Success;
  if (ok) {
    sys.c = ldlt.solve(sys.F);
    ok = ldlt.info() == Eigen::Success;
    if (ok) {
      // One step of iterative refinement keeps the residual at roundoff level.
      const Eigen::VectorXd r = sys.F - sys.K * sys.c;
      sys.c += ldlt.solve(r);
    }
  }
  if (!ok) {
    // The anisotropy tensor can make the fourth-order block indefinite for
    // exotic parameter sets; fall back to an unsymmetric factorization.
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(sys.K);
    if (lu.info() != Eigen::Success)
      throw SolveError("phase-field factorization failed (matrix singular or indefinite)");
    sys.c = lu.solve(sys.F);
    if (lu.info() != Eigen::Success) throw SolveError("phase-field solve failed");
  }

  const double res = (sys.K * sys.c - sys.F).norm();
  if (res > 1e-10 * std::max(f_norm, 1e-300)) {
    std::ostringstream os;
    os << "phase-field solve did not converge: ||Kc-F|| = " << res << ", ||F|| = " << f_norm
       << ", dofs = " << sys.nodes.size();
    throw SolveError(os.str());
  }
}

void interpolate_c(std::vector<MaterialPoint>& particles, const std::vector<int>& field_particles,
                   const std::vector<BasisEval>& eval_global,
                   const std::vector<BasisEval>& eval_material, const PhaseFieldSystem& sys,
                   const std::vector<Material>& materials) {
  for (int pi : field_particles) {
    MaterialPoint& p = particles[pi];
    const Material& m = materials[p.material_id];
    const BasisEval& eg = eval_global[pi];
    const BasisEval& em = eval_material[pi];
    double c = 0.0;
    Vec2 grad = Vec2::Zero();
    Mat2 hess = Mat2::Zero();
    for (int q = 0; q < eg.count; ++q) {
      const double cI = sys.c[sys.node_to_compact[eg.node_ids[q]]];
      c += eg.N[q] * cI;
      grad += eg.dN[q] * cI;
      hess += em.ddN[q] * cI;
    }
    p.c = c;
    p.grad_c = grad;
    p.hess_c = hess;
    p.g = degradation(c, m.k_f);
  }
}

Eigen::VectorXd residual_phase_field(const std::vector<MaterialPoint>& particles,
                                     const std::vector<int>& field_particles,
                                     const std::vector<BasisEval>& eval_global,
                                     const std::vector<BasisEval>& eval_material,
                                     const PhaseFieldSystem& sys,
                                     const std::vector<Material>& materials) {
  Eigen::VectorXd R = Eigen::VectorXd::Zero(sys.nodes.size());
  for (int pi : field_particles) {
    const MaterialPoint& p = particles[pi];
    const Material& m = materials[p.material_id];
    const BasisEval& eg = eval_global[pi];
    const BasisEval& em = eval_material[pi];
    const double Fp = zero_order_coefficient(p, m);
    const double l0sq4 = 4.0 * m.l0 * m.l0;
    const double l0q4 = 4.0 * m.l0 * m.l0 * m.l0 * m.l0;
    const bool with_hess = !m.gamma.is_zero();
    for (int q = 0; q < eg.count; ++q) {
      const int I = sys.node_to_compact[eg.node_ids[q]];
      double s = Fp * p.c * eg.N[q] + l0sq4 * p.grad_c.dot(eg.dN[q]) - eg.N[q];
      if (with_hess) s += l0q4 * m.gamma.contract(p.hess_c, em.ddN[q]);
      R[I] += s * p.V;
    }
  }
  return R;
}

}  // namespace pfmpm
