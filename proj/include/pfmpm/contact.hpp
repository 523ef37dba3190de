#pragma once

#include <string>
#include <vector>

#include "pfmpm/dynamics.hpp"

namespace pfmpm {

struct ContactParams {
  double mu_f = 0.0;  // Coulomb friction coefficient
  // Test hook: flips the stored normal of the second field after construction
  // so the collinearity check has a violation to find.
  bool debug_break_collinearity = false;
};

struct ContactNode {
  int node = -1;
  int d1 = 0, d2 = 0;       // field pair, d1 < d2
  Vec2 n1 = Vec2::Zero();   // unit normal of field d1 (n2 = -n1)
  Vec2 n2 = Vec2::Zero();
  Vec2 s1 = Vec2::Zero();   // unit tangent (n1 rotated by +pi/2)
  bool degenerate = false;  // opposing mass gradients nearly cancelled
  bool gate = false;        // impenetrability gate held, forces applied
  bool sliding = false;     // friction cone clamped
  double f_nor = 0.0;       // normal force component on field d1 (<= 0)
  double f_tan = 0.0;       // tangential force component on field d1
};

/// Candidate nodes where both fields of a pair carry mass, with mass-gradient
/// surface normals. Pairs are enumerated in ascending field-index order.
std::vector<ContactNode> detect_contact(const std::vector<FieldNodalState>& fields,
                                        const ContactParams& params);

/// Gate, normal/tangential force components with the non-tension and Coulomb
/// clamps, accumulated into the fields' f_cont arrays.
void contact_forces(std::vector<ContactNode>& nodes, std::vector<FieldNodalState>& fields,
                    double dt, const ContactParams& params);

/// v = v_trial + dt f_cont / M on nodes carrying contact force.
void correct_velocities(std::vector<FieldNodalState>& fields, double dt);

struct ConstraintViolation {
  int node = -1;
  std::string condition;  // "C.1" .. "C.4"
  std::string quantity;
  double magnitude = 0.0;
};

struct ConstraintReport {
  long checked_nodes = 0;
  std::vector<ConstraintViolation> violations;
  bool ok() const { return violations.empty(); }
};

/// C.1 collinearity, C.2 force balance, C.3 impenetrability/complementarity
/// (normal), C.4 slip-or-stick consistency (tangential).
ConstraintReport verify_constraints(const std::vector<ContactNode>& nodes,
                                    const std::vector<FieldNodalState>& fields, double dt,
                                    const ContactParams& params, double tol_v = 1e-8);

}  // namespace pfmpm
