#include "pfmpm/contact.hpp"

#include <cmath>

namespace pfmpm {

namespace {

constexpr double kDegenerateTol = 1e-10;

inline Vec2 unit_or_zero(const Vec2& v) {
  const double n = v.norm();
  return n > 0.0 ? Vec2(v / n) : Vec2::Zero();
}

}  // namespace

std::vector<ContactNode> detect_contact(const std::vector<FieldNodalState>& fields,
                                        const ContactParams& params) {
  std::vector<ContactNode> out;
  const int nd = static_cast<int>(fields.size());
  for (int d1 = 0; d1 < nd; ++d1) {
    for (int d2 = d1 + 1; d2 < nd; ++d2) {
      const FieldNodalState& f1 = fields[d1];
      const FieldNodalState& f2 = fields[d2];
      // Active node lists are sorted; walk the intersection.
      auto it1 = f1.active_nodes.begin();
      auto it2 = f2.active_nodes.begin();
      while (it1 != f1.active_nodes.end() && it2 != f2.active_nodes.end()) {
        if (*it1 < *it2) {
          ++it1;
        } else if (*it2 < *it1) {
          ++it2;
        } else {
          const int n = *it1;
          ++it1;
          ++it2;
          if (!f1.has_mass[n] || !f2.has_mass[n]) continue;
          ContactNode cn;
          cn.node = n;
          cn.d1 = d1;
          cn.d2 = d2;
          const Vec2 nh1 = unit_or_zero(f1.mass_grad[n]);
          const Vec2 nh2 = unit_or_zero(f2.mass_grad[n]);
          const Vec2 diff = nh1 - nh2;
          const double dn = diff.norm();
          if (dn < kDegenerateTol || nh1.isZero(0.0) || nh2.isZero(0.0)) {
            cn.degenerate = true;
          } else {
            cn.n1 = diff / dn;
            cn.n2 = -cn.n1;
            cn.s1 = Vec2(-cn.n1.y(), cn.n1.x());
            if (params.debug_break_collinearity) cn.n2 = cn.n1;
          }
          out.push_back(cn);
        }
      }
    }
  }
  return out;
}

void contact_forces(std::vector<ContactNode>& nodes, std::vector<FieldNodalState>& fields,
                    double dt, const ContactParams& params) {
  for (ContactNode& cn : nodes) {
    if (cn.degenerate) continue;
    FieldNodalState& f1 = fields[cn.d1];
    FieldNodalState& f2 = fields[cn.d2];
    const int n = cn.node;
    const double m1 = f1.mass[n], m2 = f2.mass[n];
    const Vec2 v_cm = (f1.p_trial[n] + f2.p_trial[n]) / (m1 + m2);

    // Impenetrability gate: the pair approaches along the contact normal.
    cn.gate = (f1.v_trial[n] - v_cm).dot(cn.n1) > 0.0;
    if (!cn.gate) {
      cn.f_nor = 0.0;
      cn.f_tan = 0.0;
      continue;
    }

    const Vec2 dv = v_cm - f1.v_trial[n];
    const double f_nor_s = (m1 / dt) * dv.dot(cn.n1);
    cn.f_nor = std::min(0.0, f_nor_s);  // non-tension clamp
    const double f_tan_s = (m1 / dt) * dv.dot(cn.s1);
    const double cone = params.mu_f * std::abs(cn.f_nor);
    cn.sliding = std::abs(f_tan_s) > cone;
    cn.f_tan = std::min(cone, std::abs(f_tan_s)) * (f_tan_s >= 0.0 ? 1.0 : -1.0);

    const Vec2 f_vec = cn.f_nor * cn.n1 + cn.f_tan * cn.s1;
    f1.f_cont[n] += f_vec;
    f2.f_cont[n] -= f_vec;
  }
}

void correct_velocities(std::vector<FieldNodalState>& fields, double dt) {
  for (FieldNodalState& f : fields) {
    for (int n : f.active_nodes) {
      if (!f.has_mass[n]) continue;
      if (f.f_cont[n].isZero(0.0)) continue;  // untouched nodes keep v_trial bitwise
      f.v_corr[n] = f.v_trial[n] + dt * f.f_cont[n] / f.mass[n];
    }
  }
}

ConstraintReport verify_constraints(const std::vector<ContactNode>& nodes,
                                    const std::vector<FieldNodalState>& fields, double dt,
                                    const ContactParams& params, double tol_v) {
  (void)dt;
  ConstraintReport report;
  for (const ContactNode& cn : nodes) {
    if (cn.degenerate) continue;
    ++report.checked_nodes;
    const FieldNodalState& f1 = fields[cn.d1];
    const FieldNodalState& f2 = fields[cn.d2];
    const int n = cn.node;
    auto flag = [&](const char* cond, const char* what, double mag) {
      report.violations.push_back({n, cond, what, mag});
    };

    // C.1: normals rebuilt from the mass gradients, collinear and orthonormal.
    const Vec2 expect_n1 = unit_or_zero(unit_or_zero(f1.mass_grad[n]) - unit_or_zero(f2.mass_grad[n]));
    if ((cn.n1 - expect_n1).norm() > 1e-12) flag("C.1", "n1 vs mass gradients", (cn.n1 - expect_n1).norm());
    if ((cn.n1 + cn.n2).norm() > 1e-12) flag("C.1", "n1 + n2", (cn.n1 + cn.n2).norm());
    if (std::abs(cn.s1.dot(cn.n1)) > 1e-14) flag("C.1", "s1 . n1", std::abs(cn.s1.dot(cn.n1)));
    if (std::abs(cn.s1.norm() - 1.0) > 1e-14) flag("C.1", "|s1|", std::abs(cn.s1.norm() - 1.0));

    // C.2: pairwise force balance including accumulation.
    const Vec2 fsum = f1.f_cont[n] + f2.f_cont[n];
    const double fscale = std::max({f1.f_cont[n].norm(), f2.f_cont[n].norm(), 1.0});
    if (fsum.norm() > 1e-12 * fscale) flag("C.2", "F1 + F2", fsum.norm());

    // C.3: no post-correction approach; normal complementarity.
    const double gamma_n = (f1.v_corr[n] - f2.v_corr[n]).dot(cn.n1);
    if (gamma_n > tol_v) flag("C.3", "gamma_n", gamma_n);
    if (cn.f_nor > 0.0) flag("C.3", "F_nor sign", cn.f_nor);
    if (std::abs(cn.f_nor * gamma_n) > std::abs(cn.f_nor) * tol_v)
      flag("C.3", "F_nor * gamma_n", std::abs(cn.f_nor * gamma_n));

    // C.4: stick matches velocities, slip sits on the friction cone and
    // opposes the residual slip.
    const double gamma_s = (f1.v_corr[n] - f2.v_corr[n]).dot(cn.s1);
    if (cn.gate) {
      if (cn.sliding) {
        const double cone = params.mu_f * std::abs(cn.f_nor);
        if (std::abs(std::abs(cn.f_tan) - cone) > 1e-12 * std::max(cone, 1.0))
          flag("C.4", "|F_tan| vs cone", std::abs(std::abs(cn.f_tan) - cone));
        if (cn.f_tan * gamma_s > tol_v * std::abs(cn.f_tan))
          flag("C.4", "F_tan opposes slip", cn.f_tan * gamma_s);
      } else {
        if (std::abs(gamma_s) > tol_v) flag("C.4", "gamma_s (stick)", std::abs(gamma_s));
      }
    }
  }
  return report;
}

}  // namespace pfmpm
