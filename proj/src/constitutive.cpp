#include "pfmpm/constitutive.hpp"

#include <algorithm>
#include <cmath>

namespace pfmpm {

LameParams lame_from_engineering(double E, double nu, double rho, PlaneMode mode) {
  if (!(E > 0.0)) throw ConfigError("Young's modulus must be positive");
  if (!(nu > -1.0) || !(nu < 0.5)) throw ConfigError("Poisson ratio must lie in (-1, 0.5)");
  if (!(rho > 0.0)) throw ConfigError("density must be positive");
  LameParams p;
  p.lambda_3d = E * nu / ((1.0 + nu) * (1.0 - 2.0 * nu));
  p.mu = E / (2.0 * (1.0 + nu));
  p.lambda = (mode == PlaneMode::Stress)
                 ? 2.0 * p.lambda_3d * p.mu / (p.lambda_3d + 2.0 * p.mu)
                 : p.lambda_3d;
  p.c_dil = std::sqrt((p.lambda_3d + 2.0 * p.mu) / rho);
  return p;
}

void spectral_split(const Mat2& eps, Mat2& eps_plus, Mat2& eps_minus) {
  const double a = eps(0, 0), b = eps(1, 1), d = 0.5 * (eps(0, 1) + eps(1, 0));
  const double norm = std::sqrt(a * a + b * b + 2.0 * d * d);

  double l1, l2;        // eigenvalues
  Vec2 v1, v2;          // eigenvectors
  if (std::abs(d) < 1e-14 * std::max(norm, 1e-300)) {
    // Treat as already diagonal; avoids 0/0 in the eigenvector construction
    // when eigenvalues coincide.
    l1 = a;
    l2 = b;
    v1 = Vec2(1.0, 0.0);
    v2 = Vec2(0.0, 1.0);
  } else {
    const double mean = 0.5 * (a + b);
    const double disc = std::sqrt(0.25 * (a - b) * (a - b) + d * d);
    l1 = mean + disc;
    l2 = mean - disc;
    v1 = Vec2(l1 - b, d).normalized();
    v2 = Vec2(-v1.y(), v1.x());
  }

  eps_plus = std::max(l1, 0.0) * v1 * v1.transpose() + std::max(l2, 0.0) * v2 * v2.transpose();
  eps_plus = 0.5 * (eps_plus + eps_plus.transpose().eval());
  eps_minus = eps - eps_plus;
}

SplitEnergy split_energy(const Mat2& eps, const LameParams& lame) {
  Mat2 ep, em;
  spectral_split(eps, ep, em);
  const double tr = eps.trace();
  const double tr_p = std::max(tr, 0.0);
  const double tr_m = std::min(tr, 0.0);

  SplitEnergy s;
  s.psi_plus = 0.5 * lame.lambda * tr_p * tr_p + lame.mu * (ep * ep).trace();
  s.psi_minus = 0.5 * lame.lambda * tr_m * tr_m + lame.mu * (em * em).trace();
  s.sigma_plus = lame.lambda * tr_p * Mat2::Identity() + 2.0 * lame.mu * ep;
  s.sigma_minus = lame.lambda * tr_m * Mat2::Identity() + 2.0 * lame.mu * em;
  return s;
}

double degradation(double c, double k_f) {
  const double cc = std::clamp(c, 0.0, 1.0);
  return (1.0 - k_f) * cc * cc + k_f;
}

Mat2 stress(const Mat2& eps, double c, double k_f, const LameParams& lame) {
  const SplitEnergy s = split_energy(eps, lame);
  return degradation(c, k_f) * s.sigma_plus + s.sigma_minus;
}

double update_history(double H_old, double psi_plus) { return std::max(H_old, psi_plus); }

}  // namespace pfmpm
