#pragma once

#include "pfmpm/types.hpp"

namespace pfmpm {

struct LameParams {
  double lambda = 0.0;    // in-plane lambda used in stress/energy evaluation
  double mu = 0.0;
  double lambda_3d = 0.0; // unmodified 3D lambda; drives the dilatational wave speed
  double c_dil = 0.0;     // mm/us
};

/// lambda_3d = E nu / ((1+nu)(1-2nu)), mu = E/(2(1+nu)). Plane stress replaces
/// the in-plane lambda by lambda* = 2 lambda_3d mu / (lambda_3d + 2 mu); the
/// wave speed always uses the 3D lambda.
LameParams lame_from_engineering(double E, double nu, double rho, PlaneMode mode);

/// eps = eps_plus + eps_minus with eps_plus assembled from the positive parts
/// of the eigenvalues.
void spectral_split(const Mat2& eps, Mat2& eps_plus, Mat2& eps_minus);

struct SplitEnergy {
  double psi_plus = 0.0;
  double psi_minus = 0.0;
  Mat2 sigma_plus = Mat2::Zero();
  Mat2 sigma_minus = Mat2::Zero();
};

SplitEnergy split_energy(const Mat2& eps, const LameParams& lame);

/// Degradation g(c) = (1 - k_f) c^2 + k_f, with c clamped to [0,1].
double degradation(double c, double k_f);

/// sigma = g(c) sigma_plus + sigma_minus.
Mat2 stress(const Mat2& eps, double c, double k_f, const LameParams& lame);

/// H_new = max(H_old, psi_plus).
double update_history(double H_old, double psi_plus);

}  // namespace pfmpm
