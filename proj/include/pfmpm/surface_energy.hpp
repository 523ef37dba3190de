#pragma once

#include <vector>

#include "pfmpm/gamma.hpp"
#include "pfmpm/types.hpp"

namespace pfmpm {

struct PolarQuery {
  GammaTensor gamma;
  double Gc_bar = 1.0;   // N/mm
  double l0 = 1.0;       // mm
  double phi = 0.0;      // material orientation, radians (counter-clockwise)
  std::vector<double> theta_samples;
  double x_lb = 0.0;     // half-width in mm; 0 selects the default 50*l0
  int n_1d = 2001;       // node count, odd so a node sits at x = 0
};

struct PolarResult {
  double theta = 0.0;
  double gc = 0.0;
  double gc_reciprocal = 0.0;
};

struct PolarSweep {
  std::vector<PolarResult> samples;
  double gc_min = 0.0, gc_max = 0.0;
  double theta_min = 0.0, theta_max = 0.0;  // argmin / argmax
};

/// Coefficient of (d2c/dn2)^2 in the crack frame for crack direction theta.
double normal_coefficient(const GammaTensor& gamma, double theta);

/// Minimizes the 1D profile functional
///   integral of (c-1)^2/(4 l0) + l0 (c')^2 + gamma_tilde l0^3 (c'')^2
/// over [-x_lb, x_lb] with c(0) = 0 and natural far-field conditions, using
/// C1 cubic Hermite elements on a symmetric mesh graded toward the crack.
/// Returns Gc_bar times the minimized integral (N/mm).
double profile_energy(double gamma_tilde, double Gc_bar, double l0, double x_lb, int n_1d);

std::vector<double> uniform_thetas(int samples, double range = 2.0 * M_PI);

PolarSweep polar_sweep(const PolarQuery& query, int threads = 1);

}  // namespace pfmpm
