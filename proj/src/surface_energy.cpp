#include "pfmpm/surface_energy.hpp"

#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

namespace pfmpm {

double normal_coefficient(const GammaTensor& gamma, double theta) {
  return gamma.normal_coefficient(theta);
}

namespace {

// Node positions on [-x_lb, x_lb]: cubic blend of a uniform map, clustering
// points around x = 0 where the profile has its kink/boundary layer.
std::vector<double> graded_nodes(double x_lb, int n_1d) {
  constexpr double w = 0.1;
  std::vector<double> x(n_1d);
  const int half = (n_1d - 1) / 2;
  for (int i = 0; i < n_1d; ++i) {
    const double s = static_cast<double>(i - half) / half;
    x[i] = x_lb * (w * s + (1.0 - w) * s * s * s);
  }
  x[half] = 0.0;
  return x;
}

struct HermiteShapes {
  double N[4], dN[4], ddN[4];
};

// Cubic Hermite shape functions on an element of length he, at xi in [0,1].
// DOF order: value_left, slope_left, value_right, slope_right.
HermiteShapes hermite(double xi, double he) {
  HermiteShapes s;
  const double xi2 = xi * xi, xi3 = xi2 * xi;
  s.N[0] = 1.0 - 3.0 * xi2 + 2.0 * xi3;
  s.N[1] = he * (xi - 2.0 * xi2 + xi3);
  s.N[2] = 3.0 * xi2 - 2.0 * xi3;
  s.N[3] = he * (-xi2 + xi3);
  s.dN[0] = (-6.0 * xi + 6.0 * xi2) / he;
  s.dN[1] = 1.0 - 4.0 * xi + 3.0 * xi2;
  s.dN[2] = (6.0 * xi - 6.0 * xi2) / he;
  s.dN[3] = -2.0 * xi + 3.0 * xi2;
  s.ddN[0] = (-6.0 + 12.0 * xi) / (he * he);
  s.ddN[1] = (-4.0 + 6.0 * xi) / he;
  s.ddN[2] = (6.0 - 12.0 * xi) / (he * he);
  s.ddN[3] = (-2.0 + 6.0 * xi) / he;
  return s;
}

constexpr int kGaussN = 4;
constexpr double kGaussXi[kGaussN] = {0.069431844202973712, 0.330009478207571868,
                                      0.669990521792428132, 0.930568155797026288};
constexpr double kGaussW[kGaussN] = {0.173927422568726929, 0.326072577431273071,
                                     0.326072577431273071, 0.173927422568726929};

}  // namespace

double profile_energy(double gamma_tilde, double Gc_bar, double l0, double x_lb, int n_1d) {
  if (gamma_tilde < 0.0) {
    if (gamma_tilde > -1e-12) {
      gamma_tilde = 0.0;
    } else {
      std::ostringstream os;
      os << "profile functional is indefinite: gamma_tilde = " << gamma_tilde;
      throw SolveError(os.str());
    }
  }
  if (!(l0 > 0.0)) throw ConfigError("length scale l0 must be positive");
  if (x_lb <= 0.0) x_lb = 50.0 * l0;
  if (x_lb < 20.0 * l0) throw ConfigError("profile half-width x_lb must be at least 20*l0");
  if (n_1d < 5 || n_1d % 2 == 0) throw ConfigError("n_1d must be odd and at least 5");

  const std::vector<double> x = graded_nodes(x_lb, n_1d);
  const int ndof = 2 * n_1d;
  const int fixed_dof = 2 * ((n_1d - 1) / 2);  // value DOF at x = 0

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(16 * (n_1d - 1) + 1);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(ndof);

  const double c_mass = 1.0 / (4.0 * l0);
  const double c_grad = l0;
  const double c_hess = gamma_tilde * l0 * l0 * l0;

  for (int e = 0; e + 1 < n_1d; ++e) {
    const double he = x[e + 1] - x[e];
    const int dof[4] = {2 * e, 2 * e + 1, 2 * e + 2, 2 * e + 3};
    double ke[4][4] = {};
    double be[4] = {};
    for (int g = 0; g < kGaussN; ++g) {
      const HermiteShapes s = hermite(kGaussXi[g], he);
      const double wq = kGaussW[g] * he;
      for (int i = 0; i < 4; ++i) {
        be[i] += wq * c_mass * s.N[i];
        for (int j = 0; j < 4; ++j)
          ke[i][j] += wq * (c_mass * s.N[i] * s.N[j] + c_grad * s.dN[i] * s.dN[j] +
                            c_hess * s.ddN[i] * s.ddN[j]);
      }
    }
    for (int i = 0; i < 4; ++i) {
      if (dof[i] == fixed_dof) continue;
      b[dof[i]] += be[i];
      for (int j = 0; j < 4; ++j) {
        if (dof[j] == fixed_dof) continue;
        trips.emplace_back(dof[i], dof[j], ke[i][j]);
      }
    }
  }
  trips.emplace_back(fixed_dof, fixed_dof, 1.0);

  Eigen::SparseMatrix<double> A(ndof, ndof);
  A.setFromTriplets(trips.begin(), trips.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(A);
  if (ldlt.info() != Eigen::Success) throw SolveError("1D profile factorization failed");
  Eigen::VectorXd c = ldlt.solve(b);
  if (ldlt.info() != Eigen::Success) throw SolveError("1D profile solve failed");

  // Energy by direct quadrature of the functional at the minimizer.
  double energy = 0.0;
  for (int e = 0; e + 1 < n_1d; ++e) {
    const double he = x[e + 1] - x[e];
    const int dof[4] = {2 * e, 2 * e + 1, 2 * e + 2, 2 * e + 3};
    for (int g = 0; g < kGaussN; ++g) {
      const HermiteShapes s = hermite(kGaussXi[g], he);
      double v = 0.0, dv = 0.0, ddv = 0.0;
      for (int i = 0; i < 4; ++i) {
        v += s.N[i] * c[dof[i]];
        dv += s.dN[i] * c[dof[i]];
        ddv += s.ddN[i] * c[dof[i]];
      }
      const double wq = kGaussW[g] * he;
      energy += wq * ((v - 1.0) * (v - 1.0) * c_mass + c_grad * dv * dv + c_hess * ddv * ddv);
    }
  }
  return Gc_bar * energy;
}

std::vector<double> uniform_thetas(int samples, double range) {
  std::vector<double> t(samples);
  for (int i = 0; i < samples; ++i) t[i] = range * i / samples;
  return t;
}

PolarSweep polar_sweep(const PolarQuery& query, int threads) {
  PolarSweep sweep;
  const GammaTensor gamma_global = query.gamma.rotated(query.phi);
  const int n = static_cast<int>(query.theta_samples.size());
  if (n == 0) return sweep;
  sweep.samples.resize(n);

  auto work = [&](int begin, int end) {
    for (int i = begin; i < end; ++i) {
      const double theta = query.theta_samples[i];
      const double gt = normal_coefficient(gamma_global, theta);
      const double gc = profile_energy(gt, query.Gc_bar, query.l0, query.x_lb, query.n_1d);
      sweep.samples[i] = {theta, gc, 1.0 / gc};
    }
  };

  threads = std::max(1, std::min(threads, n));
  if (threads == 1) {
    work(0, n);
  } else {
    std::vector<std::thread> pool;
    const int chunk = (n + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      const int begin = t * chunk, end = std::min(n, begin + chunk);
      if (begin < end) pool.emplace_back(work, begin, end);
    }
    for (auto& th : pool) th.join();
  }

  sweep.gc_min = sweep.samples[0].gc;
  sweep.gc_max = sweep.samples[0].gc;
  sweep.theta_min = sweep.samples[0].theta;
  sweep.theta_max = sweep.samples[0].theta;
  for (const PolarResult& r : sweep.samples) {
    if (r.gc < sweep.gc_min) {
      sweep.gc_min = r.gc;
      sweep.theta_min = r.theta;
    }
    if (r.gc > sweep.gc_max) {
      sweep.gc_max = r.gc;
      sweep.theta_max = r.theta;
    }
  }
  return sweep;
}

}  // namespace pfmpm
