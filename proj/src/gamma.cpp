#include "pfmpm/gamma.hpp"

#include <cmath>

namespace pfmpm {

namespace {

// Voigt class of an index pair: 11 -> 0, 22 -> 1, 12/21 -> 2.
inline int voigt_index(int i, int j) {
  if (i == j) return i;
  return 2;
}

// Number of distinct (i,j) tuples sharing a Voigt class.
inline double multiplicity(int v) { return v == 2 ? 2.0 : 1.0; }

}  // namespace

GammaTensor::GammaTensor() {
  voigt_.setZero();
  expand_from_voigt();
}

GammaTensor GammaTensor::from_voigt(const Eigen::Matrix3d& voigt) {
  GammaTensor g;
  g.voigt_ = 0.5 * (voigt + voigt.transpose());  // major symmetry
  g.expand_from_voigt();
  return g;
}

GammaTensor GammaTensor::isotropic_laplacian() {
  Eigen::Matrix3d v;
  v << 1, 1, 0,
       1, 1, 0,
       0, 0, 0;
  return from_voigt(v);
}

void GammaTensor::expand_from_voigt() {
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) {
          const int a = voigt_index(i, j);
          const int b = voigt_index(k, l);
          full_[i][j][k][l] = voigt_(a, b) / (multiplicity(a) * multiplicity(b));
        }
}

Eigen::Matrix3d GammaTensor::voigt_of_full(const double full[2][2][2][2]) {
  // Inverse of the expansion: each Voigt slot collects its permutation class.
  Eigen::Matrix3d v = Eigen::Matrix3d::Zero();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) v(voigt_index(i, j), voigt_index(k, l)) += full[i][j][k][l];
  return v;
}

bool GammaTensor::is_zero() const { return voigt_.isZero(0.0); }

double GammaTensor::contract(const Mat2& A, const Mat2& B) const {
  double s = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) s += full_[i][j][k][l] * A(i, j) * B(k, l);
  return s;
}

GammaTensor GammaTensor::rotated(double angle) const {
  const Mat2 R = rotation(angle);
  double out[2][2][2][2] = {};
  for (int m = 0; m < 2; ++m)
    for (int n = 0; n < 2; ++n)
      for (int o = 0; o < 2; ++o)
        for (int p = 0; p < 2; ++p) {
          double s = 0.0;
          for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
              for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l)
                  s += R(m, i) * R(n, j) * R(o, k) * R(p, l) * full_[i][j][k][l];
          out[m][n][o][p] = s;
        }
  GammaTensor g;
  g.voigt_ = voigt_of_full(out);
  g.expand_from_voigt();
  return g;
}

double GammaTensor::normal_coefficient(double theta) const {
  // Crack-frame 2222 component; the normal is n = (-sin theta, cos theta).
  const double n1 = -std::sin(theta), n2 = std::cos(theta);
  const double n[2] = {n1, n2};
  double s = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) s += full_[i][j][k][l] * n[i] * n[j] * n[k] * n[l];
  return s;
}

namespace {

inline int voigt_index3(int i, int j) {
  if (i == j) return i;
  const int a = std::min(i, j), b = std::max(i, j);
  if (a == 0 && b == 1) return 3;  // 12
  if (a == 1 && b == 2) return 4;  // 23
  return 5;                        // 13
}

inline double multiplicity3(int v) { return v >= 3 ? 2.0 : 1.0; }

}  // namespace

GammaTensor3D GammaTensor3D::from_voigt(const Voigt6& v) {
  GammaTensor3D g;
  g.voigt_ = 0.5 * (v + v.transpose());
  return g;
}

double GammaTensor3D::full(int i, int j, int k, int l) const {
  const int a = voigt_index3(i, j), b = voigt_index3(k, l);
  return voigt_(a, b) / (multiplicity3(a) * multiplicity3(b));
}

double GammaTensor3D::quadratic(const Eigen::Matrix3d& A) const {
  double s = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) s += full(i, j, k, l) * A(i, j) * A(k, l);
  return s;
}

}  // namespace pfmpm
