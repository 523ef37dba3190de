#pragma once

#include <Eigen/Dense>

#include "pfmpm/types.hpp"

namespace pfmpm {

/// Fourth-order anisotropy tensor for the crack density functional, stored in
/// 2D Voigt form (rows/columns ordered 11, 22, 12) together with its full
/// 2x2x2x2 expansion.
///
/// The quadratic form it induces on symmetric second-derivative tensors is the
/// Voigt-matrix form: with v(A) = [A11, A22, A12],
///   sum_ijkl g_ijkl A_ij B_kl = v(A)^T * Voigt * v(B).
/// Equivalently, the full-index tensor carries each Voigt entry divided by the
/// product of the index-pair multiplicities (the 12-class pairs appear twice in
/// the full sum). This convention is the one that reproduces the published
/// polar surface-energy extrema; see the surface-energy tests.
class GammaTensor {
 public:
  GammaTensor();  // all zero (second-order isotropic model)

  static GammaTensor from_voigt(const Eigen::Matrix3d& voigt);
  /// Tensor whose quadratic form is (tr A)^2, i.e. the (Laplacian)^2 model.
  static GammaTensor isotropic_laplacian();

  const Eigen::Matrix3d& voigt() const { return voigt_; }
  double full(int i, int j, int k, int l) const { return full_[i][j][k][l]; }

  bool is_zero() const;

  /// sum_ijkl g_ijkl A_ij B_kl over all 16 index tuples.
  double contract(const Mat2& A, const Mat2& B) const;

  /// Component-wise rotation g'_mnop = R_mi R_nj R_ok R_pl g_ijkl with the
  /// standard counter-clockwise rotation matrix R(angle).
  GammaTensor rotated(double angle) const;

  /// Coefficient of (d2c/dn2)^2 for a profile varying only along the normal of
  /// a crack whose direction makes angle theta with the x1 axis: the 2222
  /// component of the tensor expressed in the crack frame.
  double normal_coefficient(double theta) const;

 private:
  Eigen::Matrix3d voigt_;
  double full_[2][2][2][2];
  void expand_from_voigt();
  static Eigen::Matrix3d voigt_of_full(const double full[2][2][2][2]);
};

/// 3D Voigt form (6x6, rows/cols 11, 22, 33, 12, 23, 13). Construction and
/// validation only; never time-stepped.
class GammaTensor3D {
 public:
  using Voigt6 = Eigen::Matrix<double, 6, 6>;
  static GammaTensor3D from_voigt(const Voigt6& v);
  const Voigt6& voigt() const { return voigt_; }
  double full(int i, int j, int k, int l) const;  // i..l in 0..2
  /// Quadratic form on a symmetric 3x3 matrix (full 81-tuple sum).
  double quadratic(const Eigen::Matrix3d& A) const;

 private:
  Voigt6 voigt_ = Voigt6::Zero();
};

}  // namespace pfmpm
