#pragma once

#include <span>
#include <vector>

#include "pfmpm/types.hpp"

namespace pfmpm {

/// Open uniform knot vector on [0,1]: first and last knot repeated
/// (degree + 1) times, interior knots uniformly spaced.
struct KnotVector {
  int degree = 2;
  int spans = 1;  // number of non-empty knot intervals
  std::vector<double> knots;
};

KnotVector make_open_uniform(int degree, int spans);

/// Basis functions supported at one evaluation point: values, gradients and
/// Hessians with respect to the physical (mm) coordinates.
struct BasisEval {
  static constexpr int kMaxSupport = 16;  // (degree+1)^2 for degree <= 3
  int count = 0;
  int node_ids[kMaxSupport];
  double N[kMaxSupport];
  Vec2 dN[kMaxSupport];
  Mat2 ddN[kMaxSupport];
};

/// Gradients g' = R(phi) g and Hessians H' = R(phi) H R(phi)^T; values and
/// node ids unchanged.
BasisEval rotate_derivatives(const BasisEval& basis, double phi);

struct ActiveSet {
  std::vector<int> nodes;           // sorted active node ids
  std::vector<int> cells;           // sorted active cell ids
  int dof_count = 0;                // == nodes.size()
  std::vector<int> node_to_active;  // size node_count, -1 when inactive
};

/// Tensor-product B-spline background grid over an axis-aligned rectangle.
class SplineGrid {
 public:
  static SplineGrid build(const Rect& bounds, double h, int order = 2);

  double h() const { return h_; }
  int order() const { return order_; }
  const Rect& bounds() const { return bounds_; }
  int spans(int axis) const { return spans_[axis]; }
  int control_points(int axis) const { return ncp_[axis]; }
  int node_count() const { return ncp_[0] * ncp_[1]; }
  int cell_count() const { return spans_[0] * spans_[1]; }
  const KnotVector& knots(int axis) const { return axis == 0 ? kx_ : ky_; }

  /// Physical position of a control point (Greville abscissa).
  Vec2 node_position(int node_id) const;

  int cell_of(const Vec2& x) const;  // throws OutOfDomainError
  bool inside(const Vec2& x) const { return bounds_.contains(x); }

  BasisEval eval_basis(const Vec2& x) const;  // throws OutOfDomainError

  ActiveSet compute_active(std::span<const Vec2> points) const;

 private:
  Rect bounds_;
  double h_ = 0.0;
  int order_ = 2;
  int spans_[2] = {0, 0};
  int ncp_[2] = {0, 0};
  KnotVector kx_, ky_;

  // 1D basis values and first/second derivatives w.r.t. the parameter, for
  // the (degree+1) functions supported on the span containing u.
  void eval_1d(int axis, double u, int& span, double* N, double* dN, double* ddN) const;
};

}  // namespace pfmpm
