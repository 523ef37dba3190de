#include "pfmpm/bspline.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pfmpm {

KnotVector make_open_uniform(int degree, int spans) {
  if (degree < 1 || degree > 3) throw ConfigError("spline order must be 1, 2 or 3");
  if (spans < 1) throw ConfigError("knot vector needs at least one span");
  KnotVector kv;
  kv.degree = degree;
  kv.spans = spans;
  kv.knots.reserve(spans + 1 + 2 * degree);
  for (int i = 0; i < degree; ++i) kv.knots.push_back(0.0);
  for (int i = 0; i <= spans; ++i) kv.knots.push_back(static_cast<double>(i) / spans);
  for (int i = 0; i < degree; ++i) kv.knots.push_back(1.0);
  return kv;
}

SplineGrid SplineGrid::build(const Rect& bounds, double h, int order) {
  if (!(h > 0.0)) throw ConfigError("grid spacing h must be positive");
  const Vec2 size = bounds.size();
  if (!(size.x() > 0.0) || !(size.y() > 0.0)) throw ConfigError("grid bounds are degenerate");

  SplineGrid g;
  g.bounds_ = bounds;
  g.h_ = h;
  g.order_ = order;
  const char* axis_name[2] = {"x", "y"};
  for (int a = 0; a < 2; ++a) {
    const double extent = size[a];
    const double n_real = extent / h;
    const int n = static_cast<int>(std::lround(n_real));
    if (n < 1 || std::abs(n_real - n) > 1e-9 * std::max(1.0, n_real)) {
      std::ostringstream os;
      os << "grid spacing h=" << h << " does not divide the " << axis_name[a]
         << " extent " << extent << " into an integer span count";
      throw ConfigError(os.str());
    }
    g.spans_[a] = n;
    g.ncp_[a] = n + order;
  }
  g.kx_ = make_open_uniform(order, g.spans_[0]);
  g.ky_ = make_open_uniform(order, g.spans_[1]);
  return g;
}

Vec2 SplineGrid::node_position(int node_id) const {
  const int ix = node_id % ncp_[0];
  const int iy = node_id / ncp_[0];
  const int idx[2] = {ix, iy};
  Vec2 x;
  for (int a = 0; a < 2; ++a) {
    const KnotVector& kv = knots(a);
    double u = 0.0;  // Greville abscissa
    for (int k = 1; k <= order_; ++k) u += kv.knots[idx[a] + k];
    u /= order_;
    x[a] = bounds_.min[a] + u * bounds_.size()[a];
  }
  return x;
}

int SplineGrid::cell_of(const Vec2& x) const {
  if (!inside(x)) {
    std::ostringstream os;
    os << "point (" << x.x() << ", " << x.y() << ") is outside the grid domain";
    throw OutOfDomainError(os.str());
  }
  int c[2];
  for (int a = 0; a < 2; ++a) {
    int i = static_cast<int>(std::floor((x[a] - bounds_.min[a]) / h_));
    c[a] = std::clamp(i, 0, spans_[a] - 1);
  }
  return c[1] * spans_[0] + c[0];
}

namespace {

// Basis functions and derivatives on one span (Cox-de Boor recursion with the
// standard derivative table). N, dN, ddN hold the (degree+1) nonzero values.
void ders_basis_funs(int span, double u, int degree, const std::vector<double>& U, double* N,
                     double* dN, double* ddN) {
  constexpr int kMaxP = 3;
  double ndu[kMaxP + 1][kMaxP + 1];
  double left[kMaxP + 1], right[kMaxP + 1];
  double a[2][kMaxP + 1];
  double ders[3][kMaxP + 1];

  ndu[0][0] = 1.0;
  for (int j = 1; j <= degree; ++j) {
    left[j] = u - U[span + 1 - j];
    right[j] = U[span + j] - u;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      ndu[j][r] = right[r + 1] + left[j - r];
      const double temp = ndu[r][j - 1] / ndu[j][r];
      ndu[r][j] = saved + right[r + 1] * temp;
      saved = left[j - r] * temp;
    }
    ndu[j][j] = saved;
  }
  for (int j = 0; j <= degree; ++j) ders[0][j] = ndu[j][degree];

  const int nders = std::min(2, degree);
  for (int r = 0; r <= degree; ++r) {
    int s1 = 0, s2 = 1;
    a[0][0] = 1.0;
    for (int k = 1; k <= nders; ++k) {
      double d = 0.0;
      const int rk = r - k, pk = degree - k;
      if (r >= k) {
        a[s2][0] = a[s1][0] / ndu[pk + 1][rk];
        d = a[s2][0] * ndu[rk][pk];
      }
      const int j1 = (rk >= -1) ? 1 : -rk;
      const int j2 = (r - 1 <= pk) ? k - 1 : degree - r;
      for (int j = j1; j <= j2; ++j) {
        a[s2][j] = (a[s1][j] - a[s1][j - 1]) / ndu[pk + 1][rk + j];
        d += a[s2][j] * ndu[rk + j][pk];
      }
      if (r <= pk) {
        a[s2][k] = -a[s1][k - 1] / ndu[pk + 1][r];
        d += a[s2][k] * ndu[r][pk];
      }
      ders[k][r] = d;
      std::swap(s1, s2);
    }
  }
  double rf = degree;
  for (int k = 1; k <= nders; ++k) {
    for (int j = 0; j <= degree; ++j) ders[k][j] *= rf;
    rf *= degree - k;
  }

  for (int j = 0; j <= degree; ++j) {
    N[j] = ders[0][j];
    dN[j] = ders[1][j];
    ddN[j] = (degree >= 2) ? ders[2][j] : 0.0;
  }
}

}  // namespace

void SplineGrid::eval_1d(int axis, double u, int& span_out, double* N, double* dN,
                         double* ddN) const {
  const KnotVector& kv = knots(axis);
  int interior = static_cast<int>(std::floor(u * kv.spans));
  interior = std::clamp(interior, 0, kv.spans - 1);
  span_out = interior;
  ders_basis_funs(order_ + interior, u, order_, kv.knots, N, dN, ddN);
}

BasisEval SplineGrid::eval_basis(const Vec2& x) const {
  if (!inside(x)) {
    std::ostringstream os;
    os << "point (" << x.x() << ", " << x.y() << ") escaped the grid domain ["
       << bounds_.min.x() << "," << bounds_.max.x() << "]x[" << bounds_.min.y() << ","
       << bounds_.max.y() << "]";
    throw OutOfDomainError(os.str());
  }

  const int m = order_ + 1;
  double N1[2][4], dN1[2][4], ddN1[2][4];
  int first[2];
  double scale[2];
  for (int a = 0; a < 2; ++a) {
    const double extent = bounds_.size()[a];
    const double u = (x[a] - bounds_.min[a]) / extent;
    int interior;
    eval_1d(a, u, interior, N1[a], dN1[a], ddN1[a]);
    first[a] = interior;  // first supported function index along this axis
    scale[a] = 1.0 / extent;
  }

  BasisEval out;
  out.count = m * m;
  int q = 0;
  for (int jy = 0; jy < m; ++jy) {
    for (int jx = 0; jx < m; ++jx, ++q) {
      out.node_ids[q] = (first[1] + jy) * ncp_[0] + (first[0] + jx);
      const double nx = N1[0][jx], ny = N1[1][jy];
      const double dx = dN1[0][jx] * scale[0], dy = dN1[1][jy] * scale[1];
      const double dxx = ddN1[0][jx] * scale[0] * scale[0];
      const double dyy = ddN1[1][jy] * scale[1] * scale[1];
      out.N[q] = nx * ny;
      out.dN[q] = Vec2(dx * ny, nx * dy);
      Mat2 h;
      h << dxx * ny, dx * dy,
           dx * dy, nx * dyy;
      out.ddN[q] = h;
    }
  }
  return out;
}

BasisEval rotate_derivatives(const BasisEval& basis, double phi) {
  BasisEval out = basis;
  const Mat2 R = rotation(phi);
  for (int q = 0; q < basis.count; ++q) {
    out.dN[q] = R * basis.dN[q];
    out.ddN[q] = R * basis.ddN[q] * R.transpose();
  }
  return out;
}

ActiveSet SplineGrid::compute_active(std::span<const Vec2> points) const {
  std::vector<char> node_mark(node_count(), 0);
  std::vector<char> cell_mark(cell_count(), 0);
  const int m = order_ + 1;
  for (const Vec2& x : points) {
    const int cell = cell_of(x);
    cell_mark[cell] = 1;
    const int ix = cell % spans_[0];
    const int iy = cell / spans_[0];
    for (int jy = 0; jy < m; ++jy)
      for (int jx = 0; jx < m; ++jx) node_mark[(iy + jy) * ncp_[0] + (ix + jx)] = 1;
  }
  ActiveSet s;
  s.node_to_active.assign(node_count(), -1);
  for (int n = 0; n < node_count(); ++n)
    if (node_mark[n]) {
      s.node_to_active[n] = static_cast<int>(s.nodes.size());
      s.nodes.push_back(n);
    }
  for (int c = 0; c < cell_count(); ++c)
    if (cell_mark[c]) s.cells.push_back(c);
  s.dof_count = static_cast<int>(s.nodes.size());
  return s;
}

}  // namespace pfmpm
