#pragma once

// Planar convex hulls and maximal-volume inscribed (John) ellipsoids of
// convex polytopes, via a log-det barrier interior-point method with a
// certified duality gap.

#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "sympl/capacity.hpp"

namespace sympl {

/// { z : A z <= b } with rows of A normalized to unit length.
template <typename Scalar>
struct PolytopeT {
  MatX<Scalar> A;
  VecX<Scalar> b;

  PolytopeT() = default;
  PolytopeT(MatX<Scalar> A_, VecX<Scalar> b_) : A(std::move(A_)), b(std::move(b_)) {
    if (A.rows() != b.size() || A.rows() < 1 || A.cols() < 1)
      throw InvalidDimension("Polytope: A and b sizes disagree");
    for (Index i = 0; i < A.rows(); ++i) {
      const Scalar len = A.row(i).norm();
      if (!(len > Scalar(1e-14)))
        throw InvalidInput("Polytope: zero constraint row");
      A.row(i) /= len;
      b(i) /= len;
    }
  }

  Index dim() const { return A.cols(); }
  Index num_constraints() const { return A.rows(); }
  bool contains(const VecX<Scalar>& z, Scalar slack = Scalar(0)) const {
    return ((A * z - b).maxCoeff() <= slack);
  }

  /// Image under z -> L z + s.
  PolytopeT transformed(const MatX<Scalar>& L, const VecX<Scalar>& s) const {
    const MatX<Scalar> Linv =
        L.partialPivLu().solve(MatX<Scalar>::Identity(dim(), dim()));
    return PolytopeT(A * Linv, b + A * Linv * s);
  }

  /// Axis-aligned box { lo <= z <= hi }.
  static PolytopeT box(const VecX<Scalar>& lo, const VecX<Scalar>& hi) {
    const Index d = lo.size();
    MatX<Scalar> A(2 * d, d);
    VecX<Scalar> b(2 * d);
    A.setZero();
    for (Index j = 0; j < d; ++j) {
      A(2 * j, j) = Scalar(1);
      b(2 * j) = hi(j);
      A(2 * j + 1, j) = Scalar(-1);
      b(2 * j + 1) = -lo(j);
    }
    return PolytopeT(std::move(A), std::move(b));
  }
};

using Polytope = PolytopeT<double>;

/// Planar cloud of (x, p) points, one per row.
template <typename Scalar>
struct PointCloud2DT {
  MatX<Scalar> points;  // k x 2

  explicit PointCloud2DT(MatX<Scalar> pts) : points(std::move(pts)) {
    if (points.cols() != 2 || points.rows() < 3)
      throw InvalidInput("PointCloud2D: need at least 3 planar points");
    if (!points.allFinite()) throw InvalidInput("PointCloud2D: non-finite points");
  }
};

using PointCloud2D = PointCloud2DT<double>;

template <typename Scalar>
struct ConvexHull2DT {
  PolytopeT<Scalar> polytope;
  MatX<Scalar> vertices;  // counterclockwise, one per row
};

using ConvexHull2D = ConvexHull2DT<double>;

/// Andrew's monotone chain. Collinear boundary points are dropped, so
/// vertices are in strictly convex counterclockwise order; collinear input
/// (hull area below 1e-12 * span^2) is rejected.
template <typename Scalar>
ConvexHull2DT<Scalar> convex_hull_2d(const PointCloud2DT<Scalar>& cloud) {
  std::vector<std::pair<Scalar, Scalar>> pts;
  pts.reserve(cloud.points.rows());
  for (Index i = 0; i < cloud.points.rows(); ++i)
    pts.emplace_back(cloud.points(i, 0), cloud.points(i, 1));
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  Scalar span = Scalar(0);
  for (const auto& p : pts) {
    span = std::max(span, std::abs(p.first - pts[0].first));
    span = std::max(span, std::abs(p.second - pts[0].second));
  }
  const Scalar tol = Scalar(1e-12) * std::max(span * span, Scalar(1e-30));

  auto cross = [](const std::pair<Scalar, Scalar>& o, const std::pair<Scalar, Scalar>& a,
                  const std::pair<Scalar, Scalar>& b) {
    return (a.first - o.first) * (b.second - o.second) -
           (a.second - o.second) * (b.first - o.first);
  };

  const Index k = static_cast<Index>(pts.size());
  if (k < 3) throw DegenerateHull("convex_hull_2d: fewer than 3 distinct points");

  std::vector<std::pair<Scalar, Scalar>> hull(2 * k);
  Index h = 0;
  for (Index i = 0; i < k; ++i) {  // lower
    while (h >= 2 && cross(hull[h - 2], hull[h - 1], pts[i]) <= tol) --h;
    hull[h++] = pts[i];
  }
  for (Index i = k - 2, lower = h + 1; i >= 0; --i) {  // upper
    while (h >= lower && cross(hull[h - 2], hull[h - 1], pts[i]) <= tol) --h;
    hull[h++] = pts[i];
  }
  hull.resize(h - 1);  // last point repeats the first

  if (static_cast<Index>(hull.size()) < 3)
    throw DegenerateHull("convex_hull_2d: input points are collinear");

  Scalar area2 = Scalar(0);
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const auto& p = hull[i];
    const auto& q = hull[(i + 1) % hull.size()];
    area2 += p.first * q.second - q.first * p.second;
  }
  if (std::abs(area2) <= 2 * tol)
    throw DegenerateHull("convex_hull_2d: hull area is degenerate");

  const Index nv = static_cast<Index>(hull.size());
  MatX<Scalar> V(nv, 2);
  MatX<Scalar> A(nv, 2);
  VecX<Scalar> b(nv);
  for (Index i = 0; i < nv; ++i) {
    V(i, 0) = hull[i].first;
    V(i, 1) = hull[i].second;
  }
  for (Index i = 0; i < nv; ++i) {
    const Index j = (i + 1) % nv;
    const Scalar ex = V(j, 0) - V(i, 0);
    const Scalar ey = V(j, 1) - V(i, 1);
    A(i, 0) = ey;   // outward normal of a counterclockwise edge
    A(i, 1) = -ex;
    b(i) = A.row(i).dot(V.row(i));
  }
  return {PolytopeT<Scalar>(std::move(A), std::move(b)), std::move(V)};
}

/// Volume of an ellipsoid: vol(unit ball in R^d) / sqrt(det shape).
template <typename Scalar>
Scalar ellipsoid_volume(const EllipsoidT<Scalar>& E) {
  const Scalar d = static_cast<Scalar>(E.dim());
  const Scalar unit_ball =
      std::pow(Scalar(kPi), d / 2) / std::tgamma(d / 2 + 1);
  return unit_ball / std::sqrt(E.shape.determinant());
}

namespace detail {

/// Lawson-Hanson nonnegative least squares: min || C y - c ||, y >= 0.
/// Returns the residual norm. Used through LP duality to decide whether
/// max c.z over { A z <= b } is bounded (bounded iff A^T y = c has a
/// nonnegative solution, i.e. iff the residual vanishes).
template <typename Scalar>
Scalar nnls_residual(const MatX<Scalar>& C, const VecX<Scalar>& c) {
  const Index m = C.cols();
  VecX<Scalar> y = VecX<Scalar>::Zero(m);
  std::vector<bool> passive(m, false);
  VecX<Scalar> r = c;
  const Scalar tol = Scalar(1e-12) * std::max(c.norm(), Scalar(1));

  for (Index outer = 0; outer < 3 * m + 10; ++outer) {
    const VecX<Scalar> w = C.transpose() * r;
    Index best = -1;
    Scalar wmax = tol;
    for (Index i = 0; i < m; ++i)
      if (!passive[i] && w(i) > wmax) {
        wmax = w(i);
        best = i;
      }
    if (best < 0) break;
    passive[best] = true;

    for (Index inner = 0; inner < 3 * m + 10; ++inner) {
      std::vector<Index> idx;
      for (Index i = 0; i < m; ++i)
        if (passive[i]) idx.push_back(i);
      MatX<Scalar> Cp(C.rows(), static_cast<Index>(idx.size()));
      for (std::size_t j = 0; j < idx.size(); ++j) Cp.col(j) = C.col(idx[j]);
      const VecX<Scalar> z = Cp.colPivHouseholderQr().solve(c);

      Scalar zmin = std::numeric_limits<Scalar>::infinity();
      for (Index j = 0; j < z.size(); ++j) zmin = std::min(zmin, z(j));
      if (zmin > 0) {
        y.setZero();
        for (std::size_t j = 0; j < idx.size(); ++j) y(idx[j]) = z(j);
        break;
      }
      Scalar alpha = Scalar(1);
      for (std::size_t j = 0; j < idx.size(); ++j)
        if (z(j) <= 0) alpha = std::min(alpha, y(idx[j]) / (y(idx[j]) - z(j)));
      for (std::size_t j = 0; j < idx.size(); ++j)
        y(idx[j]) += alpha * (z(j) - y(idx[j]));
      for (std::size_t j = 0; j < idx.size(); ++j)
        if (passive[idx[j]] && y(idx[j]) <= tol) {
          passive[idx[j]] = false;
          y(idx[j]) = Scalar(0);
        }
    }
    r = c - C * y;
  }
  return (c - C * y).norm();
}

template <typename Scalar>
bool direction_bounded(const MatX<Scalar>& A, const VecX<Scalar>& dir) {
  return nnls_residual(MatX<Scalar>(A.transpose()), dir) <= Scalar(1e-8);
}

/// Log-barrier Newton solver for a small dense LP: min c.w s.t. G w <= h,
/// from a strictly feasible start. Path-following with gap m/t.
template <typename Scalar>
VecX<Scalar> barrier_lp(const MatX<Scalar>& G, const VecX<Scalar>& h,
                        const VecX<Scalar>& c, VecX<Scalar> w, Scalar gap_tol) {
  const Index m = G.rows();
  const Index nv = G.cols();
  Scalar t = Scalar(1);
  const Scalar mu = Scalar(20);

  while (true) {
    for (int iter = 0; iter < 80; ++iter) {
      const VecX<Scalar> s = h - G * w;
      VecX<Scalar> grad = c;
      MatX<Scalar> H = MatX<Scalar>::Zero(nv, nv);
      for (Index i = 0; i < m; ++i) {
        grad += G.row(i).transpose() / (t * s(i));
        H += G.row(i).transpose() * G.row(i) / (t * s(i) * s(i));
      }
      const VecX<Scalar> step = H.ldlt().solve(-grad);
      const Scalar decrement2 = -grad.dot(step);
      if (!(decrement2 > Scalar(1e-18))) break;

      Scalar alpha = Scalar(1);
      while ((h - G * (w + alpha * step)).minCoeff() <= Scalar(0)) alpha /= 2;
      auto value = [&](const VecX<Scalar>& v) {
        const VecX<Scalar> sv = h - G * v;
        return c.dot(v) - sv.array().log().sum() / t;
      };
      const Scalar f0 = value(w);
      while (alpha > Scalar(1e-14) &&
             value(w + alpha * step) > f0 + Scalar(0.25) * alpha * grad.dot(step))
        alpha /= 2;
      w += alpha * step;
    }
    if (Scalar(m) / t <= gap_tol) break;
    t *= mu;
  }
  return w;
}

}  // namespace detail

/// Center of the largest inscribed ball and its radius (the margin). The
/// auxiliary program maximizes the minimum slack; margin <= 0 means the
/// interior is empty.
template <typename Scalar>
std::pair<VecX<Scalar>, Scalar> chebyshev_center(const PolytopeT<Scalar>& P) {
  const Index d = P.dim();
  const Index m = P.num_constraints();
  const Scalar box = Scalar(1e3) * (Scalar(1) + P.b.cwiseAbs().maxCoeff());

  MatX<Scalar> G(m + 2 * d + 1, d + 1);
  VecX<Scalar> h(m + 2 * d + 1);
  G.setZero();
  G.topLeftCorner(m, d) = P.A;
  G.topRightCorner(m, 1).setOnes();
  h.head(m) = P.b;
  for (Index j = 0; j < d; ++j) {
    G(m + 2 * j, j) = Scalar(1);
    h(m + 2 * j) = box;
    G(m + 2 * j + 1, j) = Scalar(-1);
    h(m + 2 * j + 1) = box;
  }
  G(m + 2 * d, d) = Scalar(1);
  h(m + 2 * d) = box;

  VecX<Scalar> c = VecX<Scalar>::Zero(d + 1);
  c(d) = Scalar(-1);  // maximize the margin
  VecX<Scalar> w0 = VecX<Scalar>::Zero(d + 1);
  w0(d) = std::min(P.b.minCoeff() - Scalar(1), Scalar(-1));

  const Scalar gap = Scalar(1e-9) * (Scalar(1) + P.b.cwiseAbs().maxCoeff());
  const VecX<Scalar> w = detail::barrier_lp(G, h, c, w0, gap);
  return {w.head(d), w(d)};
}

template <typename Scalar>
struct JohnResultT {
  EllipsoidT<Scalar> ellipsoid;
  Scalar duality_gap;   // certified bound on the log-volume suboptimality
  Scalar log_volume;
  Index newton_steps;
};

using JohnResult = JohnResultT<double>;

/// Maximal-volume inscribed ellipsoid { B u + center : |u| <= 1 }, B
/// symmetric positive-definite, of a bounded full-dimensional polytope.
/// Solves max log det B subject to ||B a_i|| <= b_i - a_i.center by damped
/// Newton steps on the log-barrier central path; stops once the duality gap
/// on log det B is below gap_tol. Deterministic: identical input gives
/// identical output.
template <typename Scalar>
JohnResultT<Scalar> john_ellipsoid(const PolytopeT<Scalar>& P,
                                   Scalar gap_tol = Scalar(1e-9)) {
  const Index d = P.dim();
  const Index m = P.num_constraints();

  for (Index j = 0; j < d; ++j) {
    VecX<Scalar> dir = VecX<Scalar>::Zero(d);
    dir(j) = Scalar(1);
    if (!detail::direction_bounded(P.A, dir) ||
        !detail::direction_bounded(P.A, VecX<Scalar>(-dir)))
      throw UnboundedRegion("john_ellipsoid: polytope is unbounded");
  }

  const auto [cheb, margin] = chebyshev_center(P);
  const Scalar scale = Scalar(1) + P.b.cwiseAbs().maxCoeff();
  if (!(margin > Scalar(1e-10) * scale))
    throw DegenerateRegion("john_ellipsoid: polytope has empty interior");

  // parameter layout: upper triangle of B (row-major), then the center
  const Index nb = d * (d + 1) / 2;
  const Index nv = nb + d;
  std::vector<std::pair<Index, Index>> basis;
  basis.reserve(nb);
  for (Index r = 0; r < d; ++r)
    for (Index c = r; c < d; ++c) basis.emplace_back(r, c);

  auto unpack = [&](const VecX<Scalar>& w, MatX<Scalar>& B, VecX<Scalar>& cen) {
    B.setZero(d, d);
    for (Index k = 0; k < nb; ++k) {
      const auto [r, c] = basis[k];
      B(r, c) = B(c, r) = w(k);
    }
    cen = w.tail(d);
  };

  // slacks s_i = b_i - a_i.cen - ||B a_i||; all must stay positive
  auto slacks = [&](const MatX<Scalar>& B, const VecX<Scalar>& cen, VecX<Scalar>& s,
                    MatX<Scalar>& R) {
    R = B * P.A.transpose();  // column i = B a_i
    for (Index i = 0; i < m; ++i)
      s(i) = P.b(i) - P.A.row(i).dot(cen) - R.col(i).norm();
  };

  VecX<Scalar> w = VecX<Scalar>::Zero(nv);
  for (Index k = 0; k < nb; ++k) {
    const auto [r, c] = basis[k];
    if (r == c) w(k) = Scalar(0.9) * margin;
  }
  w.tail(d) = cheb;

  MatX<Scalar> B(d, d), R(d, m);
  VecX<Scalar> cen(d), s(m);
  Scalar t = Scalar(1);
  const Scalar mu = Scalar(20);
  Index newton_total = 0;

  auto objective = [&](const VecX<Scalar>& wv) {
    MatX<Scalar> Bv(d, d), Rv(d, m);
    VecX<Scalar> cv(d), sv(m);
    unpack(wv, Bv, cv);
    Eigen::LLT<MatX<Scalar>> llt(Bv);
    if (llt.info() != Eigen::Success) return std::numeric_limits<Scalar>::infinity();
    slacks(Bv, cv, sv, Rv);
    if (!(sv.minCoeff() > Scalar(0))) return std::numeric_limits<Scalar>::infinity();
    const Scalar logdet =
        Scalar(2) * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
    return -logdet - sv.array().log().sum() / t;
  };

  while (true) {
    for (int iter = 0; iter < 120; ++iter) {
      ++newton_total;
      unpack(w, B, cen);
      slacks(B, cen, s, R);

      const MatX<Scalar> Binv = B.llt().solve(MatX<Scalar>::Identity(d, d));
      VecX<Scalar> grad = VecX<Scalar>::Zero(nv);
      MatX<Scalar> H = MatX<Scalar>::Zero(nv, nv);

      // -log det B part
      std::vector<MatX<Scalar>> Qk(nb);
      for (Index k = 0; k < nb; ++k) {
        const auto [r, c] = basis[k];
        grad(k) -= (r == c) ? Binv(r, r) : 2 * Binv(r, c);
        MatX<Scalar> Pk = MatX<Scalar>::Zero(d, d);
        Pk(r, c) = Pk(c, r) = Scalar(1);
        Qk[k] = Binv * Pk;
      }
      for (Index k = 0; k < nb; ++k)
        for (Index l = k; l < nb; ++l)
          H(k, l) = H(l, k) = (Qk[k] * Qk[l]).trace();

      // barrier terms
      for (Index i = 0; i < m; ++i) {
        const VecX<Scalar> a = P.A.row(i).transpose();
        const Scalar ni = R.col(i).norm();
        const VecX<Scalar> rhat = R.col(i) / ni;
        VecX<Scalar> gs(nv);
        MatX<Scalar> V(d, nb);  // column k = P_k a
        for (Index k = 0; k < nb; ++k) {
          const auto [r, c] = basis[k];
          VecX<Scalar> v = VecX<Scalar>::Zero(d);
          if (r == c) {
            v(r) = a(r);
          } else {
            v(r) = a(c);
            v(c) = a(r);
          }
          V.col(k) = v;
          gs(k) = rhat.dot(v);
        }
        gs.tail(d) = a;
        grad += gs / (t * s(i));
        H += gs * gs.transpose() / (t * s(i) * s(i));
        const VecX<Scalar> proj = V.transpose() * rhat;
        H.topLeftCorner(nb, nb) +=
            (V.transpose() * V - proj * proj.transpose()) / (t * s(i) * ni);
      }

      const VecX<Scalar> step = H.ldlt().solve(-grad);
      const Scalar decrement2 = -grad.dot(step);
      if (!(decrement2 > Scalar(1e-17))) break;

      Scalar alpha = Scalar(1);
      const Scalar f0 = objective(w);
      while (alpha > Scalar(1e-14) &&
             objective(w + alpha * step) > f0 + Scalar(0.25) * alpha * grad.dot(step))
        alpha /= 2;
      if (alpha <= Scalar(1e-14)) break;
      w += alpha * step;
    }
    if (Scalar(m) / t <= gap_tol) break;
    t *= mu;
  }

  unpack(w, B, cen);
  const MatX<Scalar> Binv = B.llt().solve(MatX<Scalar>::Identity(d, d));
  const MatX<Scalar> shape = Binv * Binv;

  JohnResultT<Scalar> out{EllipsoidT<Scalar>(cen, Scalar(0.5) * (shape + shape.transpose())),
                          Scalar(m) / t, Scalar(0), newton_total};
  Eigen::LLT<MatX<Scalar>> llt(B);
  const Scalar logdet =
      Scalar(2) * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  const Scalar unit_ball =
      std::pow(Scalar(kPi), Scalar(d) / 2) / std::tgamma(Scalar(d) / 2 + 1);
  out.log_volume = std::log(unit_ball) + logdet;
  return out;
}

}  // namespace sympl
