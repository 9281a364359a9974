#pragma once

// Symplectic capacities of ellipsoids, the cylinder capacity, and the
// shadow-area computations behind linear non-squeezing. Gromov's theorem
// itself is taken as an axiom here (it is a deep existence result); what
// this module computes and tests are its linear-category consequences,
// which are fully decidable numerically.

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "sympl/core.hpp"

namespace sympl {

/// { z : (z - center)^T shape (z - center) <= 1 } with shape positive-definite.
template <typename Scalar>
struct EllipsoidT {
  VecX<Scalar> center;
  MatX<Scalar> shape;

  EllipsoidT() = default;
  EllipsoidT(VecX<Scalar> center_, MatX<Scalar> shape_)
      : center(std::move(center_)), shape(std::move(shape_)) {
    if (shape.rows() != shape.cols() || shape.rows() != center.size())
      throw InvalidDimension("Ellipsoid: center and shape dimensions disagree");
    const Scalar scale = std::max(shape.cwiseAbs().maxCoeff(), Scalar(1));
    if ((shape - shape.transpose()).cwiseAbs().maxCoeff() > Scalar(1e-12) * scale)
      throw InvalidInput("Ellipsoid: shape must be symmetric");
    shape = (Scalar(0.5) * (shape + shape.transpose())).eval();
    Eigen::SelfAdjointEigenSolver<MatX<Scalar>> es(shape);
    if (!(es.eigenvalues().minCoeff() >
          Scalar(1e-12) * std::max(es.eigenvalues().maxCoeff(), Scalar(0))))
      throw DegenerateMatrix("Ellipsoid: shape must be positive-definite");
  }

  Index dim() const { return center.size(); }
  bool contains(const VecX<Scalar>& z, Scalar slack = Scalar(0)) const {
    const VecX<Scalar> d = z - center;
    return d.dot(shape * d) <= Scalar(1) + slack;
  }

  /// Image under the affine map z -> L z + s: shape -> L^{-T} shape L^{-1}.
  EllipsoidT transformed(const MatX<Scalar>& L, const VecX<Scalar>& s) const {
    const MatX<Scalar> Linv = L.partialPivLu().solve(MatX<Scalar>::Identity(dim(), dim()));
    return EllipsoidT(L * center + s, Linv.transpose() * shape * Linv);
  }

  static EllipsoidT ball(Index dim2n, Scalar radius) {
    return EllipsoidT(VecX<Scalar>::Zero(dim2n),
                      MatX<Scalar>::Identity(dim2n, dim2n) / (radius * radius));
  }
};

using Ellipsoid = EllipsoidT<double>;

/// All symplectic capacities coincide on ellipsoids; the common value is
/// pi / lambda_max, with lambda_max the largest symplectic eigenvalue of the
/// shape matrix. Center-independent.
template <typename Scalar>
Scalar ellipsoid_capacity(const EllipsoidT<Scalar>& E) {
  const VecX<Scalar> lambdas = symplectic_eigenvalues(E.shape);
  return Scalar(kPi) / lambdas(lambdas.size() - 1);
}

/// Capacity of the cylinder Z_j(R) = { x_j^2 + p_j^2 <= R^2 }: pi R^2. The
/// equality with the ball capacity is the non-squeezing theorem, recorded
/// here as a constant rather than re-proved.
template <typename Scalar>
Scalar cylinder_capacity(Scalar R) {
  if (!(R > 0)) throw InvalidInput("cylinder_capacity: radius must be positive");
  return Scalar(kPi) * R * R;
}

/// Area of the orthogonal projection of S * B(r) onto the (i, j) coordinate
/// plane: pi r^2 sqrt(det G) with G the {i, j} principal 2x2 submatrix of
/// S S^T. Exact closed form, no sampling.
template <typename Derived>
typename Derived::Scalar shadow_area(const Eigen::MatrixBase<Derived>& S,
                                     typename Derived::Scalar r, Index i, Index j) {
  using Scalar = typename Derived::Scalar;
  if (!(r > 0)) throw InvalidInput("shadow_area: radius must be positive");
  if (i == j || i < 0 || j < 0 || i >= S.rows() || j >= S.rows())
    throw InvalidInput("shadow_area: invalid plane indices");
  const MatX<Scalar> G = S * S.transpose();
  const Scalar det = G(i, i) * G(j, j) - G(i, j) * G(j, i);
  return Scalar(kPi) * r * r * std::sqrt(std::max(det, Scalar(0)));
}

template <typename Scalar>
struct ShadowEntryT {
  Index i, j;
  Scalar area;
  bool conjugate;  // true iff {i, j} = {k, n + k}
};

/// Shadow areas of S * B(r) on every coordinate plane. For symplectic S the
/// conjugate-plane areas can never drop below pi r^2 (linear non-squeezing);
/// non-conjugate planes carry no such obstruction.
template <typename Scalar>
struct ShadowReportT {
  Scalar r;
  std::vector<ShadowEntryT<Scalar>> entries;
  Scalar min_conjugate_area;
};

using ShadowEntry = ShadowEntryT<double>;
using ShadowReport = ShadowReportT<double>;

template <typename Scalar>
ShadowReportT<Scalar> nonsqueezing_report(const SymplecticMatrixT<Scalar>& S, Scalar r) {
  if (!(r > 0)) throw InvalidInput("nonsqueezing_report: radius must be positive");
  const Index n = S.dof();
  ShadowReportT<Scalar> report;
  report.r = r;
  report.min_conjugate_area = std::numeric_limits<Scalar>::infinity();
  for (Index i = 0; i < 2 * n; ++i) {
    for (Index j = i + 1; j < 2 * n; ++j) {
      const bool conj = (j == i + n);
      const Scalar area = shadow_area(S.mat(), r, i, j);
      report.entries.push_back({i, j, area, conj});
      if (conj) report.min_conjugate_area = std::min(report.min_conjugate_area, area);
    }
  }
  return report;
}

/// Human-readable plane label, e.g. "x1-p1" for the first conjugate plane.
inline std::string plane_label(Index i, Index j, Index n) {
  auto name = [n](Index k) {
    return (k < n ? "x" + std::to_string(k + 1) : "p" + std::to_string(k - n + 1));
  };
  return name(i) + "-" + name(j);
}

}  // namespace sympl
