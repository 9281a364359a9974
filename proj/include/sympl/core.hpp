#pragma once

// Symplectic linear algebra primitives: the standard form J, symplecticity
// tests, seeded random symplectic matrices, symplectic eigenvalues and the
// matrix exponential everything downstream builds on.

#include <cmath>
#include <utility>

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

#include "sympl/types.hpp"

namespace sympl {

inline constexpr double kDefaultSymplecticTol = 1e-10;

/// The standard symplectic form J = (0, I; -I, 0) with n x n blocks.
/// Entries are exactly 0 and +-1, so J*J = -I holds bit-exactly.
template <typename Scalar = double>
MatX<Scalar> standard_symplectic_form(Index n) {
  if (n < 1) throw InvalidDimension("standard_symplectic_form: n must be >= 1");
  MatX<Scalar> J = MatX<Scalar>::Zero(2 * n, 2 * n);
  J.topRightCorner(n, n) = MatX<Scalar>::Identity(n, n);
  J.bottomLeftCorner(n, n) = -MatX<Scalar>::Identity(n, n);
  return J;
}

/// True iff max|S^T J S - J| <= tol.
template <typename Derived>
bool is_symplectic(const Eigen::MatrixBase<Derived>& S,
                   typename Derived::RealScalar tol) {
  using Scalar = typename Derived::Scalar;
  if (S.rows() != S.cols() || S.rows() % 2 != 0 || S.rows() < 2)
    throw InvalidDimension("is_symplectic: matrix must be square with even dimension");
  if (!(tol > 0)) throw InvalidInput("is_symplectic: tol must be positive");
  const Index n = S.rows() / 2;
  const MatX<Scalar> J = standard_symplectic_form<Scalar>(n);
  return ((S.transpose() * J * S - J).cwiseAbs().maxCoeff() <= tol);
}

/// Max-norm defect |S^T J S - J|, the quantity is_symplectic thresholds.
template <typename Derived>
typename Derived::RealScalar symplectic_defect(const Eigen::MatrixBase<Derived>& S) {
  using Scalar = typename Derived::Scalar;
  const Index n = S.rows() / 2;
  const MatX<Scalar> J = standard_symplectic_form<Scalar>(n);
  return (S.transpose() * J * S - J).cwiseAbs().maxCoeff();
}

/// Matrix exponential e^A (scaling-and-squaring with diagonal Pade
/// approximant, as provided by Eigen's matrix-functions module).
template <typename Derived>
MatX<typename Derived::Scalar> matrix_exponential(const Eigen::MatrixBase<Derived>& A) {
  if (A.rows() != A.cols())
    throw InvalidDimension("matrix_exponential: matrix must be square");
  if (!A.allFinite())
    throw InvalidInput("matrix_exponential: entries must be finite");
  return A.exp();
}

/// A 2n x 2n matrix validated to satisfy S^T J S = J.
template <typename Scalar>
class SymplecticMatrixT {
 public:
  SymplecticMatrixT(MatX<Scalar> entries, Scalar tol = Scalar(kDefaultSymplecticTol))
      : m_(std::move(entries)) {
    if (m_.rows() != m_.cols() || m_.rows() % 2 != 0 || m_.rows() < 2)
      throw InvalidDimension("SymplecticMatrix: dimension must be even and >= 2");
    if (!is_symplectic(m_, tol))
      throw InvalidInput("SymplecticMatrix: symplectic defect exceeds tolerance");
    if (std::abs(m_.determinant() - Scalar(1)) > Scalar(1e-8))
      throw InvalidInput("SymplecticMatrix: determinant is not +1");
  }

  /// Wrap without validating (for integrators whose output is symplectic
  /// only up to a reported drift).
  static SymplecticMatrixT unchecked(MatX<Scalar> entries) {
    SymplecticMatrixT s;
    s.m_ = std::move(entries);
    return s;
  }

  const MatX<Scalar>& mat() const { return m_; }
  Index dof() const { return m_.rows() / 2; }
  Index dim() const { return m_.rows(); }

 private:
  SymplecticMatrixT() = default;
  MatX<Scalar> m_;
};

using SymplecticMatrix = SymplecticMatrixT<double>;

/// Seeded random symplectic matrix exp(J M), with M symmetric and entries
/// uniform in [-scale, scale]. scale = 0 degenerates to the identity, which
/// tests use to pin the construction.
template <typename Scalar = double>
SymplecticMatrixT<Scalar> random_symplectic(Index n, std::uint64_t seed,
                                            Scalar scale = Scalar(1)) {
  if (n < 1) throw InvalidDimension("random_symplectic: n must be >= 1");
  Rng rng(seed);
  MatX<Scalar> M(2 * n, 2 * n);
  for (Index i = 0; i < 2 * n; ++i)
    for (Index j = i; j < 2 * n; ++j)
      M(i, j) = M(j, i) = static_cast<Scalar>(scale * rng.uniform(-1.0, 1.0));
  const MatX<Scalar> J = standard_symplectic_form<Scalar>(n);
  return SymplecticMatrixT<Scalar>(matrix_exponential((J * M).eval()), Scalar(1e-9));
}

/// Symplectic eigenvalues of a positive-definite 2n x 2n matrix M: the n
/// positive numbers lambda_j such that the spectrum of JM is {+-i lambda_j},
/// sorted ascending. Computed through the antisymmetric matrix
/// M^(1/2) J M^(1/2), whose singular values come in pairs (lambda_j, lambda_j);
/// no non-symmetric eigensolver is involved.
template <typename Derived>
VecX<typename Derived::Scalar> symplectic_eigenvalues(const Eigen::MatrixBase<Derived>& M) {
  using Scalar = typename Derived::Scalar;
  if (M.rows() != M.cols() || M.rows() % 2 != 0 || M.rows() < 2)
    throw InvalidDimension("symplectic_eigenvalues: matrix must be 2n x 2n");
  const MatX<Scalar> Md = M;
  const Scalar scale = Md.cwiseAbs().maxCoeff();
  if ((Md - Md.transpose()).cwiseAbs().maxCoeff() > Scalar(1e-12) * std::max(scale, Scalar(1)))
    throw InvalidInput("symplectic_eigenvalues: matrix must be symmetric");

  Eigen::SelfAdjointEigenSolver<MatX<Scalar>> es(Scalar(0.5) * (Md + Md.transpose()));
  const VecX<Scalar> ev = es.eigenvalues();
  const Scalar degenerate_tol = Scalar(1e-12) * ev.maxCoeff();
  if (!(ev.minCoeff() > degenerate_tol))
    throw DegenerateMatrix("symplectic_eigenvalues: matrix must be positive-definite");

  const Index n = Md.rows() / 2;
  const MatX<Scalar> sqrtM =
      es.eigenvectors() * ev.cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
  const MatX<Scalar> K = sqrtM * standard_symplectic_form<Scalar>(n) * sqrtM;
  Eigen::JacobiSVD<MatX<Scalar>> svd(K);
  const VecX<Scalar>& sv = svd.singularValues();  // descending, in equal pairs
  VecX<Scalar> lambdas(n);
  for (Index j = 0; j < n; ++j)
    lambdas(n - 1 - j) = Scalar(0.5) * (sv(2 * j) + sv(2 * j + 1));
  return lambdas;
}

}  // namespace sympl
