#pragma once

// Covariance matrices from John ellipsoids, Robertson-Schrodinger margins,
// the Sigma + (i hbar/2) J positivity test, the capacity threshold for
// quantum blobs, and conservation of all three verdicts under affine
// Hamiltonian evolution.

#include <cmath>
#include <utility>
#include <vector>

#include "sympl/convex.hpp"
#include "sympl/flows.hpp"

namespace sympl {

/// Positive-definite 2n x 2n covariance matrix in (x, p) block ordering.
template <typename Scalar>
struct CovarianceMatrixT {
  MatX<Scalar> sigma;

  CovarianceMatrixT() = default;
  explicit CovarianceMatrixT(MatX<Scalar> sigma_) : sigma(std::move(sigma_)) {
    if (sigma.rows() != sigma.cols() || sigma.rows() % 2 != 0 || sigma.rows() < 2)
      throw InvalidDimension("CovarianceMatrix: must be 2n x 2n");
    const Scalar scale = std::max(sigma.cwiseAbs().maxCoeff(), Scalar(1));
    if ((sigma - sigma.transpose()).cwiseAbs().maxCoeff() > Scalar(1e-12) * scale)
      throw InvalidInput("CovarianceMatrix: must be symmetric");
    sigma = (Scalar(0.5) * (sigma + sigma.transpose())).eval();
    Eigen::SelfAdjointEigenSolver<MatX<Scalar>> es(sigma);
    if (!(es.eigenvalues().minCoeff() >
          Scalar(1e-12) * std::max(es.eigenvalues().maxCoeff(), Scalar(0))))
      throw DegenerateMatrix("CovarianceMatrix: must be positive-definite");
  }

  Index dof() const { return sigma.rows() / 2; }

  auto xx() const { return sigma.topLeftCorner(dof(), dof()); }
  auto xp() const { return sigma.topRightCorner(dof(), dof()); }
  auto px() const { return sigma.bottomLeftCorner(dof(), dof()); }
  auto pp() const { return sigma.bottomRightCorner(dof(), dof()); }

  Scalar cov_xx(Index j, Index k) const { return sigma(j, k); }
  Scalar cov_xp(Index j, Index k) const { return sigma(j, dof() + k); }
  Scalar cov_pp(Index j, Index k) const { return sigma(dof() + j, dof() + k); }
  Scalar dx2(Index j) const { return cov_xx(j, j); }
  Scalar dp2(Index j) const { return cov_pp(j, j); }
};

using CovarianceMatrix = CovarianceMatrixT<double>;

/// Sigma such that the ellipsoid equals { (1/2) (z-z0)^T Sigma^{-1} (z-z0) <= 1 },
/// i.e. Sigma = (2 shape)^{-1}.
template <typename Scalar>
CovarianceMatrixT<Scalar> covariance_from_john(const EllipsoidT<Scalar>& E) {
  const Index dim = E.dim();
  const MatX<Scalar> inv =
      (Scalar(2) * E.shape).llt().solve(MatX<Scalar>::Identity(dim, dim));
  return CovarianceMatrixT<Scalar>(Scalar(0.5) * (inv + inv.transpose()));
}

/// The covariance ellipsoid of Sigma, centered at z0 (defaults to 0).
template <typename Scalar>
EllipsoidT<Scalar> covariance_ellipsoid(const CovarianceMatrixT<Scalar>& Sigma,
                                        VecX<Scalar> center = VecX<Scalar>()) {
  const Index dim = Sigma.sigma.rows();
  if (center.size() == 0) center = VecX<Scalar>::Zero(dim);
  const MatX<Scalar> inv = Sigma.sigma.llt().solve(MatX<Scalar>::Identity(dim, dim));
  return EllipsoidT<Scalar>(std::move(center),
                            Scalar(0.25) * (inv + inv.transpose()));
}

template <typename Scalar>
struct RsupAxisT {
  Index axis;
  Scalar dx2, dp2, cov;
  Scalar margin;  // dx2 * dp2 - cov^2 - hbar^2/4
  bool pass;
};

/// Per-axis Robertson-Schrodinger records. all_pass holds iff every margin
/// clears -tolerance; dropping the covariances recovers the textbook bound
/// dX dP >= hbar/2.
template <typename Scalar>
struct RsupReportT {
  std::vector<RsupAxisT<Scalar>> axes;
  bool all_pass;
  Scalar hbar;
};

using RsupAxis = RsupAxisT<double>;
using RsupReport = RsupReportT<double>;

template <typename Scalar>
RsupReportT<Scalar> rsup_check(const CovarianceMatrixT<Scalar>& Sigma, Scalar hbar) {
  if (!(hbar > 0)) throw InvalidInput("rsup_check: hbar must be positive");
  const Index n = Sigma.dof();
  const Scalar snorm = Sigma.sigma.template selfadjointView<Eigen::Lower>()
                           .eigenvalues()
                           .cwiseAbs()
                           .maxCoeff();
  RsupReportT<Scalar> report;
  report.hbar = hbar;
  report.all_pass = true;
  for (Index j = 0; j < n; ++j) {
    const Scalar dx2 = Sigma.dx2(j);
    const Scalar dp2 = Sigma.dp2(j);
    const Scalar cov = Sigma.cov_xp(j, j);
    const Scalar margin = dx2 * dp2 - cov * cov - hbar * hbar / 4;
    // tolerance consistent with the spectral slack allowed by the
    // positivity test on the matching 2x2 principal submatrix
    const Scalar tol = Scalar(1e-10) * snorm * (dx2 + dp2);
    const bool pass = margin >= -tol;
    report.axes.push_back({j, dx2, dp2, cov, margin, pass});
    report.all_pass = report.all_pass && pass;
  }
  return report;
}

/// Minimum eigenvalue of the Hermitian matrix Sigma + (i hbar / 2) J; the
/// state is quantum-admissible iff it is nonnegative (within a relative
/// tolerance).
template <typename Scalar>
std::pair<bool, Scalar> quantum_condition(const CovarianceMatrixT<Scalar>& Sigma,
                                          Scalar hbar) {
  if (!(hbar > 0)) throw InvalidInput("quantum_condition: hbar must be positive");
  const Index n = Sigma.dof();
  using C = std::complex<Scalar>;
  CMatX<Scalar> H = Sigma.sigma.template cast<C>();
  const MatX<Scalar> J = standard_symplectic_form<Scalar>(n);
  H += C(0, 1) * (hbar / 2) * J.template cast<C>();
  Eigen::SelfAdjointEigenSolver<CMatX<Scalar>> es(H, Eigen::EigenvaluesOnly);
  const Scalar min_eig = es.eigenvalues().minCoeff();
  const Scalar snorm = es.eigenvalues().cwiseAbs().maxCoeff();
  return {min_eig >= -Scalar(1e-10) * snorm, min_eig};
}

/// Capacity of the covariance ellipsoid { (1/2) z^T Sigma^{-1} z <= 1 },
/// which equals 2 pi nu_min with nu the symplectic spectrum of Sigma. The
/// blob threshold is half a Planck cell: capacity >= pi hbar (h = 2 pi hbar).
template <typename Scalar>
std::pair<Scalar, bool> blob_capacity(const CovarianceMatrixT<Scalar>& Sigma,
                                      Scalar hbar) {
  if (!(hbar > 0)) throw InvalidInput("blob_capacity: hbar must be positive");
  const VecX<Scalar> nu = symplectic_eigenvalues(Sigma.sigma);
  const Scalar capacity = 2 * Scalar(kPi) * nu(0);
  const bool is_blob = capacity >= Scalar(kPi) * hbar * (1 - Scalar(1e-10));
  return {capacity, is_blob};
}

/// Sigma -> S Sigma S^T. Translations do not move second moments, and the
/// symplectic spectrum is conserved, hence so are the positivity and blob
/// verdicts. The per-axis report stays pass for every quantum-admissible
/// covariance (sigpos => rsup in any frame); for non-quantum covariances
/// with n >= 2 the per-axis verdict is frame dependent.
template <typename Scalar>
CovarianceMatrixT<Scalar> evolve_covariance(const CovarianceMatrixT<Scalar>& Sigma,
                                            const AffineSymplecticMapT<Scalar>& map) {
  if (map.S.dim() != Sigma.sigma.rows())
    throw InvalidInput("evolve_covariance: dimension mismatch");
  const MatX<Scalar>& S = map.S.mat();
  return CovarianceMatrixT<Scalar>(
      (Scalar(0.5) * (S * Sigma.sigma * S.transpose() +
                      (S * Sigma.sigma * S.transpose()).transpose()))
          .eval());
}

/// Tally of the four (sigpos, rsup) verdict combinations over seeded random
/// covariance matrices (Wishart G^T G + jitter, rescaled so nu_min/hbar
/// sweeps [0.1, 3]). The direction sigpos => rsup is a theorem and callers
/// assert the sigpos_pass_rsup_fail cell is empty; the converse cell is
/// reported as data.
struct EquivalenceTally {
  Index both_pass = 0;
  Index sigpos_pass_rsup_fail = 0;
  Index rsup_pass_sigpos_fail = 0;
  Index both_fail = 0;
  Index samples() const {
    return both_pass + sigpos_pass_rsup_fail + rsup_pass_sigpos_fail + both_fail;
  }
};

template <typename Scalar>
CovarianceMatrixT<Scalar> random_covariance(Index n, Rng& rng, Scalar hbar,
                                            bool rescale = true) {
  MatX<Scalar> G(2 * n, 2 * n);
  for (Index i = 0; i < 2 * n; ++i)
    for (Index j = 0; j < 2 * n; ++j) G(i, j) = static_cast<Scalar>(rng.normal());
  MatX<Scalar> sigma =
      G.transpose() * G + Scalar(1e-6) * MatX<Scalar>::Identity(2 * n, 2 * n);
  if (rescale) {
    const Scalar nu_min = symplectic_eigenvalues(sigma)(0);
    const Scalar target = static_cast<Scalar>(rng.uniform(0.1, 3.0)) * hbar;
    sigma *= target / nu_min;
  }
  return CovarianceMatrixT<Scalar>(std::move(sigma));
}

template <typename Scalar = double>
EquivalenceTally equivalence_probe(Index n, Index samples, Scalar hbar,
                                   std::uint64_t seed) {
  if (samples < 1) throw InvalidInput("equivalence_probe: need at least one sample");
  Rng rng(seed);
  EquivalenceTally tally;
  for (Index s = 0; s < samples; ++s) {
    const auto Sigma = random_covariance<Scalar>(n, rng, hbar);
    const bool sigpos = quantum_condition(Sigma, hbar).first;
    const bool rsup = rsup_check(Sigma, hbar).all_pass;
    if (sigpos && rsup)
      ++tally.both_pass;
    else if (sigpos)
      ++tally.sigpos_pass_rsup_fail;
    else if (rsup)
      ++tally.rsup_pass_sigpos_fail;
    else
      ++tally.both_fail;
  }
  return tally;
}

/// Everything certify_cloud produces, intermediates included.
template <typename Scalar>
struct CertificationReportT {
  ConvexHull2DT<Scalar> hull;
  JohnResultT<Scalar> john;
  CovarianceMatrixT<Scalar> sigma;
  RsupReportT<Scalar> rsup;
  bool sigpos_pass;
  Scalar sigpos_min_eigenvalue;
  Scalar capacity;
  bool is_blob;
  Scalar hbar;
};

using CertificationReport = CertificationReportT<double>;

/// The full pipeline on a planar cloud: convex hull -> John ellipsoid ->
/// covariance matrix -> {RSUP, positivity, blob capacity}.
template <typename Scalar>
CertificationReportT<Scalar> certify_cloud(const PointCloud2DT<Scalar>& cloud,
                                           Scalar hbar) {
  CertificationReportT<Scalar> report{};
  report.hbar = hbar;
  report.hull = convex_hull_2d(cloud);
  report.john = john_ellipsoid(report.hull.polytope);
  report.sigma = covariance_from_john(report.john.ellipsoid);
  report.rsup = rsup_check(report.sigma, hbar);
  const auto [pass, min_eig] = quantum_condition(report.sigma, hbar);
  report.sigpos_pass = pass;
  report.sigpos_min_eigenvalue = min_eig;
  const auto [cap, blob] = blob_capacity(report.sigma, hbar);
  report.capacity = cap;
  report.is_blob = blob;
  return report;
}

}  // namespace sympl
