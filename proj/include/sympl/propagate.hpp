#pragma once

// Quantum propagation built purely from classical data: explicit free and
// oscillator kernels, exact Gaussian propagation under quadratic
// Hamiltonians, Heisenberg translations and nearby-orbit propagation for
// general Hamiltonians.

#include <cmath>
#include <complex>
#include <utility>

#include <unsupported/Eigen/FFT>

#include "sympl/flows.hpp"
#include "sympl/wavefunction.hpp"

namespace sympl {

/// Gaussian wavepacket with complex symmetric width matrix A (Im A positive
/// definite), centered at (x0, p0):
///
///   psi(x) = (det Im A)^(1/4) / (pi hbar)^(n/4)
///            * exp[ (i/2hbar) (x-x0)^T A (x-x0) + (i/hbar) p0.(x-x0) + i phi/hbar ]
///
/// The amplitude is pinned by normalization, so the state always has unit L2
/// norm; phi carries the accumulated action together with the branch-tracked
/// metaplectic phase (scaled by hbar).
template <typename Scalar>
struct GaussianWavepacketT {
  Index n = 1;
  VecX<Scalar> center_x;
  VecX<Scalar> center_p;
  CMatX<Scalar> width;
  Scalar phase = Scalar(0);
  Scalar hbar = Scalar(1);

  GaussianWavepacketT() = default;
  GaussianWavepacketT(VecX<Scalar> x0, VecX<Scalar> p0, CMatX<Scalar> A, Scalar phi,
                      Scalar hbar_)
      : n(x0.size()),
        center_x(std::move(x0)),
        center_p(std::move(p0)),
        width(std::move(A)),
        phase(phi),
        hbar(hbar_) {
    if (n < 1 || center_p.size() != n || width.rows() != n || width.cols() != n)
      throw InvalidDimension("GaussianWavepacket: inconsistent dimensions");
    if (!(hbar > 0)) throw InvalidInput("GaussianWavepacket: hbar must be positive");
    const MatX<Scalar> asym = (width - width.transpose()).cwiseAbs().real();
    if (asym.maxCoeff() > Scalar(1e-10) * std::max(width.cwiseAbs().maxCoeff(), Scalar(1)))
      throw InvalidInput("GaussianWavepacket: width matrix must be symmetric");
    width = (Scalar(0.5) * (width + width.transpose())).eval();
    Eigen::SelfAdjointEigenSolver<MatX<Scalar>> es(width.imag());
    if (!(es.eigenvalues().minCoeff() > Scalar(0)))
      throw InvalidInput("GaussianWavepacket: Im(width) must be positive-definite");
  }

  /// Coherent/ground-width state A = i * hbar / sigma^2 at (x0, p0).
  static GaussianWavepacketT coherent(const PhasePointT<Scalar>& z0, Scalar sigma,
                                      Scalar hbar) {
    const Index n = z0.dof();
    CMatX<Scalar> A = CMatX<Scalar>::Zero(n, n);
    A.diagonal().setConstant(std::complex<Scalar>(0, hbar / (sigma * sigma)));
    return GaussianWavepacketT(z0.x, z0.p, A, Scalar(0), hbar);
  }

  PhasePointT<Scalar> center() const { return PhasePointT<Scalar>(center_x, center_p); }

  /// Pointwise value.
  std::complex<Scalar> value(const VecX<Scalar>& x) const {
    const VecX<Scalar> d = x - center_x;
    const std::complex<Scalar> quad = d.template cast<std::complex<Scalar>>().dot(
        width * d.template cast<std::complex<Scalar>>());
    const Scalar det_im = width.imag().determinant();
    const Scalar amp = std::pow(det_im, Scalar(0.25)) *
                       std::pow(Scalar(kPi) * hbar, -Scalar(n) * Scalar(0.25));
    const std::complex<Scalar> i(0, 1);
    return amp * std::exp(i * quad / (2 * hbar) + i * center_p.dot(d) / hbar +
                          i * phase / hbar);
  }
};

using GaussianWavepacket = GaussianWavepacketT<double>;

/// Samples a one-dof wavepacket on a uniform grid.
template <typename Scalar>
GridWavefunctionT<Scalar> sample_wavepacket(const GaussianWavepacketT<Scalar>& wp,
                                            Scalar x0, Scalar dx, Index N) {
  if (wp.n != 1)
    throw InvalidDimension("sample_wavepacket: grid sampling is one-dof only");
  CVecX<Scalar> v(N);
  VecX<Scalar> x(1);
  for (Index j = 0; j < N; ++j) {
    x(0) = x0 + Scalar(j) * dx;
    v(j) = wp.value(x);
  }
  return GridWavefunctionT<Scalar>(x0, dx, std::move(v), wp.hbar);
}

/// Closed-form propagation kernel selector.
template <typename Scalar>
struct KernelSpecT {
  enum class Kind { Free, Oscillator };
  Kind kind = Kind::Free;
  Scalar m = Scalar(1);
  Scalar omega = Scalar(1);
  Scalar t = Scalar(0);
  Scalar hbar = Scalar(1);

  static KernelSpecT free(Scalar m, Scalar t, Scalar hbar) {
    return {Kind::Free, m, Scalar(1), t, hbar};
  }
  static KernelSpecT oscillator(Scalar t, Scalar hbar) {
    return {Kind::Oscillator, Scalar(1), Scalar(1), t, hbar};
  }
};

using KernelSpec = KernelSpecT<double>;

namespace detail {

/// Integer k if t is within tol of k*pi, otherwise no value.
template <typename Scalar>
std::pair<bool, long> near_multiple_of_pi(Scalar t) {
  const Scalar q = t / Scalar(kPi);
  const Scalar r = std::round(q);
  if (std::abs(q - r) <= Scalar(1e-12) * std::max(Scalar(1), std::abs(q)))
    return {true, static_cast<long>(r)};
  return {false, 0};
}

/// exp(-i k pi / 2) evaluated exactly.
template <typename Scalar>
std::complex<Scalar> quarter_turn_phase(long k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {Scalar(1), Scalar(0)};
    case 1: return {Scalar(0), Scalar(-1)};
    case 2: return {Scalar(-1), Scalar(0)};
    default: return {Scalar(0), Scalar(1)};
  }
}

}  // namespace detail

/// Free-particle kernel
///   K_t(x,y) = e^{-i pi sign(t)/4} sqrt(m/(2 pi hbar |t|))
///              exp[(i/hbar) m (x-y)^2 / (2t)],
/// the branch fixed by K_t -> delta as t -> 0+.
template <typename Scalar>
std::complex<Scalar> free_kernel_value(const KernelSpecT<Scalar>& spec, Scalar x,
                                       Scalar y) {
  if (spec.kind != KernelSpecT<Scalar>::Kind::Free)
    throw InvalidInput("free_kernel_value: spec is not a free kernel");
  if (spec.t == Scalar(0))
    throw SingularTime("free_kernel_value: t = 0 (caller substitutes the identity)");
  const Scalar sgn = spec.t > 0 ? Scalar(1) : Scalar(-1);
  const Scalar amp =
      std::sqrt(spec.m / (2 * Scalar(kPi) * spec.hbar * std::abs(spec.t)));
  const Scalar d = x - y;
  const Scalar ph = spec.m * d * d / (2 * spec.hbar * spec.t);
  const std::complex<Scalar> branch =
      std::polar(Scalar(1), -sgn * Scalar(kPi) / 4);
  return branch * amp * std::polar(Scalar(1), ph);
}

/// Harmonic-oscillator (m = omega = 1) Mehler kernel
///   K_t(x,y) = e^{-i pi/4} e^{-i pi floor(t/pi)/2} sqrt(1/(2 pi hbar |sin t|))
///              exp[(i/(2 hbar sin t)) ((x^2+y^2) cos t - 2 x y)],
/// singular at t = k pi where the exact limit is e^{-i k pi/2} times the
/// identity (k even) or the parity operator (k odd).
template <typename Scalar>
std::complex<Scalar> oscillator_kernel_value(const KernelSpecT<Scalar>& spec, Scalar x,
                                             Scalar y) {
  if (spec.kind != KernelSpecT<Scalar>::Kind::Oscillator)
    throw InvalidInput("oscillator_kernel_value: spec is not an oscillator kernel");
  if (spec.m != Scalar(1) || spec.omega != Scalar(1))
    throw InvalidInput("oscillator_kernel_value: kernel is pinned to m = omega = 1");
  if (detail::near_multiple_of_pi(spec.t).first)
    throw SingularTime("oscillator_kernel_value: t is a multiple of pi");
  const Scalar s = std::sin(spec.t), c = std::cos(spec.t);
  const Scalar amp = std::sqrt(1 / (2 * Scalar(kPi) * spec.hbar * std::abs(s)));
  const Scalar ph = ((x * x + y * y) * c - 2 * x * y) / (2 * spec.hbar * s);
  const std::complex<Scalar> branch =
      std::polar(Scalar(1), -Scalar(kPi) / 4 -
                                Scalar(kPi) * std::floor(spec.t / Scalar(kPi)) / 2);
  return branch * amp * std::polar(Scalar(1), ph);
}

template <typename Scalar>
std::complex<Scalar> kernel_value(const KernelSpecT<Scalar>& spec, Scalar x, Scalar y) {
  return spec.kind == KernelSpecT<Scalar>::Kind::Free
             ? free_kernel_value(spec, x, y)
             : oscillator_kernel_value(spec, x, y);
}

namespace detail {

template <typename Scalar>
void require_edge_decay_kernel(const GridWavefunctionT<Scalar>& psi) {
  const Scalar peak = psi.values.cwiseAbs().maxCoeff();
  const Scalar edge =
      std::max(std::abs(psi.values(0)), std::abs(psi.values(psi.size() - 1)));
  if (edge > Scalar(1e-12) * std::max(peak, Scalar(1)))
    throw InvalidInput("kernel_propagate: state does not decay below 1e-12 at the grid edges");
}

/// Largest |d(kernel phase)/dy| over output points x and the samples y where
/// psi0 is non-negligible. The grid must keep slope * dx below the caller's
/// threshold for the quadrature to resolve the oscillation.
template <typename Scalar>
Scalar kernel_phase_slope(const GridWavefunctionT<Scalar>& psi0,
                          const KernelSpecT<Scalar>& spec) {
  const Scalar peak = psi0.values.cwiseAbs().maxCoeff();
  Index lo = 0, hi = psi0.size() - 1;
  while (lo < hi && std::abs(psi0.values(lo)) <= Scalar(1e-12) * peak) ++lo;
  while (hi > lo && std::abs(psi0.values(hi)) <= Scalar(1e-12) * peak) --hi;
  const Scalar ylo = psi0.x(lo), yhi = psi0.x(hi);
  const Scalar xlo = psi0.x(0), xhi = psi0.x(psi0.size() - 1);
  const Scalar ymax = std::max(std::abs(ylo), std::abs(yhi));
  const Scalar xmax = std::max(std::abs(xlo), std::abs(xhi));
  if (spec.kind == KernelSpecT<Scalar>::Kind::Free) {
    const Scalar reach = std::max(std::abs(xhi - ylo), std::abs(yhi - xlo));
    return spec.m * reach / (spec.hbar * std::abs(spec.t));
  }
  const Scalar s = std::abs(std::sin(spec.t)), c = std::abs(std::cos(spec.t));
  return (ymax * c + xmax) / (spec.hbar * s);
}

}  // namespace detail

/// psi(x_j) = sum_k K(x_j, y_k) psi0(y_k) dx (trapezoid weights). The grid
/// must resolve the kernel phase over the effective support of psi0: the
/// local phase increment between adjacent samples has to stay below
/// phase_tol (default pi/2, the Nyquist-safe bound), otherwise
/// UnderResolvedGrid reports the minimum usable grid size. Singular times
/// are mapped to their exact limits (identity, or parity for odd multiples
/// of pi in the oscillator case).
template <typename Scalar>
GridWavefunctionT<Scalar> kernel_propagate(const GridWavefunctionT<Scalar>& psi0,
                                           const KernelSpecT<Scalar>& spec,
                                           Scalar phase_tol = Scalar(kPi) / 2) {
  using Kind = typename KernelSpecT<Scalar>::Kind;
  if (spec.hbar != psi0.hbar)
    throw InvalidInput("kernel_propagate: spec.hbar disagrees with the state");

  if (spec.kind == Kind::Free && spec.t == Scalar(0)) return psi0;
  if (spec.kind == Kind::Oscillator) {
    const auto [singular, k] = detail::near_multiple_of_pi(spec.t);
    if (singular) {
      if (k == 0) return psi0;
      const std::complex<Scalar> ph = detail::quarter_turn_phase<Scalar>(k);
      GridWavefunctionT<Scalar> out = psi0;
      if (k % 2 == 0) {
        out.values *= ph;
        return out;
      }
      // parity: x_j -> -x_j is the periodic index reflection, which needs a
      // grid symmetric about the origin
      const Index N = psi0.size();
      if (std::abs(psi0.x0 + Scalar(N / 2) * psi0.dx) > Scalar(1e-9) * psi0.dx * N)
        throw GridMisalignment(
            "kernel_propagate: parity limit needs a grid symmetric about x = 0");
      for (Index j = 0; j < N; ++j)
        out.values(j) = ph * psi0.values((N - j) % N);
      return out;
    }
  }

  detail::require_edge_decay_kernel(psi0);
  const Scalar slope = detail::kernel_phase_slope(psi0, spec);
  if (slope * psi0.dx > phase_tol) {
    const Index suggested =
        static_cast<Index>(std::ceil(slope * psi0.length() / phase_tol)) + 1;
    throw UnderResolvedGrid(
        "kernel_propagate: grid spacing cannot resolve the kernel phase", suggested);
  }

  const Index N = psi0.size();
  CVecX<Scalar> out(N);
  CVecX<Scalar> weighted = psi0.values * psi0.dx;
  weighted(0) *= Scalar(0.5);
  weighted(N - 1) *= Scalar(0.5);
  for (Index j = 0; j < N; ++j) {
    const Scalar xj = psi0.x(j);
    std::complex<Scalar> acc(0, 0);
    for (Index k = 0; k < N; ++k)
      acc += kernel_value(spec, xj, psi0.x(k)) * weighted(k);
    out(j) = acc;
  }
  return GridWavefunctionT<Scalar>(psi0.x0, psi0.dx, std::move(out), psi0.hbar);
}

/// Exact action integral int_0^t (p.xdot - H) ds along the flow of a
/// quadratic Hamiltonian, in closed form. For H = z^T M z / 2 + u^T z + c the
/// integrand reduces to d(p.x)/2 - u^T z / 2 - c, and int u^T z ds comes from
/// one augmented matrix exponential, so the result is exact for singular JM
/// as well.
template <typename Scalar>
Scalar quadratic_action(const QuadraticHamiltonianT<Scalar>& H, const VecX<Scalar>& z0,
                        const VecX<Scalar>& zt, Scalar t) {
  const Index dim = H.M.rows();
  const Index n = dim / 2;
  Scalar W = Scalar(0);
  if (!H.u.isZero(Scalar(0))) {
    const MatX<Scalar> J = standard_symplectic_form<Scalar>(n);
    MatX<Scalar> aug = MatX<Scalar>::Zero(dim + 2, dim + 2);
    aug.topLeftCorner(dim, dim) = t * J * H.M;
    aug.block(0, dim, dim, 1) = t * J * H.u;
    aug.block(dim + 1, 0, 1, dim) = t * H.u.transpose();
    const MatX<Scalar> E = matrix_exponential(aug);
    VecX<Scalar> y0 = VecX<Scalar>::Zero(dim + 2);
    y0.head(dim) = z0;
    y0(dim) = Scalar(1);
    W = (E * y0)(dim + 1);
  }
  const Scalar boundary =
      Scalar(0.5) * (zt.tail(n).dot(zt.head(n)) - z0.tail(n).dot(z0.head(n)));
  return boundary - Scalar(0.5) * W - H.c * t;
}

/// Metaplectic propagation of a Gaussian wavepacket under a quadratic
/// Hamiltonian for time t. With the flow S_t = (A B; C D), d_t:
///   center_t = S_t center + d_t,
///   A_t      = (C + D A_0)(A + B A_0)^{-1}   (Siegel half-space action),
///   phase_t  = phase + action - (hbar/2) * arg det(A + B A_0),
/// where the det branch is tracked continuously from t = 0 so caustic
/// crossings pick up the right quarter-turn phases.
template <typename Scalar>
GaussianWavepacketT<Scalar> gaussian_propagate(const GaussianWavepacketT<Scalar>& wp,
                                               const QuadraticHamiltonianT<Scalar>& H,
                                               Scalar t) {
  using C = std::complex<Scalar>;
  const Index n = wp.n;
  if (H.dof() != n)
    throw InvalidDimension("gaussian_propagate: Hamiltonian dof mismatch");
  if (t == Scalar(0)) return wp;

  const Index dim = 2 * n;
  const MatX<Scalar> J = standard_symplectic_form<Scalar>(n);
  const CMatX<Scalar> A0 = wp.width;

  // branch tracking: walk the flow in substeps small enough that the
  // automorphic factor det(A_s + B_s A0) never jumps by more than pi/2
  const Scalar rate = (J * H.M).norm() + Scalar(1);
  Index nsub = std::max<Index>(1, static_cast<Index>(std::ceil(std::abs(t) * rate)));
  constexpr int kMaxRefine = 8;

  MatX<Scalar> S_final;
  VecX<Scalar> d_final;
  Scalar theta = Scalar(0);
  bool resolved = false;
  for (int attempt = 0; attempt < kMaxRefine && !resolved; ++attempt, nsub *= 2) {
    const auto step = quadratic_flow(H, t / Scalar(nsub));
    MatX<Scalar> S = MatX<Scalar>::Identity(dim, dim);
    VecX<Scalar> d = VecX<Scalar>::Zero(dim);
    theta = Scalar(0);
    C w_prev(1, 0);
    resolved = true;
    for (Index k = 0; k < nsub; ++k) {
      d = step.S.mat() * d + step.d;
      S = (step.S.mat() * S).eval();
      const CMatX<Scalar> G = S.topLeftCorner(n, n).template cast<C>() +
                              S.topRightCorner(n, n).template cast<C>() * A0;
      const C w = G.determinant();
      if (w == C(0, 0)) {
        resolved = false;
        break;
      }
      const Scalar dtheta = std::arg(w / w_prev);
      if (std::abs(dtheta) > Scalar(kPi) / 2) {
        resolved = false;
        break;
      }
      theta += dtheta;
      w_prev = w;
    }
    if (resolved) {
      S_final = std::move(S);
      d_final = std::move(d);
    }
  }
  if (!resolved)
    throw CausticCrossing("gaussian_propagate: could not track the metaplectic branch");

  const CMatX<Scalar> G = S_final.topLeftCorner(n, n).template cast<C>() +
                          S_final.topRightCorner(n, n).template cast<C>() * A0;
  Eigen::JacobiSVD<CMatX<Scalar>> svd(G);
  const Scalar smin = svd.singularValues().minCoeff();
  const Scalar smax = svd.singularValues().maxCoeff();
  if (!(smin > 0) || smax / smin > Scalar(1e12))
    throw CausticCrossing("gaussian_propagate: width update is numerically singular");

  CMatX<Scalar> At = (S_final.bottomLeftCorner(n, n).template cast<C>() +
                      S_final.bottomRightCorner(n, n).template cast<C>() * A0) *
                     G.inverse();
  At = (Scalar(0.5) * (At + At.transpose())).eval();

  const VecX<Scalar> z0 = wp.center().joined();
  const VecX<Scalar> zt = S_final * z0 + d_final;
  const Scalar action = quadratic_action(H, z0, zt, t);
  const Scalar phase = wp.phase + action - Scalar(0.5) * wp.hbar * theta;

  return GaussianWavepacketT<Scalar>(zt.head(n), zt.tail(n), At, phase, wp.hbar);
}

/// Heisenberg translation T(x0, p0) psi(x) = exp[(i/eps)(p0.x - p0.x0/2)]
/// psi(x - x0) on a wavepacket.
template <typename Scalar>
GaussianWavepacketT<Scalar> heisenberg_translate(const GaussianWavepacketT<Scalar>& wp,
                                                 const VecX<Scalar>& x0,
                                                 const VecX<Scalar>& p0, Scalar eps) {
  if (x0.size() != wp.n || p0.size() != wp.n)
    throw InvalidDimension("heisenberg_translate: shift dimension mismatch");
  if (!(eps > 0)) throw InvalidInput("heisenberg_translate: eps must be positive");
  // fold the eps-scaled phase into the wavepacket's own hbar representation
  const VecX<Scalar> q = (wp.hbar / eps) * p0;
  GaussianWavepacketT<Scalar> out = wp;
  out.center_x += x0;
  out.center_p += q;
  out.phase += q.dot(wp.center_x) + Scalar(0.5) * q.dot(x0);
  return out;
}

/// Grid overload; the shift must be an integer number of grid cells (the
/// grid is periodic, so the moduli are permuted and the norm is conserved).
template <typename Scalar>
GridWavefunctionT<Scalar> heisenberg_translate(const GridWavefunctionT<Scalar>& psi,
                                               Scalar x0, Scalar p0, Scalar eps) {
  if (!(eps > 0)) throw InvalidInput("heisenberg_translate: eps must be positive");
  const Index N = psi.size();
  const Scalar cells = x0 / psi.dx;
  const Scalar rounded = std::round(cells);
  if (std::abs(cells - rounded) > Scalar(1e-9) * std::max(Scalar(1), std::abs(cells)))
    throw GridMisalignment(
        "heisenberg_translate: x0 must be an integer multiple of the grid spacing");
  const long shift = static_cast<long>(rounded);
  CVecX<Scalar> out(N);
  for (Index j = 0; j < N; ++j) {
    const Index src = ((j - shift) % N + N) % N;
    const Scalar ph = (p0 * psi.x(j) - Scalar(0.5) * p0 * x0) / eps;
    out(j) = std::polar(Scalar(1), ph) * psi.values(src);
  }
  return GridWavefunctionT<Scalar>(psi.x0, psi.dx, std::move(out), psi.hbar);
}

/// Nearby-orbit propagation: at every step the Hamiltonian is re-expanded to
/// second order at the current wavepacket center and the packet is advanced
/// with the exact metaplectic step of that local quadratic model.
template <typename Scalar>
GaussianWavepacketT<Scalar> nearby_orbit_propagate(const GeneralHamiltonianT<Scalar>& H,
                                                   const GaussianWavepacketT<Scalar>& wp0,
                                                   Scalar T, Scalar dt) {
  if (H.dof() != wp0.n)
    throw InvalidDimension("nearby_orbit_propagate: Hamiltonian dof mismatch");
  if (T == Scalar(0)) return wp0;
  const Index nsteps = detail::step_count(T, dt);
  const Scalar h = T / Scalar(nsteps);
  GaussianWavepacketT<Scalar> wp = wp0;
  Scalar t = Scalar(0);
  for (Index k = 0; k < nsteps; ++k) {
    const auto Hq = taylor_quadratic(H, wp.center(), t);
    wp = gaussian_propagate(wp, Hq, h);
    t += h;
    if (!wp.center_x.allFinite() || !wp.center_p.allFinite())
      throw BlowUp("nearby_orbit_propagate: center became non-finite",
                   static_cast<double>(t - h));
  }
  return wp;
}

/// First and second moments of a grid state: <x>, <p>, Var x, Var p. The
/// momentum side uses the spectral derivative.
template <typename Scalar>
struct GridMomentsT {
  Scalar mean_x, mean_p, var_x, var_p;
};

using GridMoments = GridMomentsT<double>;

template <typename Scalar>
GridMomentsT<Scalar> ehrenfest_means(const GridWavefunctionT<Scalar>& psi) {
  const Scalar n2 = psi.norm_sq();
  if (!(n2 > Scalar(1e-12)))
    throw DegenerateState("ehrenfest_means: state norm is too small");
  const Index N = psi.size();

  Scalar mx = Scalar(0), mx2 = Scalar(0);
  for (Index j = 0; j < N; ++j) {
    const Scalar w = std::norm(psi.values(j)) * psi.dx;
    mx += psi.x(j) * w;
    mx2 += psi.x(j) * psi.x(j) * w;
  }
  mx /= n2;
  mx2 /= n2;

  Eigen::FFT<Scalar> fft;
  CVecX<Scalar> freq(N), dpsi(N);
  CVecX<Scalar> vals = psi.values;
  fft.fwd(freq, vals);
  const VecX<Scalar> k = detail::fft_wavenumbers(N, psi.length());
  for (Index j = 0; j < N; ++j) freq(j) *= std::complex<Scalar>(0, k(j));
  fft.inv(dpsi, freq);

  std::complex<Scalar> corr(0, 0);
  Scalar mp2 = Scalar(0);
  for (Index j = 0; j < N; ++j) {
    corr += std::conj(psi.values(j)) * dpsi(j) * psi.dx;
    mp2 += std::norm(dpsi(j)) * psi.dx;
  }
  const Scalar mp = psi.hbar * corr.imag() / n2;
  mp2 = psi.hbar * psi.hbar * mp2 / n2;

  return {mx, mp, mx2 - mx * mx, mp2 - mp * mp};
}

/// Covariance matrix of a Gaussian wavepacket in the (x, p) block ordering:
/// Sigma_xx = (hbar/2) (Im A)^{-1}, Sigma_xp = Sigma_xx Re A,
/// Sigma_pp = (hbar/2)(Im A + Re A (Im A)^{-1} Re A).
template <typename Scalar>
MatX<Scalar> wavepacket_covariance(const GaussianWavepacketT<Scalar>& wp) {
  const Index n = wp.n;
  const MatX<Scalar> re = wp.width.real();
  const MatX<Scalar> im = wp.width.imag();
  const MatX<Scalar> im_inv = im.llt().solve(MatX<Scalar>::Identity(n, n));
  MatX<Scalar> sigma(2 * n, 2 * n);
  const Scalar h2 = wp.hbar / 2;
  sigma.topLeftCorner(n, n) = h2 * im_inv;
  sigma.topRightCorner(n, n) = h2 * im_inv * re;
  sigma.bottomLeftCorner(n, n) = sigma.topRightCorner(n, n).transpose();
  sigma.bottomRightCorner(n, n) = h2 * (im + re * im_inv * re);
  return sigma;
}

}  // namespace sympl
