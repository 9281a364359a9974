#pragma once

// Wavefunctions sampled on a uniform grid, plus the L2 metric utilities the
// propagators and the reference solver are compared with.

#include <cmath>
#include <complex>
#include <utility>

#include "sympl/types.hpp"

namespace sympl {

/// psi sampled on the uniform grid x_j = x0 + j dx, j = 0..N-1. The grid is
/// treated as periodic with length L = N dx by the spectral operations.
template <typename Scalar>
struct GridWavefunctionT {
  Scalar x0 = Scalar(0);
  Scalar dx = Scalar(1);
  CVecX<Scalar> values;
  Scalar hbar = Scalar(1);

  GridWavefunctionT() = default;
  GridWavefunctionT(Scalar x0_, Scalar dx_, CVecX<Scalar> values_, Scalar hbar_)
      : x0(x0_), dx(dx_), values(std::move(values_)), hbar(hbar_) {
    if (values.size() < 8) throw InvalidInput("GridWavefunction: need at least 8 samples");
    if (!(dx > 0)) throw InvalidInput("GridWavefunction: dx must be positive");
    if (!(hbar > 0)) throw InvalidInput("GridWavefunction: hbar must be positive");
    if (!values.allFinite()) throw InvalidInput("GridWavefunction: non-finite samples");
  }

  Index size() const { return values.size(); }
  Scalar x(Index j) const { return x0 + Scalar(j) * dx; }
  Scalar length() const { return Scalar(size()) * dx; }

  /// norm^2 = sum |psi_k|^2 dx.
  Scalar norm_sq() const { return values.squaredNorm() * dx; }

  GridWavefunctionT& normalize() {
    const Scalar n2 = norm_sq();
    if (!(n2 > 0)) throw DegenerateState("GridWavefunction: cannot normalize zero state");
    values /= std::sqrt(n2);
    return *this;
  }

  bool same_grid(const GridWavefunctionT& other, Scalar tol = Scalar(1e-12)) const {
    return size() == other.size() && std::abs(x0 - other.x0) <= tol &&
           std::abs(dx - other.dx) <= tol && std::abs(hbar - other.hbar) <= tol;
  }
};

using GridWavefunction = GridWavefunctionT<double>;

namespace detail {

template <typename Scalar>
void require_same_grid(const GridWavefunctionT<Scalar>& a,
                       const GridWavefunctionT<Scalar>& b) {
  if (!a.same_grid(b))
    throw InvalidInput("wavefunction metric: states live on different grids");
}

/// Standard FFT frequency layout: k_j = 2 pi j / L for j < N/2,
/// 2 pi (j - N) / L otherwise.
template <typename Scalar>
VecX<Scalar> fft_wavenumbers(Index N, Scalar L) {
  VecX<Scalar> k(N);
  const Scalar dk = Scalar(2) * Scalar(kPi) / L;
  for (Index j = 0; j < N; ++j)
    k(j) = dk * Scalar(j < N / 2 ? j : j - N);
  return k;
}

}  // namespace detail

/// <a, b> = sum conj(a_k) b_k dx.
template <typename Scalar>
std::complex<Scalar> overlap(const GridWavefunctionT<Scalar>& a,
                             const GridWavefunctionT<Scalar>& b) {
  detail::require_same_grid(a, b);
  return a.values.dot(b.values) * a.dx;
}

/// sqrt(sum |a_k - b_k|^2 dx).
template <typename Scalar>
Scalar l2_distance(const GridWavefunctionT<Scalar>& a, const GridWavefunctionT<Scalar>& b) {
  detail::require_same_grid(a, b);
  return std::sqrt((a.values - b.values).squaredNorm() * a.dx);
}

/// min over a global phase theta of || a - e^{i theta} b ||; the minimizer is
/// theta = -arg<a, b>.
template <typename Scalar>
Scalar phase_aligned_l2(const GridWavefunctionT<Scalar>& a,
                        const GridWavefunctionT<Scalar>& b) {
  detail::require_same_grid(a, b);
  const Scalar q = a.norm_sq() + b.norm_sq() - 2 * std::abs(overlap(a, b));
  return std::sqrt(std::max(q, Scalar(0)));
}

/// Global phase theta such that a ~ e^{i theta} b in the aligned-distance
/// sense.
template <typename Scalar>
Scalar relative_phase(const GridWavefunctionT<Scalar>& a, const GridWavefunctionT<Scalar>& b) {
  return -std::arg(overlap(a, b));
}

/// Normalized Gaussian (pi sigma^2)^(-1/4) exp(-(x-xc)^2/(2 sigma^2)
/// + i pc (x-xc) / hbar) sampled on the grid.
template <typename Scalar>
GridWavefunctionT<Scalar> grid_gaussian(Scalar x0, Scalar dx, Index N, Scalar hbar,
                                        Scalar xc, Scalar pc, Scalar sigma) {
  if (!(sigma > 0)) throw InvalidInput("grid_gaussian: sigma must be positive");
  CVecX<Scalar> v(N);
  const Scalar amp = std::pow(Scalar(kPi) * sigma * sigma, Scalar(-0.25));
  for (Index j = 0; j < N; ++j) {
    const Scalar y = x0 + Scalar(j) * dx - xc;
    v(j) = amp * std::exp(std::complex<Scalar>(-y * y / (2 * sigma * sigma), pc * y / hbar));
  }
  return GridWavefunctionT<Scalar>(x0, dx, std::move(v), hbar);
}

}  // namespace sympl
