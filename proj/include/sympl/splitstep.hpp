#pragma once

// Independent split-step (Strang) spectral Schrodinger solver. This is the
// oracle every propagation claim is checked against; it shares no algorithmic
// path with the metaplectic propagator.

#include <cmath>
#include <utility>

#include <unsupported/Eigen/FFT>

#include "sympl/wavefunction.hpp"

namespace sympl {

/// Potential V(x) evaluated on the grid.
template <typename Scalar>
struct PotentialSpecT {
  enum class Kind { Zero, Harmonic, Quartic, Pendulum, Tabulated };

  Kind kind = Kind::Zero;
  Scalar m = Scalar(1);      // harmonic
  Scalar omega = Scalar(1);  // harmonic
  Scalar g = Scalar(1);      // quartic
  Scalar k = Scalar(1);      // pendulum
  VecX<Scalar> samples;      // tabulated

  static PotentialSpecT zero() { return {}; }
  static PotentialSpecT harmonic(Scalar m, Scalar omega) {
    PotentialSpecT v;
    v.kind = Kind::Harmonic;
    v.m = m;
    v.omega = omega;
    return v;
  }
  static PotentialSpecT quartic(Scalar g) {
    PotentialSpecT v;
    v.kind = Kind::Quartic;
    v.g = g;
    return v;
  }
  static PotentialSpecT pendulum(Scalar k) {
    PotentialSpecT v;
    v.kind = Kind::Pendulum;
    v.k = k;
    return v;
  }
  static PotentialSpecT tabulated(VecX<Scalar> samples) {
    PotentialSpecT v;
    v.kind = Kind::Tabulated;
    v.samples = std::move(samples);
    return v;
  }

  VecX<Scalar> evaluate(const GridWavefunctionT<Scalar>& grid) const {
    const Index N = grid.size();
    VecX<Scalar> V(N);
    switch (kind) {
      case Kind::Zero:
        V.setZero();
        break;
      case Kind::Harmonic:
        for (Index j = 0; j < N; ++j) {
          const Scalar x = grid.x(j);
          V(j) = Scalar(0.5) * m * omega * omega * x * x;
        }
        break;
      case Kind::Quartic:
        for (Index j = 0; j < N; ++j) {
          const Scalar x2 = grid.x(j) * grid.x(j);
          V(j) = g * x2 * x2;
        }
        break;
      case Kind::Pendulum:
        for (Index j = 0; j < N; ++j) V(j) = -k * std::cos(grid.x(j));
        break;
      case Kind::Tabulated:
        if (samples.size() != N)
          throw InvalidInput("PotentialSpec: tabulated samples must match the grid");
        V = samples;
        break;
    }
    return V;
  }
};

using PotentialSpec = PotentialSpecT<double>;

namespace detail {

template <typename Scalar>
void require_edge_decay(const GridWavefunctionT<Scalar>& psi, const char* who) {
  const Scalar peak = psi.values.cwiseAbs().maxCoeff();
  const Scalar edge =
      std::max(std::abs(psi.values(0)), std::abs(psi.values(psi.size() - 1)));
  if (edge > Scalar(1e-12) * std::max(peak, Scalar(1)))
    throw InvalidInput(std::string(who) + ": state does not decay below 1e-12 at the grid edges");
}

}  // namespace detail

/// Strang-split evolution of i hbar psi_t = -hbar^2/(2m) psi_xx + V psi:
/// half kick in position space, full spectral drift, half kick. The grid
/// length must be a power of two. steps = 0 returns the input bit-exactly.
template <typename Scalar>
GridWavefunctionT<Scalar> split_step_evolve(const GridWavefunctionT<Scalar>& psi0,
                                            const PotentialSpecT<Scalar>& V, Scalar m,
                                            Scalar dt, Index steps) {
  const Index N = psi0.size();
  if ((N & (N - 1)) != 0)
    throw InvalidGrid("split_step_evolve: grid length must be a power of two");
  if (!(m > 0)) throw InvalidInput("split_step_evolve: mass must be positive");
  if (!(dt > 0)) throw InvalidInput("split_step_evolve: dt must be positive");
  if (steps == 0) return psi0;
  detail::require_edge_decay(psi0, "split_step_evolve");

  const Scalar hbar = psi0.hbar;
  const VecX<Scalar> Vx = V.evaluate(psi0);
  const VecX<Scalar> k = detail::fft_wavenumbers(N, psi0.length());

  CVecX<Scalar> half_kick(N), drift(N);
  const std::complex<Scalar> mi(0, -1);
  for (Index j = 0; j < N; ++j) {
    half_kick(j) = std::exp(mi * (Vx(j) * dt / (2 * hbar)));
    drift(j) = std::exp(mi * (hbar * k(j) * k(j) * dt / (2 * m)));
  }

  Eigen::FFT<Scalar> fft;
  CVecX<Scalar> psi = psi0.values;
  CVecX<Scalar> freq(N);
  for (Index s = 0; s < steps; ++s) {
    psi.array() *= half_kick.array();
    fft.fwd(freq, psi);
    freq.array() *= drift.array();
    fft.inv(psi, freq);
    psi.array() *= half_kick.array();
  }
  return GridWavefunctionT<Scalar>(psi0.x0, psi0.dx, std::move(psi), hbar);
}

}  // namespace sympl
