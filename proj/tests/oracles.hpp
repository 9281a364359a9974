#pragma once

// Independent analytic oracles used by the propagation tests. Everything
// here is a direct closed-form evaluation; none of it routes through the
// propagators under test.

#include <complex>

#include <sympl/wavefunction.hpp>

namespace oracles {

using sympl::Complex;
using sympl::ComplexVector;
using sympl::GridWavefunction;
using sympl::Index;
using sympl::kPi;

/// Exact free evolution (H = p^2/2m) of the normalized Gaussian
/// psi0 = (pi s^2)^(-1/4) exp(-(x-xc)^2/(2 s^2) + i pc (x-xc)/hbar):
///
///   zeta  = 1 + i hbar t / (m s^2)
///   psi_t = (pi s^2)^(-1/4) zeta^(-1/2)
///           * exp( -(x-xt)^2/(2 s^2 zeta) + (i/hbar)(pc (x-xt) + pc^2 t/(2m)) )
/// with xt = xc + pc t / m. Absolute phase included.
inline GridWavefunction free_gaussian(double x0, double dx, Index N, double hbar,
                                      double m, double sigma, double xc, double pc,
                                      double t) {
  const Complex i(0.0, 1.0);
  const Complex zeta = 1.0 + i * hbar * t / (m * sigma * sigma);
  const double xt = xc + pc * t / m;
  const Complex pref =
      std::pow(kPi * sigma * sigma, -0.25) / std::sqrt(zeta);
  ComplexVector v(N);
  for (Index j = 0; j < N; ++j) {
    const double x = x0 + j * dx;
    const double d = x - xt;
    v(j) = pref * std::exp(-d * d / (2.0 * sigma * sigma * zeta) +
                           i * (pc * d + pc * pc * t / (2.0 * m)) / hbar);
  }
  return GridWavefunction(x0, dx, std::move(v), hbar);
}

/// Exact evolution of a ground-width coherent state of H = (p^2 + x^2)/2:
/// the center (xc, pc) rotates, the width stays stationary, and the total
/// phase is the classical action (p_t x_t - p_0 x_0)/2 minus hbar t/2.
inline GridWavefunction oscillator_coherent(double x0, double dx, Index N, double hbar,
                                            double xc, double pc, double t) {
  const Complex i(0.0, 1.0);
  const double xt = xc * std::cos(t) + pc * std::sin(t);
  const double pt = pc * std::cos(t) - xc * std::sin(t);
  const double action = 0.5 * (pt * xt - pc * xc);
  const double pref = std::pow(kPi * hbar, -0.25);
  ComplexVector v(N);
  for (Index j = 0; j < N; ++j) {
    const double x = x0 + j * dx;
    const double d = x - xt;
    v(j) = pref * std::exp(-d * d / (2.0 * hbar)) *
           std::exp(i * (pt * d + action - hbar * t / 2.0) / hbar);
  }
  return GridWavefunction(x0, dx, std::move(v), hbar);
}

/// Ground state of the unit oscillator (xc = pc = 0 at t = 0).
inline GridWavefunction oscillator_ground(double x0, double dx, Index N, double hbar) {
  return oscillator_coherent(x0, dx, N, hbar, 0.0, 0.0, 0.0);
}

}  // namespace oracles
