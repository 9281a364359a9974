#pragma once

// Classical dynamics: exact affine flows of (in)homogeneous quadratic
// Hamiltonians, RK4 trajectories and variational (linearized) flows for
// general Hamiltonians, and second-order Taylor re-expansion around a
// phase-space point.

#include <cmath>
#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "sympl/core.hpp"

namespace sympl {

/// H(z) = 1/2 z^T M z + u^T z + c with M symmetric. M is symmetrized on
/// construction so the stored form is exactly symmetric.
template <typename Scalar>
struct QuadraticHamiltonianT {
  MatX<Scalar> M;
  VecX<Scalar> u;
  Scalar c = Scalar(0);

  QuadraticHamiltonianT() = default;
  QuadraticHamiltonianT(MatX<Scalar> M_, VecX<Scalar> u_, Scalar c_ = Scalar(0))
      : M(std::move(M_)), u(std::move(u_)), c(c_) {
    if (M.rows() != M.cols() || M.rows() % 2 != 0 || M.rows() < 2)
      throw InvalidDimension("QuadraticHamiltonian: M must be 2n x 2n");
    if (u.size() != M.rows())
      throw InvalidDimension("QuadraticHamiltonian: u must have length 2n");
    M = (Scalar(0.5) * (M + M.transpose())).eval();
  }

  static QuadraticHamiltonianT homogeneous(MatX<Scalar> M_) {
    VecX<Scalar> u0 = VecX<Scalar>::Zero(M_.rows());
    return QuadraticHamiltonianT(std::move(M_), std::move(u0));
  }

  Index dof() const { return M.rows() / 2; }
  Scalar value(const VecX<Scalar>& z) const {
    return Scalar(0.5) * z.dot(M * z) + u.dot(z) + c;
  }
  VecX<Scalar> gradient(const VecX<Scalar>& z) const { return M * z + u; }
};

using QuadraticHamiltonian = QuadraticHamiltonianT<double>;

/// Evaluator interface for a general (possibly time-dependent) Hamiltonian:
/// value, gradient and Hessian at a phase-space point.
template <typename Scalar>
class GeneralHamiltonianT {
 public:
  virtual ~GeneralHamiltonianT() = default;
  virtual Index dof() const = 0;
  virtual bool time_dependent() const { return false; }
  virtual Scalar value(const VecX<Scalar>& z, Scalar t) const = 0;
  virtual VecX<Scalar> gradient(const VecX<Scalar>& z, Scalar t) const = 0;
  virtual MatX<Scalar> hessian(const VecX<Scalar>& z, Scalar t) const = 0;

  /// Hamiltonian vector field J grad H.
  VecX<Scalar> field(const VecX<Scalar>& z, Scalar t) const {
    const Index n = dof();
    const VecX<Scalar> g = gradient(z, t);
    VecX<Scalar> f(2 * n);
    f.head(n) = g.tail(n);
    f.tail(n) = -g.head(n);
    return f;
  }
};

using GeneralHamiltonian = GeneralHamiltonianT<double>;

/// A quadratic Hamiltonian viewed through the general-evaluator interface.
template <typename Scalar>
class QuadraticAsGeneralT final : public GeneralHamiltonianT<Scalar> {
 public:
  explicit QuadraticAsGeneralT(QuadraticHamiltonianT<Scalar> h) : h_(std::move(h)) {}
  Index dof() const override { return h_.dof(); }
  Scalar value(const VecX<Scalar>& z, Scalar) const override { return h_.value(z); }
  VecX<Scalar> gradient(const VecX<Scalar>& z, Scalar) const override {
    return h_.gradient(z);
  }
  MatX<Scalar> hessian(const VecX<Scalar>&, Scalar) const override { return h_.M; }
  const QuadraticHamiltonianT<Scalar>& quadratic() const { return h_; }

 private:
  QuadraticHamiltonianT<Scalar> h_;
};

using QuadraticAsGeneral = QuadraticAsGeneralT<double>;

/// Adapter deriving gradient and Hessian from a value-only callable by
/// central differences with step cbrt(eps) * scale.
template <typename Scalar>
class FiniteDifferenceHamiltonianT final : public GeneralHamiltonianT<Scalar> {
 public:
  using Fn = std::function<Scalar(const VecX<Scalar>&, Scalar)>;
  FiniteDifferenceHamiltonianT(Fn fn, Index n, Scalar scale = Scalar(1),
                               bool time_dep = false)
      : fn_(std::move(fn)),
        n_(n),
        step_(std::cbrt(std::numeric_limits<Scalar>::epsilon()) * scale),
        time_dep_(time_dep) {
    if (n_ < 1) throw InvalidDimension("FiniteDifferenceHamiltonian: n must be >= 1");
  }

  Index dof() const override { return n_; }
  bool time_dependent() const override { return time_dep_; }
  Scalar value(const VecX<Scalar>& z, Scalar t) const override { return fn_(z, t); }

  VecX<Scalar> gradient(const VecX<Scalar>& z, Scalar t) const override {
    VecX<Scalar> g(2 * n_);
    VecX<Scalar> zp = z, zm = z;
    for (Index j = 0; j < 2 * n_; ++j) {
      zp(j) += step_;
      zm(j) -= step_;
      g(j) = (fn_(zp, t) - fn_(zm, t)) / (2 * step_);
      zp(j) = z(j);
      zm(j) = z(j);
    }
    return g;
  }

  MatX<Scalar> hessian(const VecX<Scalar>& z, Scalar t) const override {
    const Index d = 2 * n_;
    MatX<Scalar> H(d, d);
    const Scalar f0 = fn_(z, t);
    VecX<Scalar> w = z;
    for (Index j = 0; j < d; ++j) {
      w(j) = z(j) + step_;
      const Scalar fp = fn_(w, t);
      w(j) = z(j) - step_;
      const Scalar fm = fn_(w, t);
      w(j) = z(j);
      H(j, j) = (fp - 2 * f0 + fm) / (step_ * step_);
    }
    for (Index j = 0; j < d; ++j) {
      for (Index k = j + 1; k < d; ++k) {
        w(j) = z(j) + step_; w(k) = z(k) + step_;
        const Scalar fpp = fn_(w, t);
        w(k) = z(k) - step_;
        const Scalar fpm = fn_(w, t);
        w(j) = z(j) - step_; w(k) = z(k) + step_;
        const Scalar fmp = fn_(w, t);
        w(k) = z(k) - step_;
        const Scalar fmm = fn_(w, t);
        w(j) = z(j); w(k) = z(k);
        H(j, k) = H(k, j) = (fpp - fpm - fmp + fmm) / (4 * step_ * step_);
      }
    }
    return Scalar(0.5) * (H + H.transpose());
  }

 private:
  Fn fn_;
  Index n_;
  Scalar step_;
  bool time_dep_;
};

using FiniteDifferenceHamiltonian = FiniteDifferenceHamiltonianT<double>;

/// z -> S z + d with S symplectic.
template <typename Scalar>
struct AffineSymplecticMapT {
  SymplecticMatrixT<Scalar> S;
  VecX<Scalar> d;

  VecX<Scalar> apply(const VecX<Scalar>& z) const { return S.mat() * z + d; }
  PhasePointT<Scalar> apply(const PhasePointT<Scalar>& z) const {
    return PhasePointT<Scalar>::from_joined(apply(z.joined()));
  }

  /// this after other: z -> this(other(z)).
  AffineSymplecticMapT compose(const AffineSymplecticMapT& other) const {
    return {SymplecticMatrixT<Scalar>::unchecked(S.mat() * other.S.mat()),
            S.mat() * other.d + d};
  }

  static AffineSymplecticMapT identity(Index n) {
    return {SymplecticMatrixT<Scalar>::unchecked(MatX<Scalar>::Identity(2 * n, 2 * n)),
            VecX<Scalar>::Zero(2 * n)};
  }
};

using AffineSymplecticMap = AffineSymplecticMapT<double>;

/// Exact flow of z' = J(Mz + u) at time t. The linear part is e^(tJM); the
/// translation comes from the augmented exponential of [[tJM, tJu], [0, 0]],
/// which stays valid when JM is singular (free particle).
template <typename Scalar>
AffineSymplecticMapT<Scalar> quadratic_flow(const QuadraticHamiltonianT<Scalar>& H,
                                            Scalar t) {
  const Index dim = H.M.rows();
  const MatX<Scalar> J = standard_symplectic_form<Scalar>(dim / 2);
  if (H.u.isZero(Scalar(0))) {
    return {SymplecticMatrixT<Scalar>(matrix_exponential((t * J * H.M).eval()),
                                      Scalar(1e-9)),
            VecX<Scalar>::Zero(dim)};
  }
  MatX<Scalar> aug = MatX<Scalar>::Zero(dim + 1, dim + 1);
  aug.topLeftCorner(dim, dim) = t * J * H.M;
  aug.topRightCorner(dim, 1) = t * J * H.u;
  const MatX<Scalar> E = matrix_exponential(aug);
  return {SymplecticMatrixT<Scalar>(E.topLeftCorner(dim, dim).eval(), Scalar(1e-9)),
          E.topRightCorner(dim, 1)};
}

/// Time evolution of the phase-space averages under a quadratic Hamiltonian;
/// for quadratic H the means follow the classical flow exactly.
template <typename Scalar>
PhasePointT<Scalar> ehrenfest_classical(const QuadraticHamiltonianT<Scalar>& H,
                                        const PhasePointT<Scalar>& mean0, Scalar t) {
  return quadratic_flow(H, t).apply(mean0);
}

template <typename Scalar>
struct TrajectoryT {
  std::vector<Scalar> times;                 // strictly monotone in t
  std::vector<VecX<Scalar>> points;          // joined (x, p) coordinates
  Scalar energy_drift = Scalar(0);           // max |H(z_t) - H(z_0)|, autonomous H only

  Index size() const { return static_cast<Index>(times.size()); }
  PhasePointT<Scalar> endpoint() const {
    return PhasePointT<Scalar>::from_joined(points.back());
  }
};

using Trajectory = TrajectoryT<double>;

namespace detail {

template <typename Scalar>
Index step_count(Scalar T, Scalar dt) {
  if (!(dt > 0)) throw InvalidInput("time step dt must be positive");
  if (T == Scalar(0)) throw InvalidInput("horizon T must be nonzero");
  return static_cast<Index>(std::ceil(std::abs(T) / dt - Scalar(1e-12)));
}

}  // namespace detail

/// Fixed-step classic RK4 on z' = J grad H(z, t). Negative T integrates
/// backward. Throws BlowUp (carrying the last finite time) if the state
/// leaves the representable range.
template <typename Scalar>
TrajectoryT<Scalar> classical_trajectory(const GeneralHamiltonianT<Scalar>& H,
                                         const PhasePointT<Scalar>& z0, Scalar T,
                                         Scalar dt) {
  const Index nsteps = detail::step_count(T, dt);
  const Scalar h = T / Scalar(nsteps);
  const bool autonomous = !H.time_dependent();

  TrajectoryT<Scalar> traj;
  traj.times.reserve(nsteps + 1);
  traj.points.reserve(nsteps + 1);

  VecX<Scalar> z = z0.joined();
  Scalar t = Scalar(0);
  const Scalar E0 = autonomous ? H.value(z, t) : Scalar(0);
  traj.times.push_back(t);
  traj.points.push_back(z);

  for (Index k = 0; k < nsteps; ++k) {
    const VecX<Scalar> k1 = H.field(z, t);
    const VecX<Scalar> k2 = H.field(z + (h / 2) * k1, t + h / 2);
    const VecX<Scalar> k3 = H.field(z + (h / 2) * k2, t + h / 2);
    const VecX<Scalar> k4 = H.field(z + h * k3, t + h);
    z += (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
    t = (k + 1 == nsteps) ? T : t + h;
    if (!z.allFinite())
      throw BlowUp("classical_trajectory: state became non-finite",
                   static_cast<double>(traj.times.back()));
    traj.times.push_back(t);
    traj.points.push_back(z);
    if (autonomous)
      traj.energy_drift = std::max(traj.energy_drift, std::abs(H.value(z, t) - E0));
  }
  return traj;
}

/// Second-order Taylor expansion of H about (zc, t), organized as a
/// quadratic Hamiltonian in z: matches value, gradient and Hessian of H at
/// the expansion point exactly.
template <typename Scalar>
QuadraticHamiltonianT<Scalar> taylor_quadratic(const GeneralHamiltonianT<Scalar>& H,
                                               const PhasePointT<Scalar>& zc, Scalar t) {
  const VecX<Scalar> z = zc.joined();
  const MatX<Scalar> M = H.hessian(z, t);
  const VecX<Scalar> g = H.gradient(z, t);
  const VecX<Scalar> u = g - M * z;
  const Scalar c = H.value(z, t) - g.dot(z) + Scalar(0.5) * z.dot(M * z);
  return QuadraticHamiltonianT<Scalar>(M, u, c);
}

template <typename Scalar>
struct VariationalFlowT {
  std::vector<Scalar> times;
  std::vector<AffineSymplecticMapT<Scalar>> maps;  // z -> S_t (z - z0) + z_t
  TrajectoryT<Scalar> center;
  Scalar max_symplectic_defect = Scalar(0);
};

using VariationalFlow = VariationalFlowT<double>;

/// Integrates the center trajectory together with the linearized flow
/// S' = J H''(z_t, t) S, S(0) = I (joint RK4, same steps). Symplecticity of
/// the samples is asserted downstream, not imposed; the max defect is
/// reported.
template <typename Scalar>
VariationalFlowT<Scalar> variational_flow(const GeneralHamiltonianT<Scalar>& H,
                                          const PhasePointT<Scalar>& z0, Scalar T,
                                          Scalar dt) {
  const Index n = H.dof();
  const Index dim = 2 * n;
  const MatX<Scalar> J = standard_symplectic_form<Scalar>(n);
  const VecX<Scalar> zinit = z0.joined();

  VariationalFlowT<Scalar> out;
  const bool autonomous = !H.time_dependent();
  const Scalar E0 = autonomous ? H.value(zinit, Scalar(0)) : Scalar(0);

  VecX<Scalar> z = zinit;
  MatX<Scalar> S = MatX<Scalar>::Identity(dim, dim);
  Scalar t = Scalar(0);

  auto record = [&](Scalar tk, const VecX<Scalar>& zk, const MatX<Scalar>& Sk) {
    out.times.push_back(tk);
    out.maps.push_back({SymplecticMatrixT<Scalar>::unchecked(Sk), zk - Sk * zinit});
    out.center.times.push_back(tk);
    out.center.points.push_back(zk);
    out.max_symplectic_defect = std::max(out.max_symplectic_defect, symplectic_defect(Sk));
    if (autonomous)
      out.center.energy_drift =
          std::max(out.center.energy_drift, std::abs(H.value(zk, tk) - E0));
  };

  if (T == Scalar(0)) {
    record(t, z, S);
    return out;
  }

  const Index nsteps = detail::step_count(T, dt);
  const Scalar h = T / Scalar(nsteps);
  record(t, z, S);

  for (Index k = 0; k < nsteps; ++k) {
    const VecX<Scalar> kz1 = H.field(z, t);
    const MatX<Scalar> kS1 = J * H.hessian(z, t) * S;

    const VecX<Scalar> z2 = z + (h / 2) * kz1;
    const VecX<Scalar> kz2 = H.field(z2, t + h / 2);
    const MatX<Scalar> kS2 = J * H.hessian(z2, t + h / 2) * (S + (h / 2) * kS1);

    const VecX<Scalar> z3 = z + (h / 2) * kz2;
    const VecX<Scalar> kz3 = H.field(z3, t + h / 2);
    const MatX<Scalar> kS3 = J * H.hessian(z3, t + h / 2) * (S + (h / 2) * kS2);

    const VecX<Scalar> z4 = z + h * kz3;
    const VecX<Scalar> kz4 = H.field(z4, t + h);
    const MatX<Scalar> kS4 = J * H.hessian(z4, t + h) * (S + h * kS3);

    z += (h / 6) * (kz1 + 2 * kz2 + 2 * kz3 + kz4);
    S += (h / 6) * (kS1 + 2 * kS2 + 2 * kS3 + kS4);
    t = (k + 1 == nsteps) ? T : t + h;
    if (!z.allFinite() || !S.allFinite())
      throw BlowUp("variational_flow: state became non-finite",
                   static_cast<double>(out.times.back()));
    record(t, z, S);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Built-in named Hamiltonians (the set the CLI exposes).

/// H = |p|^2 / 2m.
template <typename Scalar>
class FreeHamiltonianT final : public GeneralHamiltonianT<Scalar> {
 public:
  explicit FreeHamiltonianT(Scalar m, Index n = 1) : m_(m), n_(n) {
    if (!(m > 0)) throw InvalidInput("free: mass must be positive");
  }
  Index dof() const override { return n_; }
  Scalar value(const VecX<Scalar>& z, Scalar) const override {
    return z.tail(n_).squaredNorm() / (2 * m_);
  }
  VecX<Scalar> gradient(const VecX<Scalar>& z, Scalar) const override {
    VecX<Scalar> g = VecX<Scalar>::Zero(2 * n_);
    g.tail(n_) = z.tail(n_) / m_;
    return g;
  }
  MatX<Scalar> hessian(const VecX<Scalar>&, Scalar) const override {
    MatX<Scalar> M = MatX<Scalar>::Zero(2 * n_, 2 * n_);
    M.bottomRightCorner(n_, n_) = MatX<Scalar>::Identity(n_, n_) / m_;
    return M;
  }
  QuadraticHamiltonianT<Scalar> quadratic() const {
    return QuadraticHamiltonianT<Scalar>::homogeneous(
        hessian(VecX<Scalar>::Zero(2 * n_), Scalar(0)));
  }

 private:
  Scalar m_;
  Index n_;
};

using FreeHamiltonian = FreeHamiltonianT<double>;

/// H = |p|^2 / 2m + m w^2 |x|^2 / 2.
template <typename Scalar>
class OscillatorHamiltonianT final : public GeneralHamiltonianT<Scalar> {
 public:
  OscillatorHamiltonianT(Scalar m, Scalar omega, Index n = 1)
      : m_(m), omega_(omega), n_(n) {
    if (!(m > 0) || !(omega > 0))
      throw InvalidInput("oscillator: m and omega must be positive");
  }
  Index dof() const override { return n_; }
  Scalar value(const VecX<Scalar>& z, Scalar) const override {
    return z.tail(n_).squaredNorm() / (2 * m_) +
           Scalar(0.5) * m_ * omega_ * omega_ * z.head(n_).squaredNorm();
  }
  VecX<Scalar> gradient(const VecX<Scalar>& z, Scalar) const override {
    VecX<Scalar> g(2 * n_);
    g.head(n_) = m_ * omega_ * omega_ * z.head(n_);
    g.tail(n_) = z.tail(n_) / m_;
    return g;
  }
  MatX<Scalar> hessian(const VecX<Scalar>&, Scalar) const override {
    MatX<Scalar> M = MatX<Scalar>::Zero(2 * n_, 2 * n_);
    M.topLeftCorner(n_, n_) = m_ * omega_ * omega_ * MatX<Scalar>::Identity(n_, n_);
    M.bottomRightCorner(n_, n_) = MatX<Scalar>::Identity(n_, n_) / m_;
    return M;
  }
  QuadraticHamiltonianT<Scalar> quadratic() const {
    return QuadraticHamiltonianT<Scalar>::homogeneous(
        hessian(VecX<Scalar>::Zero(2 * n_), Scalar(0)));
  }

 private:
  Scalar m_, omega_;
  Index n_;
};

using OscillatorHamiltonian = OscillatorHamiltonianT<double>;

/// H = p^2 / 2m - k cos x (one degree of freedom).
template <typename Scalar>
class PendulumHamiltonianT final : public GeneralHamiltonianT<Scalar> {
 public:
  explicit PendulumHamiltonianT(Scalar m = 1, Scalar k = 1) : m_(m), k_(k) {
    if (!(m > 0)) throw InvalidInput("pendulum: mass must be positive");
  }
  Index dof() const override { return 1; }
  Scalar value(const VecX<Scalar>& z, Scalar) const override {
    return z(1) * z(1) / (2 * m_) - k_ * std::cos(z(0));
  }
  VecX<Scalar> gradient(const VecX<Scalar>& z, Scalar) const override {
    VecX<Scalar> g(2);
    g << k_ * std::sin(z(0)), z(1) / m_;
    return g;
  }
  MatX<Scalar> hessian(const VecX<Scalar>& z, Scalar) const override {
    MatX<Scalar> M = MatX<Scalar>::Zero(2, 2);
    M(0, 0) = k_ * std::cos(z(0));
    M(1, 1) = 1 / m_;
    return M;
  }

 private:
  Scalar m_, k_;
};

using PendulumHamiltonian = PendulumHamiltonianT<double>;

/// H = p^2 / 2m + g x^4 (one degree of freedom).
template <typename Scalar>
class QuarticHamiltonianT final : public GeneralHamiltonianT<Scalar> {
 public:
  explicit QuarticHamiltonianT(Scalar m = 1, Scalar g = 1) : m_(m), g_(g) {
    if (!(m > 0)) throw InvalidInput("quartic: mass must be positive");
  }
  Index dof() const override { return 1; }
  Scalar value(const VecX<Scalar>& z, Scalar) const override {
    const Scalar x2 = z(0) * z(0);
    return z(1) * z(1) / (2 * m_) + g_ * x2 * x2;
  }
  VecX<Scalar> gradient(const VecX<Scalar>& z, Scalar) const override {
    VecX<Scalar> g(2);
    g << 4 * g_ * z(0) * z(0) * z(0), z(1) / m_;
    return g;
  }
  MatX<Scalar> hessian(const VecX<Scalar>& z, Scalar) const override {
    MatX<Scalar> M = MatX<Scalar>::Zero(2, 2);
    M(0, 0) = 12 * g_ * z(0) * z(0);
    M(1, 1) = 1 / m_;
    return M;
  }

 private:
  Scalar m_, g_;
};

using QuarticHamiltonian = QuarticHamiltonianT<double>;

/// Henon-Heiles, two degrees of freedom:
/// H = (p1^2 + p2^2)/2 + (x1^2 + x2^2)/2 + lambda (x1^2 x2 - x2^3 / 3).
template <typename Scalar>
class HenonHeilesHamiltonianT final : public GeneralHamiltonianT<Scalar> {
 public:
  explicit HenonHeilesHamiltonianT(Scalar lambda = 1) : lambda_(lambda) {}
  Index dof() const override { return 2; }
  Scalar value(const VecX<Scalar>& z, Scalar) const override {
    const Scalar x1 = z(0), x2 = z(1);
    return Scalar(0.5) * (z(2) * z(2) + z(3) * z(3)) +
           Scalar(0.5) * (x1 * x1 + x2 * x2) +
           lambda_ * (x1 * x1 * x2 - x2 * x2 * x2 / 3);
  }
  VecX<Scalar> gradient(const VecX<Scalar>& z, Scalar) const override {
    const Scalar x1 = z(0), x2 = z(1);
    VecX<Scalar> g(4);
    g << x1 + 2 * lambda_ * x1 * x2, x2 + lambda_ * (x1 * x1 - x2 * x2), z(2), z(3);
    return g;
  }
  MatX<Scalar> hessian(const VecX<Scalar>& z, Scalar) const override {
    const Scalar x1 = z(0), x2 = z(1);
    MatX<Scalar> M = MatX<Scalar>::Zero(4, 4);
    M(0, 0) = 1 + 2 * lambda_ * x2;
    M(0, 1) = M(1, 0) = 2 * lambda_ * x1;
    M(1, 1) = 1 - 2 * lambda_ * x2;
    M(2, 2) = M(3, 3) = 1;
    return M;
  }

 private:
  Scalar lambda_;
};

using HenonHeilesHamiltonian = HenonHeilesHamiltonianT<double>;

}  // namespace sympl
