#include <doctest.h>

#include <sympl/flows.hpp>

using namespace sympl;

namespace {

QuadraticHamiltonian free_particle(double m) {
  Matrix M = Matrix::Zero(2, 2);
  M(1, 1) = 1.0 / m;
  return QuadraticHamiltonian::homogeneous(std::move(M));
}

QuadraticHamiltonian unit_oscillator() {
  return QuadraticHamiltonian::homogeneous(Matrix::Identity(2, 2));
}

QuadraticHamiltonian random_quadratic(Index n, Rng& rng, bool with_linear = true) {
  Matrix M(2 * n, 2 * n);
  for (Index i = 0; i < 2 * n; ++i)
    for (Index j = i; j < 2 * n; ++j) M(i, j) = M(j, i) = rng.uniform(-1.0, 1.0);
  Vector u = Vector::Zero(2 * n);
  if (with_linear)
    for (Index i = 0; i < 2 * n; ++i) u(i) = rng.uniform(-1.0, 1.0);
  return QuadraticHamiltonian(M, u, rng.uniform(-1.0, 1.0));
}

/// H = x^4, one dof, with exact derivatives (a pure-position test case).
class PureQuartic final : public GeneralHamiltonian {
 public:
  Index dof() const override { return 1; }
  double value(const Vector& z, double) const override {
    return z(0) * z(0) * z(0) * z(0);
  }
  Vector gradient(const Vector& z, double) const override {
    Vector g(2);
    g << 4 * z(0) * z(0) * z(0), 0.0;
    return g;
  }
  Matrix hessian(const Vector& z, double) const override {
    Matrix M = Matrix::Zero(2, 2);
    M(0, 0) = 12 * z(0) * z(0);
    return M;
  }
};

}  // namespace

TEST_CASE("quadratic_flow: free particle and oscillator closed forms") {
  const double m = 1.3, t = 0.8;
  const auto drift = quadratic_flow(free_particle(m), t);
  Matrix expected(2, 2);
  expected << 1.0, t / m, 0.0, 1.0;
  CHECK((drift.S.mat() - expected).cwiseAbs().maxCoeff() < 1e-13);
  CHECK(drift.d.cwiseAbs().maxCoeff() == 0.0);

  const auto rot = quadratic_flow(unit_oscillator(), t);
  Matrix R(2, 2);
  R << std::cos(t), std::sin(t), -std::sin(t), std::cos(t);
  CHECK((rot.S.mat() - R).cwiseAbs().maxCoeff() < 1e-13);

  Rng rng(1);
  const auto id = quadratic_flow(random_quadratic(2, rng), 0.0);
  CHECK((id.S.mat() - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(id.d.cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("quadratic_flow: group law with translations") {
  Rng rng(42);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = 1 + trial % 2;
    const auto H = random_quadratic(n, rng);
    const double t1 = rng.uniform(-1.5, 1.5);
    const double t2 = rng.uniform(-1.5, 1.5);
    const auto f1 = quadratic_flow(H, t1);
    const auto f2 = quadratic_flow(H, t2);
    const auto f12 = quadratic_flow(H, t1 + t2);
    const auto composed = f1.compose(f2);
    const double scale = std::max(1.0, f12.S.mat().cwiseAbs().maxCoeff());
    CHECK((composed.S.mat() - f12.S.mat()).cwiseAbs().maxCoeff() < 1e-9 * scale);
    CHECK((composed.d - f12.d).cwiseAbs().maxCoeff() < 1e-9 * scale);
  }
}

TEST_CASE("quadratic_flow: translation part for a kicked free particle") {
  // H = p^2/2 + f x: classical solution p(t) = p0 - f t,
  // x(t) = x0 + p0 t - f t^2 / 2
  Matrix M = Matrix::Zero(2, 2);
  M(1, 1) = 1.0;
  Vector u(2);
  const double f = 0.7;
  u << f, 0.0;
  const QuadraticHamiltonian H(M, u);
  const double t = 1.7;
  const auto flow = quadratic_flow(H, t);
  const Vector z = flow.apply(Vector(Vector::Zero(2)));
  CHECK(z(0) == doctest::Approx(-f * t * t / 2).epsilon(1e-12));
  CHECK(z(1) == doctest::Approx(-f * t).epsilon(1e-12));
}

TEST_CASE("classical_trajectory: oscillator closes after one period") {
  OscillatorHamiltonian H(1.0, 1.0);
  const auto traj =
      classical_trajectory<double>(H, PhasePoint(1.0, 0.0), 2 * kPi, 1e-3);
  const auto end = traj.endpoint();
  CHECK(std::abs(end.x(0) - 1.0) < 1e-9);
  CHECK(std::abs(end.p(0)) < 1e-9);
  CHECK(traj.energy_drift < 1e-11);
}

TEST_CASE("classical_trajectory: free drift is exact") {
  FreeHamiltonian H(1.0);
  const auto traj = classical_trajectory<double>(H, PhasePoint(0.0, 1.0), 3.0, 1e-2);
  const auto end = traj.endpoint();
  CHECK(std::abs(end.x(0) - 3.0) < 1e-12);
  CHECK(std::abs(end.p(0) - 1.0) < 1e-12);
}

TEST_CASE("classical_trajectory: critical point stays put") {
  PendulumHamiltonian H(1.0, 1.0);
  const auto traj = classical_trajectory<double>(H, PhasePoint(0.0, 0.0), 2.0, 1e-2);
  for (const auto& z : traj.points) CHECK(z.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("classical_trajectory: backward integration and step contract") {
  OscillatorHamiltonian H(1.0, 1.0);
  const auto fwd = classical_trajectory<double>(H, PhasePoint(1.0, 0.0), 1.0, 1e-3);
  const auto back = classical_trajectory<double>(H, fwd.endpoint(), -1.0, 1e-3);
  CHECK(std::abs(back.endpoint().x(0) - 1.0) < 1e-10);
  CHECK(std::abs(back.endpoint().p(0)) < 1e-10);
  CHECK_THROWS_AS(classical_trajectory<double>(H, PhasePoint(1.0, 0.0), 1.0, 0.0),
                  InvalidInput);
}

TEST_CASE("classical_trajectory: RK4 order on the pendulum energy drift") {
  PendulumHamiltonian H(1.0, 1.0);
  const PhasePoint z0(2.5, 0.0);
  const double drift1 = classical_trajectory<double>(H, z0, 10.0, 2e-2).energy_drift;
  const double drift2 = classical_trajectory<double>(H, z0, 10.0, 1e-2).energy_drift;
  CHECK(drift1 / drift2 >= 12.0);  // fourth-order scheme: expect ~16x
}

TEST_CASE("classical_trajectory: blow-up reports the last finite time") {
  // inverted quartic: H = p^2/2 - x^4 escapes to infinity in finite time
  QuarticHamiltonian H(1.0, -1.0);
  try {
    classical_trajectory<double>(H, PhasePoint(1.5, 0.0), 10.0, 1e-3);
    FAIL("expected BlowUp");
  } catch (const BlowUp& e) {
    CHECK(e.last_valid_time > 0.0);
    CHECK(e.last_valid_time < 10.0);
  }
}

TEST_CASE("taylor_quadratic: exact on quadratics") {
  Rng rng(5);
  const auto Hq = random_quadratic(2, rng);
  QuadraticAsGeneral H(Hq);
  PhasePoint zc(Vector::Ones(2), Vector::Constant(2, -0.3));
  const auto T = taylor_quadratic<double>(H, zc, 0.0);
  CHECK((T.M - Hq.M).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((T.u - Hq.u).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(T.c == doctest::Approx(Hq.c).epsilon(1e-10));
}

TEST_CASE("taylor_quadratic: hand-computed expansion of x^4 at x = 1") {
  PureQuartic H;
  const auto T = taylor_quadratic<double>(H, PhasePoint(1.0, 0.0), 0.0);
  CHECK(T.M(0, 0) == doctest::Approx(12.0));
  CHECK(T.M(1, 1) == doctest::Approx(0.0));
  CHECK(T.u(0) == doctest::Approx(-8.0));
  CHECK(T.u(1) == doctest::Approx(0.0));
  CHECK(T.c == doctest::Approx(3.0));

  // Taylor matching conditions at the expansion point
  Vector zc(2);
  zc << 1.0, 0.0;
  CHECK(T.value(zc) == doctest::Approx(H.value(zc, 0.0)).epsilon(1e-14));
  CHECK((T.gradient(zc) - H.gradient(zc, 0.0)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("finite-difference adapter agrees with analytic derivatives") {
  PendulumHamiltonian exact(1.0, 0.8);
  FiniteDifferenceHamiltonian fd(
      [](const Vector& z, double) { return z(1) * z(1) / 2 - 0.8 * std::cos(z(0)); }, 1);
  Vector z(2);
  z << 0.7, -0.4;
  CHECK(fd.value(z, 0.0) == doctest::Approx(exact.value(z, 0.0)).epsilon(1e-14));
  CHECK((fd.gradient(z, 0.0) - exact.gradient(z, 0.0)).cwiseAbs().maxCoeff() < 1e-9);
  CHECK((fd.hessian(z, 0.0) - exact.hessian(z, 0.0)).cwiseAbs().maxCoeff() < 1e-4);
}

TEST_CASE("variational_flow: quadratic case reproduces the exact flow") {
  OscillatorHamiltonian H(1.0, 1.0);
  const double T = 1.3;
  const auto vf = variational_flow<double>(H, PhasePoint(0.4, -0.2), T, 1e-3);
  const auto exact = quadratic_flow(H.quadratic(), T);
  CHECK((vf.maps.back().S.mat() - exact.S.mat()).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("variational_flow: symplectic defect stays small on the pendulum") {
  PendulumHamiltonian H(1.0, 1.0);
  const auto vf = variational_flow<double>(H, PhasePoint(2.0, 0.5), 10.0, 1e-3);
  CHECK(vf.max_symplectic_defect <= 1e-6);
  CHECK(is_symplectic(vf.maps.back().S.mat(), 1e-6));
}

TEST_CASE("variational_flow: the map carries the center exactly") {
  QuarticHamiltonian H(1.0, 0.3);
  const PhasePoint z0(0.9, -0.1);
  const auto vf = variational_flow<double>(H, z0, 2.0, 1e-3);
  for (std::size_t k = 0; k < vf.maps.size(); k += 500) {
    const Vector mapped = vf.maps[k].apply(z0.joined());
    CHECK((mapped - vf.center.points[k]).cwiseAbs().maxCoeff() < 1e-12);
  }
  const auto vf0 = variational_flow<double>(H, z0, 0.0, 1e-3);
  CHECK((vf0.maps.front().S.mat() - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("ehrenfest_classical: rotation, drift, fixed point") {
  const auto rotated =
      ehrenfest_classical(unit_oscillator(), PhasePoint(1.0, 0.0), kPi / 2);
  CHECK(rotated.x(0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(rotated.p(0) == doctest::Approx(-1.0).epsilon(1e-12));

  const auto drifted = ehrenfest_classical(free_particle(1.0), PhasePoint(0.0, 1.0), 2.0);
  CHECK(drifted.x(0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(drifted.p(0) == doctest::Approx(1.0).epsilon(1e-12));

  const auto fixed = ehrenfest_classical(unit_oscillator(), PhasePoint(0.0, 0.0), 1.0);
  CHECK(fixed.x(0) == 0.0);
  CHECK(fixed.p(0) == 0.0);
}

TEST_CASE("named Hamiltonians: Henon-Heiles derivatives are consistent") {
  HenonHeilesHamiltonian H(0.7);
  FiniteDifferenceHamiltonian fd(
      [](const Vector& z, double) {
        return 0.5 * (z(2) * z(2) + z(3) * z(3)) +
               0.5 * (z(0) * z(0) + z(1) * z(1)) +
               0.7 * (z(0) * z(0) * z(1) - z(1) * z(1) * z(1) / 3);
      },
      2);
  Vector z(4);
  z << 0.3, -0.2, 0.1, 0.4;
  CHECK((fd.gradient(z, 0.0) - H.gradient(z, 0.0)).cwiseAbs().maxCoeff() < 1e-8);
  CHECK((fd.hessian(z, 0.0) - H.hessian(z, 0.0)).cwiseAbs().maxCoeff() < 1e-4);
}
