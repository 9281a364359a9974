#include <doctest.h>

#include <sympl/capacity.hpp>
#include <sympl/convex.hpp>

using namespace sympl;

namespace {

Matrix diag4(double a, double b, double c, double d) {
  Matrix m = Matrix::Zero(4, 4);
  m.diagonal() << a, b, c, d;
  return m;
}

Matrix random_spd(Index dim, Rng& rng) {
  Matrix G(dim, dim);
  for (Index i = 0; i < dim; ++i)
    for (Index j = 0; j < dim; ++j) G(i, j) = rng.normal();
  return G.transpose() * G + 0.05 * Matrix::Identity(dim, dim);
}

/// Independent area oracle: for a smooth convex planar body with support
/// function h, area = 1/2 int (h^2 - h'^2) dphi. The shadow of S B(r) on the
/// (i, j) plane has h(phi) = r |S^T (cos phi e_i + sin phi e_j)|.
double shadow_area_support_oracle(const Matrix& S, double r, Index i, Index j) {
  const Index nphi = 20000;
  const double dphi = 2 * kPi / nphi;
  auto h = [&](double phi) {
    Vector w = Vector::Zero(S.rows());
    w(i) = std::cos(phi);
    w(j) = std::sin(phi);
    return r * (S.transpose() * w).norm();
  };
  double area = 0.0;
  for (Index k = 0; k < nphi; ++k) {
    const double phi = k * dphi;
    const double hv = h(phi);
    const double hp = (h(phi + dphi / 2) - h(phi - dphi / 2)) / dphi;
    area += 0.5 * (hv * hv - hp * hp) * dphi;
  }
  return area;
}

}  // namespace

TEST_CASE("ellipsoid_capacity: balls and ellipses") {
  for (double R : {0.5, 1.0, 3.0}) {
    CHECK(ellipsoid_capacity(Ellipsoid::ball(2, R)) ==
          doctest::Approx(kPi * R * R).epsilon(1e-12));
    CHECK(ellipsoid_capacity(Ellipsoid::ball(6, R)) ==
          doctest::Approx(kPi * R * R).epsilon(1e-12));
  }

  // x^2/a^2 + p^2/b^2 <= 1 has capacity pi a b; a = 2, b = 3
  Matrix shape(2, 2);
  shape << 0.25, 0.0, 0.0, 1.0 / 9.0;
  CHECK(ellipsoid_capacity(Ellipsoid(Vector::Zero(2), shape)) ==
        doctest::Approx(6 * kPi).epsilon(1e-12));

  // two dof, x semiaxes (1,1), p semiaxes (2,2): capacity 2 pi
  const Ellipsoid e2(Vector::Zero(4), diag4(1.0, 1.0, 0.25, 0.25));
  CHECK(ellipsoid_capacity(e2) == doctest::Approx(2 * kPi).epsilon(1e-12));

  // center independence
  Vector off(2);
  off << 5.0, -3.0;
  CHECK(ellipsoid_capacity(Ellipsoid(off, shape)) ==
        doctest::Approx(6 * kPi).epsilon(1e-12));

  CHECK_THROWS_AS(Ellipsoid(Vector::Zero(2), Matrix::Zero(2, 2)), DegenerateMatrix);
}

TEST_CASE("cylinder_capacity: normalization and scaling") {
  CHECK(cylinder_capacity(1.0) == doctest::Approx(kPi).epsilon(1e-15));
  CHECK(cylinder_capacity(2.0) == doctest::Approx(4 * kPi).epsilon(1e-15));
  const double lam = 1.7, R = 0.9;
  CHECK(cylinder_capacity(lam * R) ==
        doctest::Approx(lam * lam * cylinder_capacity(R)).epsilon(1e-15));
  CHECK_THROWS_AS(cylinder_capacity(0.0), InvalidInput);
}

TEST_CASE("shadow_area: identity and the squeeze example") {
  const Matrix I4 = Matrix::Identity(4, 4);
  for (Index i = 0; i < 4; ++i)
    for (Index j = 0; j < 4; ++j)
      if (i != j) CHECK(shadow_area(I4, 1.0, i, j) == doctest::Approx(kPi).epsilon(1e-13));

  // S = diag(l, l, 1/l, 1/l) squeezes non-conjugate planes only
  const double l = 0.5, r = 1.0;
  const Matrix S = diag4(l, l, 1.0 / l, 1.0 / l);
  REQUIRE(is_symplectic(S, 1e-12));
  CHECK(shadow_area(S, r, 0, 2) == doctest::Approx(kPi * r * r).epsilon(1e-12));
  CHECK(shadow_area(S, r, 1, 3) == doctest::Approx(kPi * r * r).epsilon(1e-12));
  CHECK(shadow_area(S, r, 0, 1) == doctest::Approx(l * l * kPi * r * r).epsilon(1e-12));
  CHECK(shadow_area(S, r, 2, 3) ==
        doctest::Approx(kPi * r * r / (l * l)).epsilon(1e-12));

  CHECK_THROWS_AS(shadow_area(I4, 1.0, 2, 2), InvalidInput);
  CHECK_THROWS_AS(shadow_area(I4, 1.0, 0, 7), InvalidInput);
  CHECK_THROWS_AS(shadow_area(I4, 0.0, 0, 1), InvalidInput);
}

TEST_CASE("shadow_area: agrees with the support-function quadrature oracle") {
  Rng rng(17);
  for (int trial = 0; trial < 5; ++trial) {
    const auto S = random_symplectic(2, 300 + trial);
    const double r = 0.5 + rng.uniform(0.0, 1.5);
    const Index i = trial % 4;
    const Index j = (i + 1 + trial % 3) % 4;
    if (i == j) continue;
    const double exact = shadow_area(S.mat(), r, i, j);
    const double sampled = shadow_area_support_oracle(S.mat(), r, i, j);
    CHECK(exact == doctest::Approx(sampled).epsilon(1e-5));
  }
}

TEST_CASE("linear non-squeezing: conjugate shadows never shrink") {
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const Index n = 2 + seed % 2;
    const auto S = random_symplectic(n, seed);
    for (Index k = 0; k < n; ++k)
      CHECK(shadow_area(S.mat(), 1.0, k, k + n) >= kPi * (1 - 1e-9));
  }
}

TEST_CASE("nonsqueezing_report: identity, squeeze demo, random sweep") {
  const auto id = SymplecticMatrix(Matrix::Identity(4, 4));
  const auto rep = nonsqueezing_report(id, 1.0);
  CHECK(rep.entries.size() == 6);
  for (const auto& e : rep.entries) CHECK(e.area == doctest::Approx(kPi).epsilon(1e-13));
  CHECK(rep.min_conjugate_area == doctest::Approx(kPi).epsilon(1e-13));

  const double l = 0.5;
  const auto squeeze = SymplecticMatrix(diag4(l, l, 1.0 / l, 1.0 / l));
  const auto srep = nonsqueezing_report(squeeze, 1.0);
  int conjugate_count = 0;
  for (const auto& e : srep.entries) {
    CHECK(e.conjugate == ((e.j == e.i + 2)));
    if (e.conjugate) {
      ++conjugate_count;
      CHECK(e.area >= kPi * (1 - 1e-12));
    }
  }
  CHECK(conjugate_count == 2);
  CHECK(srep.min_conjugate_area == doctest::Approx(kPi).epsilon(1e-12));
  // the x1-x2 plane shrinks to l^2 of the cross-section
  CHECK(srep.entries.front().area == doctest::Approx(l * l * kPi).epsilon(1e-12));

  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const auto S = random_symplectic(3, 5000 + seed);
    CHECK(nonsqueezing_report(S, 1.0).min_conjugate_area >= kPi * (1 - 1e-9));
  }
}

TEST_CASE("capacity axiom: symplectic invariance") {
  Rng rng(88);
  for (int trial = 0; trial < 500; ++trial) {
    const Index n = 1 + trial % 3;
    const Ellipsoid E(Vector::Zero(2 * n), random_spd(2 * n, rng));
    const auto S = random_symplectic(n, 900 + trial);
    Vector d(2 * n);
    for (Index i = 0; i < 2 * n; ++i) d(i) = rng.uniform(-2.0, 2.0);
    const Ellipsoid image = E.transformed(S.mat(), d);
    const double c0 = ellipsoid_capacity(E);
    CHECK(ellipsoid_capacity(image) == doctest::Approx(c0).epsilon(1e-9));
  }
}

TEST_CASE("capacity axiom: monotonicity on nested ellipsoids") {
  Rng rng(4242);
  for (int trial = 0; trial < 500; ++trial) {
    const Index n = 1 + trial % 2;
    const Matrix outer_shape = random_spd(2 * n, rng);
    // inner ellipsoid: shape_in = shape_out + psd increment, same center
    const Matrix inner_shape = outer_shape + random_spd(2 * n, rng);
    const Ellipsoid inner(Vector::Zero(2 * n), inner_shape);
    const Ellipsoid outer(Vector::Zero(2 * n), outer_shape);
    CHECK(ellipsoid_capacity(inner) <= ellipsoid_capacity(outer) + 1e-12);
  }
}

TEST_CASE("capacity axiom: exact 2-homogeneity") {
  Rng rng(5150);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = 1 + trial % 3;
    const Ellipsoid E(Vector::Zero(2 * n), random_spd(2 * n, rng));
    const double lam = 0.1 + rng.uniform(0.0, 3.0);
    const Ellipsoid scaled(E.center, Matrix(E.shape / (lam * lam)));
    CHECK(ellipsoid_capacity(scaled) ==
          doctest::Approx(lam * lam * ellipsoid_capacity(E)).epsilon(1e-12));
  }
}

TEST_CASE("capacity axiom: ball-cylinder consistency") {
  for (double R : {0.3, 1.0, 2.5}) {
    CHECK(ellipsoid_capacity(Ellipsoid::ball(4, R)) ==
          doctest::Approx(cylinder_capacity(R)).epsilon(1e-13));
  }
  // axis-aligned ellipsoids inside Z_1(R) obey capacity <= pi R^2
  Rng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    Vector semi(4);
    for (Index i = 0; i < 4; ++i) semi(i) = 0.2 + rng.uniform(0.0, 2.0);
    const double R = std::max(semi(0), semi(2));  // fits Z_1(R) by construction
    Matrix shape = Matrix::Zero(4, 4);
    shape.diagonal() << 1 / (semi(0) * semi(0)), 1 / (semi(1) * semi(1)),
        1 / (semi(2) * semi(2)), 1 / (semi(3) * semi(3));
    CHECK(ellipsoid_capacity(Ellipsoid(Vector::Zero(4), shape)) <=
          cylinder_capacity(R) * (1 + 1e-12));
  }
}

TEST_CASE("capacity is not a volume: equal volumes, 4x capacity gap") {
  // semiaxes per pair: (x1, p1, x2, p2) = (1, 1, 4, 4) vs (2, 2, 2, 2)
  const Ellipsoid thin(Vector::Zero(4), diag4(1.0, 1.0 / 16.0, 1.0, 1.0 / 16.0));
  const Ellipsoid round(Vector::Zero(4), diag4(0.25, 0.25, 0.25, 0.25));
  CHECK(ellipsoid_volume(thin) == doctest::Approx(ellipsoid_volume(round)).epsilon(1e-12));
  const double c_thin = ellipsoid_capacity(thin);
  const double c_round = ellipsoid_capacity(round);
  CHECK(c_thin == doctest::Approx(kPi).epsilon(1e-12));
  CHECK(c_round == doctest::Approx(4 * kPi).epsilon(1e-12));
  CHECK(c_round / c_thin >= 4.0 * (1 - 1e-12));
}

TEST_CASE("plane labels") {
  CHECK(plane_label(0, 2, 2) == "x1-p1");
  CHECK(plane_label(0, 1, 2) == "x1-x2");
  CHECK(plane_label(2, 3, 2) == "p1-p2");
}
