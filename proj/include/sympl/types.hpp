#pragma once

#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

#include "sympl/errors.hpp"

namespace sympl {

using Index = Eigen::Index;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

template <typename Scalar>
using MatX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VecX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using CMatX = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using CVecX = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

using Matrix = MatX<double>;
using Vector = VecX<double>;
using ComplexMatrix = CMatX<double>;
using ComplexVector = CVecX<double>;
using Complex = std::complex<double>;

/// A point (x, p) of 2n-dimensional phase space. Coordinates are stored as
/// (x_1..x_n, p_1..p_n); the conjugate pair j is the index pair (j, n+j).
template <typename Scalar>
struct PhasePointT {
  VecX<Scalar> x;
  VecX<Scalar> p;

  PhasePointT() = default;
  PhasePointT(VecX<Scalar> x_, VecX<Scalar> p_) : x(std::move(x_)), p(std::move(p_)) {
    if (x.size() != p.size() || x.size() < 1)
      throw InvalidDimension("PhasePoint: x and p must have equal length n >= 1");
  }
  PhasePointT(Scalar x1, Scalar p1) : x(1), p(1) {
    x << x1;
    p << p1;
  }

  Index dof() const { return x.size(); }

  /// Joined coordinate vector z = (x, p).
  VecX<Scalar> joined() const {
    VecX<Scalar> z(2 * x.size());
    z << x, p;
    return z;
  }

  static PhasePointT from_joined(const VecX<Scalar>& z) {
    if (z.size() % 2 != 0 || z.size() < 2)
      throw InvalidDimension("PhasePoint: joined vector must have even length >= 2");
    const Index n = z.size() / 2;
    return PhasePointT(z.head(n), z.tail(n));
  }
};

using PhasePoint = PhasePointT<double>;

/// Deterministic random stream. Draws are derived from raw mt19937_64 output
/// so that sequences are identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform in [0, 1).
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Standard normal via Box-Muller (no rejection, so the draw count per
  /// call is fixed and streams stay aligned).
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * kPi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  std::uint64_t raw() { return gen_(); }

  /// Deterministic child stream (splitmix64 of seed and stream id).
  static std::uint64_t substream_seed(std::uint64_t master, std::uint64_t stream) {
    std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace sympl
