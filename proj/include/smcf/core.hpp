#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace smcf {

using Vec2 = Eigen::Vector2d;
using Vec4 = Eigen::Vector4d;
using Mat2 = Eigen::Matrix2d;
using Mat4 = Eigen::Matrix4d;

struct InvalidInput : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct DegenerateFrame : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct WrongBranch : std::logic_error {
  using std::logic_error::logic_error;
};

struct InvalidSpec : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct BuildError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BlowUpDetected : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Rank-4 tensor over the 4-dimensional ambient chart, row-major.
class Tensor4 {
 public:
  double& operator()(int a, int b, int c, int d) {
    return v_[((a * 4 + b) * 4 + c) * 4 + d];
  }
  double operator()(int a, int b, int c, int d) const {
    return v_[((a * 4 + b) * 4 + c) * 4 + d];
  }
  void setZero() { v_.fill(0.0); }

 private:
  std::array<double, 256> v_{};
};

/// Christoffel symbols Gamma^a_{bc}, symmetric in (b,c).
struct Christoffels {
  std::array<std::array<std::array<double, 4>, 4>, 4> G{};
  double& operator()(int a, int b, int c) { return G[a][b][c]; }
  double operator()(int a, int b, int c) const { return G[a][b][c]; }
};

inline bool all_finite(const Vec4& v) { return v.allFinite(); }

/// splitmix64-based generator with an explicit uniform scheme, so random
/// suites reproduce bit-for-bit across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Standard normal via Box-Muller.
  double normal() {
    double u1 = uniform01();
    double u2 = uniform01();
    while (u1 <= 1e-300) u1 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

 private:
  std::uint64_t state_;
};

}  // namespace smcf
