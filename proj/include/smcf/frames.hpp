#pragma once

// Adapted orthonormal frames along a surface, the Kahler angle data
// (x, y, z) = (<Je1,e2>, <Je1,e3>, <Je1,e4>), the explicit frame forms of J,
// and the frame curvature scalars of the constant-curvature model.

#include <array>

#include "smcf/ambient.hpp"
#include "smcf/core.hpp"

namespace smcf::frames {

/// Orthonormal frame {e1,e2} tangent, {e3,e4} normal, with Je1 = x e2 + y e3 + z e4.
struct AdaptedFrame {
  Vec4 e1, e2, e3, e4;
  double x = 0, y = 0, z = 0;

  std::array<Vec4, 4> vectors() const { return {e1, e2, e3, e4}; }
};

/// Which explicit frame form of J to use; Form32 is the anti-self-dual
/// convention the curvature scalars below are derived in, and is the form a
/// positively oriented adapted frame in the chart produces.
enum class JForm { Form31, Form32 };

namespace detail {

inline Vec4 normalize(const Vec4& v, const Mat4& g, const char* what) {
  const double n2 = v.dot(g * v);
  if (n2 < 1e-20) throw DegenerateFrame(what);
  return v / std::sqrt(n2);
}

inline Vec4 project_out(const Vec4& v, const Vec4& unit, const Mat4& g) {
  return v - unit.dot(g * v) * unit;
}

}  // namespace detail

/// Gram-Schmidt an adapted frame out of spanning tangent/normal bases.
/// e1 follows the first tangent vector; e4 is fixed by requiring positive
/// orientation of (e1,e2,e3,e4) in the chart.
inline AdaptedFrame adapt_frame(const Vec4& t1, const Vec4& t2, const Vec4& n1,
                                const Vec4& n2, const Mat4& g, const Mat4& J) {
  AdaptedFrame f;
  f.e1 = detail::normalize(t1, g, "degenerate tangent basis");
  f.e2 = detail::normalize(detail::project_out(t2, f.e1, g), g, "degenerate tangent basis");

  Vec4 u3 = detail::project_out(detail::project_out(n1, f.e1, g), f.e2, g);
  f.e3 = detail::normalize(u3, g, "degenerate normal basis");
  Vec4 u4 = detail::project_out(
      detail::project_out(detail::project_out(n2, f.e1, g), f.e2, g), f.e3, g);
  f.e4 = detail::normalize(u4, g, "degenerate normal basis");

  Mat4 M;
  M.col(0) = f.e1;
  M.col(1) = f.e2;
  M.col(2) = f.e3;
  M.col(3) = f.e4;
  if (M.determinant() < 0) f.e4 = -f.e4;

  f.x = (J * f.e1).dot(g * f.e2);
  f.y = (J * f.e1).dot(g * f.e3);
  f.z = (J * f.e1).dot(g * f.e4);
  return f;
}

/// Variant that finds the normal space itself, completing the tangent basis
/// with coordinate directions.
inline AdaptedFrame adapt_frame(const Vec4& t1, const Vec4& t2, const Mat4& g,
                                const Mat4& J) {
  const Vec4 e1 = detail::normalize(t1, g, "degenerate tangent basis");
  const Vec4 e2 =
      detail::normalize(detail::project_out(t2, e1, g), g, "degenerate tangent basis");

  // Pick the two coordinate directions with the largest normal residual.
  std::array<Vec4, 4> cand;
  std::array<double, 4> res;
  for (int i = 0; i < 4; ++i) {
    Vec4 v = Vec4::Unit(i);
    v = detail::project_out(detail::project_out(v, e1, g), e2, g);
    cand[i] = v;
    res[i] = v.dot(g * v);
  }
  int i1 = 0;
  for (int i = 1; i < 4; ++i)
    if (res[i] > res[i1]) i1 = i;
  const Vec4 n1 = cand[i1];
  int i2 = -1;
  double best = -1;
  for (int i = 0; i < 4; ++i) {
    if (i == i1) continue;
    Vec4 v = detail::project_out(cand[i], n1 / std::sqrt(res[i1]), g);
    const double r = v.dot(g * v);
    if (r > best) {
      best = r;
      i2 = i;
    }
  }
  return adapt_frame(t1, t2, n1, cand[i2], g, J);
}

/// Explicit J matrix in an adapted frame, rows J(a,b) = <J e_a, e_b>.
inline Mat4 j_matrix(double x, double y, double z, JForm form) {
  if (std::abs(x * x + y * y + z * z - 1.0) > 1e-8)
    throw InvalidInput("j_matrix: (x,y,z) must be a unit vector");
  Mat4 J;
  if (form == JForm::Form31) {
    J << 0, x, y, z,  //
        -x, 0, -z, y,  //
        -y, z, 0, -x,  //
        -z, -y, x, 0;
  } else {
    J << 0, x, y, z,  //
        -x, 0, z, -y,  //
        -y, -z, 0, x,  //
        -z, y, -x, 0;
  }
  return J;
}

struct CurvatureScalars {
  double K1212, K3434, K1234;
};

/// The frame contractions of the constant-curvature model that the pinching
/// estimates run on, as functions of x = cos(alpha) only.
inline CurvatureScalars frame_curvature_scalars(double x, double k) {
  if (std::abs(x) > 1.0 + 1e-12) throw InvalidInput("cos(alpha) must lie in [-1,1]");
  if (!(k > 0)) throw InvalidInput("k must be positive");
  CurvatureScalars s;
  s.K1212 = (k / 4.0) * (3.0 * x * x + 1.0);
  s.K3434 = s.K1212;
  s.K1234 = (k / 4.0) * (3.0 * x * x - 1.0);
  return s;
}

/// |w|^2 = (9 k^2 / 8) cos^2(alpha) sin^2(alpha), the squared norm of the
/// normal-curvature trace w_i^a = sum_l K_{a l i l}.
inline double w_norm_sq(double x, double k) {
  if (std::abs(x) > 1.0 + 1e-12) throw InvalidInput("cos(alpha) must lie in [-1,1]");
  return (9.0 * k * k / 8.0) * x * x * (1.0 - x * x);
}

}  // namespace smcf::frames
