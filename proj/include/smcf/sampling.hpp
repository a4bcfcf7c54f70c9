#pragma once

// Deterministic random generators for the oracle suites: second fundamental
// forms (general and trace-free), gradient fields, chart points, and tangent
// planes for building adapted frames.

#include "smcf/ambient.hpp"
#include "smcf/core.hpp"
#include "smcf/frames.hpp"
#include "smcf/sff.hpp"

namespace smcf::sampling {

/// Symmetric 2x2 with i.i.d. entries uniform on [-2, 2].
inline Mat2 random_sym2(Rng& rng) {
  Mat2 m;
  m(0, 0) = rng.uniform(-2, 2);
  m(1, 1) = rng.uniform(-2, 2);
  m(0, 1) = m(1, 0) = rng.uniform(-2, 2);
  return m;
}

inline sff::SecondFundamentalForm random_sff(Rng& rng) {
  sff::SecondFundamentalForm s;
  s.h3 = random_sym2(rng);
  s.h4 = random_sym2(rng);
  return s;
}

/// Random h with both traces projected out (|H| = 0 branch).
inline sff::SecondFundamentalForm random_traceless_sff(Rng& rng) {
  sff::SecondFundamentalForm s = random_sff(rng);
  s.h3 -= 0.5 * s.h3.trace() * Mat2::Identity();
  s.h4 -= 0.5 * s.h4.trace() * Mat2::Identity();
  return s;
}

/// Consistent random gradient field: free symmetric dh, traces derived.
inline sff::GradSff random_grad_sff(Rng& rng) {
  std::array<std::array<Mat2, 2>, 2> dh;
  for (int i = 0; i < 2; ++i)
    for (int a = 0; a < 2; ++a) dh[i][a] = random_sym2(rng);
  return sff::grad_sff_from_field(dh);
}

/// Chart point uniform in a box well inside the chart.
inline ambient::ChartPoint random_point(Rng& rng, double box = 0.8) {
  ambient::ChartPoint p;
  for (int i = 0; i < 4; ++i) p.coords[i] = rng.uniform(-box, box);
  return p;
}

inline Vec4 random_vec(Rng& rng, double scale = 1.0) {
  Vec4 v;
  for (int i = 0; i < 4; ++i) v[i] = rng.normal() * scale;
  return v;
}

/// Random adapted frame at a random chart point; retries degenerate draws.
inline frames::AdaptedFrame random_adapted_frame(Rng& rng, const Mat4& g, const Mat4& J) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    const Vec4 t1 = random_vec(rng), t2 = random_vec(rng);
    const Vec4 n1 = random_vec(rng), n2 = random_vec(rng);
    try {
      return frames::adapt_frame(t1, t2, n1, n2, g, J);
    } catch (const DegenerateFrame&) {
      continue;
    }
  }
  throw DegenerateFrame("could not draw a nondegenerate frame in 64 attempts");
}

}  // namespace smcf::sampling
