#pragma once

// Pinching quantities Q, their angle thresholds, the non-Laplacian right-hand
// sides of the Q evolution bounds, exact-rational threshold certification, and
// the auxiliary-function conditions used in the growth/decay estimates.

#include <cmath>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "smcf/core.hpp"
#include "smcf/sff.hpp"

namespace smcf::pinching {

using Rational = boost::rational<long long>;

enum class Variant { Thm32, Thm51, YangFamily };

struct PinchingSpec {
  Variant variant = Variant::Thm32;
  double b = 0.5;       // Thm32: 1/2, Thm51: 4/5
  double lambda = 2.0 / 3.0;  // YangFamily only, in [1/2, 2/3]
  double k = 1.0;

  static PinchingSpec thm32(double k) { return {Variant::Thm32, 0.5, 2.0 / 3.0, k}; }
  static PinchingSpec thm51(double k) { return {Variant::Thm51, 0.8, 2.0 / 3.0, k}; }
  static PinchingSpec yang(double lambda, double k) {
    return {Variant::YangFamily, 0.5, lambda, k};
  }
};

inline void validate(const PinchingSpec& s) {
  if (!(s.k > 0)) throw InvalidSpec("pinching spec requires k > 0");
  switch (s.variant) {
    case Variant::Thm32:
      if (std::abs(s.b - 0.5) > 1e-12) throw InvalidSpec("Thm32 variant requires b = 1/2");
      break;
    case Variant::Thm51:
      if (std::abs(s.b - 0.8) > 1e-12) throw InvalidSpec("Thm51 variant requires b = 4/5");
      break;
    case Variant::YangFamily:
      if (!(s.lambda >= 0.5 - 1e-12 && s.lambda <= 2.0 / 3.0 + 1e-12))
        throw InvalidSpec("YangFamily variant requires lambda in [1/2, 2/3]");
      break;
  }
}

/// Q = |A|^2 - (2/3)|H|^2 - b k           (Thm32)
///     |A|^2 - (2/3)|H|^2 - b k cos(alpha) (Thm51)
///     |A|^2 - lambda |H|^2 - ((2 lambda - 1)/lambda) k  (YangFamily)
inline double q_value(const sff::SffInvariants& inv, double x, const PinchingSpec& s) {
  validate(s);
  if (std::abs(x) > 1.0 + 1e-12) throw InvalidInput("cos(alpha) must lie in [-1,1]");
  switch (s.variant) {
    case Variant::Thm32:
      return inv.normA2 - (2.0 / 3.0) * inv.normH2 - s.b * s.k;
    case Variant::Thm51:
      return inv.normA2 - (2.0 / 3.0) * inv.normH2 - s.b * s.k * x;
    case Variant::YangFamily:
      return inv.normA2 - s.lambda * inv.normH2 - ((2.0 * s.lambda - 1.0) / s.lambda) * s.k;
  }
  throw InvalidSpec("unknown variant");
}

/// Admissibility threshold on min cos(alpha).
inline double angle_threshold(const PinchingSpec& s) {
  validate(s);
  switch (s.variant) {
    case Variant::Thm32:
      return std::sqrt(30.0) / 6.0;
    case Variant::Thm51:
      return 251.0 / 265.0;
    case Variant::YangFamily:
      return std::sqrt((7.0 * s.lambda - 3.0) / (3.0 * s.lambda));
  }
  throw InvalidSpec("unknown variant");
}

enum class ThresholdCase { Thm51_Hnonzero, Thm51_Hzero, Thm32_b, Thm32_angle };

/// Exact-arithmetic certificate for one threshold constant.
struct ThresholdReport {
  ThresholdCase which;
  std::string tag;
  // quadratic A c^2 + B c + C (exact), whose relevant root bounds the admissible region
  Rational A, B, C;
  long double root;        // numeric root (the admissibility boundary)
  Rational paper_bound;    // the certified rational constant
  long double margin;      // paper_bound - root (>= 0 certifies the bound)
  Rational cert_value;     // exact sign certificate: quadratic evaluated at paper_bound
};

namespace detail {

inline long double to_ld(const Rational& r) {
  return static_cast<long double>(r.numerator()) / static_cast<long double>(r.denominator());
}

// Larger root of A c^2 + B c + C with A > 0.
inline long double quad_root(const Rational& A, const Rational& B, const Rational& C) {
  const long double a = to_ld(A), b = to_ld(B), c = to_ld(C);
  return (-b + std::sqrt(b * b - 4 * a * c)) / (2 * a);
}

inline Rational eval_quad(const Rational& A, const Rational& B, const Rational& C,
                          const Rational& c) {
  return A * c * c + B * c + C;
}

}  // namespace detail

/// Re-derive a pinching threshold and certify the published rational constant
/// against it with exact arithmetic.
inline ThresholdReport threshold_solve(ThresholdCase which) {
  ThresholdReport r;
  r.which = which;
  switch (which) {
    case ThresholdCase::Thm51_Hnonzero: {
      // 33 b^2 c^2 - 56 b c + 16 + 72 (1 - c^2) <= 0 at b = 4/5, cleared of
      // denominators and sign-normalized: 159 c^2 + 140 c - 275 >= 0.
      r.tag = "mean-curvature-nonzero angle threshold (cos a >= 251/265)";
      r.A = Rational(159);
      r.B = Rational(140);
      r.C = Rational(-275);
      r.paper_bound = Rational(251, 265);
      break;
    }
    case ThresholdCase::Thm51_Hzero: {
      // (9/2)(1 - c^2) - (12/5) c + (48/25) c^2 <= 0, cleared and normalized:
      // 43 c^2 + 40 c - 75 >= 0.
      r.tag = "mean-curvature-zero angle threshold (cos a >= 121/129)";
      r.A = Rational(43);
      r.B = Rational(40);
      r.C = Rational(-75);
      r.paper_bound = Rational(121, 129);
      break;
    }
    case ThresholdCase::Thm32_b: {
      // 3 b^2 - (7/2) b + 1 <= 0 intersected with b <= 1/2: exactly b = 1/2.
      r.tag = "pinching constant b = 1/2";
      r.A = Rational(6);  // cleared of halves: 6 b^2 - 7 b + 2, roots 1/2 and 2/3
      r.B = Rational(-7);
      r.C = Rational(2);
      r.paper_bound = Rational(1, 2);
      r.root = 0.5L;  // smaller root; intersection with b <= 1/2
      r.margin = detail::to_ld(r.paper_bound) - r.root;
      r.cert_value = detail::eval_quad(r.A, r.B, r.C, r.paper_bound);
      return r;
    }
    case ThresholdCase::Thm32_angle: {
      // (9/2)(1 - c2) - 3/4 <= 0 in c2 = cos^2(alpha): 6 c2 - 5 >= 0, c2 >= 5/6.
      r.tag = "angle threshold cos^2 a >= 5/6";
      r.A = Rational(0);
      r.B = Rational(6);
      r.C = Rational(-5);
      r.paper_bound = Rational(5, 6);
      r.root = 5.0L / 6.0L;
      r.margin = 0;
      r.cert_value = detail::eval_quad(r.A, r.B, r.C, r.paper_bound);
      return r;
    }
  }
  r.root = detail::quad_root(r.A, r.B, r.C);
  r.margin = detail::to_ld(r.paper_bound) - r.root;
  r.cert_value = detail::eval_quad(r.A, r.B, r.C, r.paper_bound);
  return r;
}

inline std::vector<ThresholdReport> all_threshold_reports() {
  return {threshold_solve(ThresholdCase::Thm32_b),
          threshold_solve(ThresholdCase::Thm32_angle),
          threshold_solve(ThresholdCase::Thm51_Hnonzero),
          threshold_solve(ThresholdCase::Thm51_Hzero)};
}

enum class Branch { Hnonzero, Hzero };

/// Structured right-hand side of d/dt Q <= Delta Q + rhs:
///   rhs = -6 Q^2 + bracket * Q + remainder_main + square_term.
/// square_term is the completed square (always <= 0), reported separately
/// because the admissibility claim is remainder_main <= 0.
struct ReactionRhs {
  double q;
  double quadratic;       // -6 Q^2
  double bracket;         // coefficient of Q
  double remainder_main;  // <= 0 for admissible (x, b)
  double square_term;     // -(...)^2 <= 0
  double total() const { return quadratic + bracket * q + remainder_main + square_term; }
};

inline ReactionRhs reaction_rhs(const sff::SecondFundamentalForm& h, double x,
                                const PinchingSpec& s, Branch branch) {
  validate(s);
  if (s.variant == Variant::YangFamily)
    throw InvalidSpec(
        "no evolution bound is provided for the general lambda family; "
        "use Thm32 (equivalent at lambda = 2/3)");
  const sff::SffInvariants inv = sff::sff_invariants(h);
  const bool h_is_zero = inv.normH2 < 1e-16;
  if ((branch == Branch::Hzero) != h_is_zero)
    throw WrongBranch("reaction_rhs branch does not match |H| of the input");

  const double k = s.k, b = s.b;
  const double h3 = inv.normHdot3Sq, h4 = inv.normHdot4Sq;
  const double x2 = x * x, s2 = 1.0 - x2;
  ReactionRhs r{};
  r.q = q_value(inv, x, s);
  r.quadratic = -6.0 * r.q * r.q;

  if (s.variant == Variant::Thm32) {
    if (branch == Branch::Hnonzero) {
      r.bracket = 8 * h3 + 12 * h4 - 12 * b * k + 3 * k - (3 * k / 2) * (x2 + 1);
      r.remainder_main = 4 * k * (2 * b - 1) * h3 + k * k * (3 * b * b - 3.5 * b + 1) +
                         k * k * x2 * (4.5 * s2 - 1.5 * b);
      const double sq = 2 * h4 - k * (3 * b - 1);
      r.square_term = -sq * sq;
    } else {
      r.bracket = 3 * (inv.normA2 + b * k) - (3 * k / 2) * (x2 + 1);
      r.remainder_main = 3 * b * k * k * (b - 0.5) + k * k * x2 * (4.5 * s2 - 1.5 * b);
      r.square_term = 0;
    }
  } else {  // Thm51
    if (branch == Branch::Hnonzero) {
      r.bracket = 8 * h3 + 12 * h4 - 9 * b * k * x + 3 * k - (k / 2) * (3 * x2 + 1);
      r.remainder_main = k * (5 * b * x - 4) * h3 +
                         (k * k / 16) * (33 * b * b * x2 - 56 * b * x + 16 + 72 * x2 * s2);
      const double sq = 2 * h4 - (k / 4) * (9 * b * x - 4);
      r.square_term = -sq * sq;
    } else {
      r.bracket = 3 * inv.normA2 + 3 * b * k * x - k - (k / 2) * (3 * x2 + 1);
      r.remainder_main = 4.5 * k * k * s2 * x2 - 3 * b * k * k * x + 3 * b * b * k * k * x2;
      r.square_term = 0;
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Auxiliary functions for the |H|^2 growth and angle decay estimates.  On the
// domain [sqrt(30)/6, 1] a weight f > 0 must satisfy
//   C1: (4/3) f - (1/12)(sqrt(30) f' - f'') <= 0
//   C2: sqrt(30) f' - f'' >= 0.

enum class AuxKind { Exp, Linear, Custom };

struct AuxSample {
  double x, f, fp, fpp;
};

struct AuxFunctionSpec {
  AuxKind kind = AuxKind::Exp;
  std::vector<AuxSample> table;  // Custom only; must cover the domain

  static AuxFunctionSpec exp_form() { return {AuxKind::Exp, {}}; }
  static AuxFunctionSpec linear_form() { return {AuxKind::Linear, {}}; }
  static AuxFunctionSpec custom(std::vector<AuxSample> t) {
    return {AuxKind::Custom, std::move(t)};
  }
};

struct AuxReport {
  bool cond1_ok = true, cond2_ok = true;
  double max_violation1 = 0, max_violation2 = 0;  // positive = violated by that much
  double sup_f = 0, inf_f = 0;                    // range of f over the domain
  bool pass() const { return cond1_ok && cond2_ok; }
};

inline AuxSample aux_eval(AuxKind kind, double x) {
  AuxSample s{x, 0, 0, 0};
  if (kind == AuxKind::Exp) {
    // f = exp(-8 x^2 + 20 x), f' = (-16 x + 20) f, f'' = (-16 + (-16x+20)^2) f
    const double g = -16 * x + 20;
    s.f = std::exp(-8 * x * x + 20 * x);
    s.fp = g * s.f;
    s.fpp = (g * g - 16) * s.f;
  } else if (kind == AuxKind::Linear) {
    s.f = x - 0.75;
    s.fp = 1;
    s.fpp = 0;
  } else {
    throw InvalidInput("aux_eval: custom tables carry their own values");
  }
  return s;
}

inline AuxReport auxiliary_function_check(const AuxFunctionSpec& spec, int grid_n) {
  if (grid_n < 2) throw InvalidInput("auxiliary_function_check requires grid_n >= 2");
  const double lo = std::sqrt(30.0) / 6.0, hi = 1.0;

  std::vector<AuxSample> samples;
  if (spec.kind == AuxKind::Custom) {
    if (spec.table.empty()) throw InvalidInput("empty custom table");
    double xmin = spec.table.front().x, xmax = spec.table.front().x;
    for (const auto& s : spec.table) {
      xmin = std::min(xmin, s.x);
      xmax = std::max(xmax, s.x);
    }
    if (xmin > lo + 1e-9 || xmax < hi - 1e-9)
      throw InvalidInput("custom table does not cover the admissible angle domain");
    samples = spec.table;
  } else {
    samples.reserve(grid_n);
    for (int i = 0; i < grid_n; ++i)
      samples.push_back(aux_eval(spec.kind, lo + (hi - lo) * i / (grid_n - 1)));
  }

  AuxReport rep;
  rep.sup_f = samples.front().f;
  rep.inf_f = samples.front().f;
  for (const auto& s : samples) {
    const double d = std::sqrt(30.0) * s.fp - s.fpp;
    const double v1 = (4.0 / 3.0) * s.f - d / 12.0;  // must be <= 0
    const double v2 = -d;                            // must be <= 0
    rep.max_violation1 = std::max(rep.max_violation1, v1);
    rep.max_violation2 = std::max(rep.max_violation2, v2);
    rep.sup_f = std::max(rep.sup_f, s.f);
    rep.inf_f = std::min(rep.inf_f, s.f);
  }
  const double tol = 1e-10;
  rep.cond1_ok = rep.max_violation1 <= tol;
  rep.cond2_ok = rep.max_violation2 <= tol;
  return rep;
}

}  // namespace smcf::pinching
