#pragma once

// Pointwise second-fundamental-form algebra in an adapted frame: scalar
// invariants, the reaction terms R1/R2/R3 and their bounds, the curvature
// reaction terms of the pinching-evolution computation, and the gradient
// decomposition nabla A = E + F.

#include <array>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "smcf/core.hpp"
#include "smcf/frames.hpp"

namespace smcf::sff {

/// h^a_{ij}, a in {3,4} (normal index), i,j in {1,2} (tangent), symmetric in i,j.
struct SecondFundamentalForm {
  Mat2 h3 = Mat2::Zero();
  Mat2 h4 = Mat2::Zero();

  const Mat2& h(int alpha) const { return alpha == 3 ? h3 : h4; }
  Mat2& h(int alpha) { return alpha == 3 ? h3 : h4; }
};

struct SffInvariants {
  Vec2 H;            // (H^3, H^4)
  double normH2;     // |H|^2
  double normA2;     // |A|^2
  Mat2 hdot3, hdot4; // traceless parts
  double normHdot3Sq, normHdot4Sq;
  double nablaBarJ2; // |bar-nabla J|^2 restricted to the surface
};

inline double frob2(const Mat2& m) { return m.cwiseProduct(m).sum(); }

inline SffInvariants sff_invariants(const SecondFundamentalForm& s) {
  SffInvariants inv;
  inv.H = Vec2(s.h3.trace(), s.h4.trace());
  inv.normH2 = inv.H.squaredNorm();
  inv.normA2 = frob2(s.h3) + frob2(s.h4);
  inv.hdot3 = s.h3 - 0.5 * inv.H[0] * Mat2::Identity();
  inv.hdot4 = s.h4 - 0.5 * inv.H[1] * Mat2::Identity();
  inv.normHdot3Sq = frob2(inv.hdot3);
  inv.normHdot4Sq = frob2(inv.hdot4);
  inv.nablaBarJ2 = 0;
  for (int kk = 0; kk < 2; ++kk) {
    inv.nablaBarJ2 += std::pow(s.h3(0, kk) - s.h4(1, kk), 2);
    inv.nablaBarJ2 += std::pow(s.h3(1, kk) + s.h4(0, kk), 2);
  }
  return inv;
}

struct ReactionTerms {
  double R1, R2, R3;
};

inline ReactionTerms reaction_terms(const SecondFundamentalForm& s) {
  ReactionTerms r{0, 0, 0};
  for (int a = 3; a <= 4; ++a)
    for (int b = 3; b <= 4; ++b) {
      const Mat2 comm = s.h(a) * s.h(b) - s.h(b) * s.h(a);
      r.R1 += frob2(comm);
      r.R2 += std::pow(s.h(a).cwiseProduct(s.h(b)).sum(), 2);
    }
  const Vec2 H(s.h3.trace(), s.h4.trace());
  r.R3 = frob2(H[0] * s.h3 + H[1] * s.h4);
  return r;
}

struct NormalizedSff {
  SecondFundamentalForm h;
  Mat2 tangent_rot = Mat2::Identity();  // h_new = R^T h_old R
  Mat2 normal_rot = Mat2::Identity();   // (h3,h4)_new = N (h3,h4)_old
  bool h_zero_branch = false;
};

namespace detail {

// Tangent SO(2) rotation diagonalizing a symmetric 2x2 matrix, eigenvalues
// sorted descending, first column with nonnegative leading entry.
inline Mat2 diagonalizing_rotation(const Mat2& m) {
  Eigen::SelfAdjointEigenSolver<Mat2> es(m);
  Mat2 V = es.eigenvectors();
  V.col(0).swap(V.col(1));  // ascending -> descending eigenvalue order
  if (V(0, 0) < 0) V.col(0) = -V.col(0);
  if (V.determinant() < 0) V.col(1) = -V.col(1);
  return V;
}

}  // namespace detail

/// Rotate the normal frame so e3 = H/|H| and the tangent frame so h^3 is
/// diagonal (eigenvalues descending).  At |H| = 0 only the tangent
/// diagonalization is performed and the result is flagged.
inline NormalizedSff normalize_frame(const SecondFundamentalForm& s,
                                     double h_zero_tol = 1e-12) {
  NormalizedSff out;
  const Vec2 H(s.h3.trace(), s.h4.trace());
  const double Hn = H.norm();

  Mat2 h3r = s.h3, h4r = s.h4;
  if (Hn > h_zero_tol) {
    const double c = H[0] / Hn, sn = H[1] / Hn;
    out.normal_rot << c, sn, -sn, c;
    h3r = c * s.h3 + sn * s.h4;
    h4r = -sn * s.h3 + c * s.h4;
  } else {
    out.h_zero_branch = true;
  }
  out.tangent_rot = detail::diagonalizing_rotation(h3r);
  out.h.h3 = out.tangent_rot.transpose() * h3r * out.tangent_rot;
  out.h.h4 = out.tangent_rot.transpose() * h4r * out.tangent_rot;
  // clean the rotation residue on the diagonalized slot
  out.h.h3(0, 1) = out.h.h3(1, 0) = 0.5 * (out.h.h3(0, 1) + out.h.h3(1, 0));
  return out;
}

struct BoundCheck {
  double lhs, rhs;
};

/// Reaction bound in the normalized frame at |H| != 0:
///   2 R1 + 2 R2 - (4/3) R3 <= 2|h.3|^4 + 2|h.4|^4 + (2/3)|h.3|^2 |H|^2
///                             - (1/6)|H|^4 + 8 |h.3|^2 |h.4|^2.
inline BoundCheck reaction_bound_3_11(const SecondFundamentalForm& s) {
  const SffInvariants inv = sff_invariants(s);
  if (inv.normH2 < 1e-20)
    throw WrongBranch("reaction_bound_3_11 requires |H| != 0; use cdk_bound_3_12");
  if (std::abs(inv.H[1]) > 1e-8 * (1.0 + std::abs(inv.H[0])) ||
      std::abs(s.h3(0, 1)) > 1e-8)
    throw InvalidInput("reaction_bound_3_11 expects a normalized frame");
  const ReactionTerms r = reaction_terms(s);
  BoundCheck b;
  b.lhs = 2 * r.R1 + 2 * r.R2 - (4.0 / 3.0) * r.R3;
  b.rhs = 2 * inv.normHdot3Sq * inv.normHdot3Sq + 2 * inv.normHdot4Sq * inv.normHdot4Sq +
          (2.0 / 3.0) * inv.normHdot3Sq * inv.normH2 - (1.0 / 6.0) * inv.normH2 * inv.normH2 +
          8 * inv.normHdot3Sq * inv.normHdot4Sq;
  return b;
}

/// Chern-do Carmo-Kobayashi-type bound, stated at |H| = 0:
///   2 R1 + 2 R2 <= 3 |A|^4.
inline BoundCheck cdk_bound_3_12(const SecondFundamentalForm& s) {
  const ReactionTerms r = reaction_terms(s);
  const SffInvariants inv = sff_invariants(s);
  return {2 * r.R1 + 2 * r.R2, 3 * inv.normA2 * inv.normA2};
}

struct CurvatureReactionTerms {
  double T1, T2, T3, T4;
};

/// The four curvature contractions of the |A|^2 evolution, reduced to the
/// frame scalars:
///   T1 = -4 K1212 (|A|^2 - |H|^2)         T2 = 8 K1234 (|A|^2 - |bar-nabla J|^2)
///   T3 = -4 K1212 |A|^2                   T4 = 3k |A|^2 - 2 K3434 |A|^2
inline CurvatureReactionTerms curvature_reaction_terms(const SecondFundamentalForm& s,
                                                       double x, double k) {
  const auto sc = frames::frame_curvature_scalars(x, k);
  const SffInvariants inv = sff_invariants(s);
  CurvatureReactionTerms t;
  t.T1 = -4 * sc.K1212 * (inv.normA2 - inv.normH2);
  t.T2 = 8 * sc.K1234 * (inv.normA2 - inv.nablaBarJ2);
  t.T3 = -4 * sc.K1212 * inv.normA2;
  t.T4 = 3 * k * inv.normA2 - 2 * sc.K3434 * inv.normA2;
  return t;
}

/// nabla h with its traces: dh[i][a][j][k] (a = 0 for normal direction 3,
/// 1 for direction 4), symmetric in (j,k).
struct GradSff {
  std::array<std::array<Mat2, 2>, 2> dh{};  // dh[i][a]
  std::array<Vec2, 2> dH{};                 // dH[a][i]
  std::array<Vec2, 2> w{};                  // w[a][i]
};

/// Fill in the trace fields from dh itself: dH_i^a = sum_j dh_i{jj}^a and
/// w_i^a = sum_j dh_j{ji}^a - dH_i^a (the traced-Codazzi defect).
inline GradSff grad_sff_from_field(const std::array<std::array<Mat2, 2>, 2>& dh) {
  GradSff g;
  g.dh = dh;
  for (int a = 0; a < 2; ++a)
    for (int i = 0; i < 2; ++i) {
      g.dH[a][i] = dh[i][a].trace();
      double div = 0;
      for (int j = 0; j < 2; ++j) div += dh[j][a](j, i);
      g.w[a][i] = div - g.dH[a][i];
    }
  return g;
}

struct GradDecomposition {
  std::array<std::array<Mat2, 2>, 2> E{}, F{};
  double normE2 = 0, normF2 = 0, normGrad2 = 0;
  double inner_EF = 0;
  double bound_rhs = 0;  // right-hand side of the gradient inequality
};

/// Decompose nabla A into its trace part E and remainder F and evaluate the
/// gradient inequality
///   |nabla A|^2 >= (3/(n+2) - eta)|nabla H|^2
///                  - (2/(n+2)) ((2/(n+2)) eta^-1 - n/(n-1)) |w|^2.
inline GradDecomposition grad_decomposition(const GradSff& g, int n, double eta) {
  if (!(eta > 0)) throw InvalidInput("grad_decomposition requires eta > 0");
  if (n != 2) throw InvalidInput("grad_decomposition: only the surface case n = 2");
  const double c1 = 1.0 / (n + 2);
  const double c2 = 2.0 / ((n + 2) * (n - 1));
  const double c3 = double(n) / ((n + 2) * (n - 1));

  GradDecomposition out;
  double normDH2 = 0, normW2 = 0;
  for (int a = 0; a < 2; ++a) {
    normDH2 += g.dH[a].squaredNorm();
    normW2 += g.w[a].squaredNorm();
  }
  auto del = [](int i, int j) { return i == j ? 1.0 : 0.0; };
  for (int i = 0; i < 2; ++i)
    for (int a = 0; a < 2; ++a)
      for (int j = 0; j < 2; ++j)
        for (int kk = 0; kk < 2; ++kk) {
          const double e =
              c1 * (g.dH[a][i] * del(j, kk) + g.dH[a][j] * del(i, kk) +
                    g.dH[a][kk] * del(i, j)) -
              c2 * g.w[a][i] * del(j, kk) + c3 * (g.w[a][j] * del(i, kk) + g.w[a][kk] * del(i, j));
          out.E[i][a](j, kk) = e;
          out.F[i][a](j, kk) = g.dh[i][a](j, kk) - e;
          out.normE2 += e * e;
          out.normF2 += out.F[i][a](j, kk) * out.F[i][a](j, kk);
          out.normGrad2 += g.dh[i][a](j, kk) * g.dh[i][a](j, kk);
          out.inner_EF += e * out.F[i][a](j, kk);
        }
  out.bound_rhs = (3.0 * c1 - eta) * normDH2 - (2.0 * c1) * ((2.0 * c1) / eta - double(n) / (n - 1)) * normW2;
  return out;
}

}  // namespace smcf::sff
