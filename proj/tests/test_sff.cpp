#include <catch2/catch_amalgamated.hpp>

#include "smcf/sampling.hpp"
#include "smcf/sff.hpp"

using namespace smcf;
using sff::SecondFundamentalForm;

namespace {
SecondFundamentalForm make(double a11, double a12, double a22, double b11, double b12,
                           double b22) {
  SecondFundamentalForm h;
  h.h3 << a11, a12, a12, a22;
  h.h4 << b11, b12, b12, b22;
  return h;
}
}  // namespace

TEST_CASE("invariants: zero tensor") {
  const auto inv = sff::sff_invariants(SecondFundamentalForm{});
  CHECK(inv.normA2 == 0);
  CHECK(inv.normH2 == 0);
  CHECK(inv.nablaBarJ2 == 0);
}

TEST_CASE("invariants: umbilic equality case of the lower bound") {
  const double a = 0.7;
  const auto inv = sff::sff_invariants(make(a, 0, a, 0, 0, 0));
  CHECK(inv.normH2 == Catch::Approx(4 * a * a));
  CHECK(inv.nablaBarJ2 == Catch::Approx(2 * a * a));
  CHECK(inv.normHdot3Sq == Catch::Approx(0.0).margin(1e-15));
}

TEST_CASE("invariants: trace-free example") {
  const auto inv = sff::sff_invariants(make(1, 0, -1, 0, 0, 0));
  CHECK(inv.normH2 == Catch::Approx(0.0).margin(1e-15));
  CHECK(inv.nablaBarJ2 == Catch::Approx(2.0));
  CHECK(inv.normA2 == Catch::Approx(2.0));
}

TEST_CASE("decomposition identity and angle-gradient lower bound, randomized") {
  Rng rng(31);
  double worst = 1e300;
  for (int it = 0; it < 100000; ++it) {
    const auto h = sampling::random_sff(rng);
    const auto inv = sff::sff_invariants(h);
    CHECK(inv.normA2 ==
          Catch::Approx(inv.normHdot3Sq + inv.normHdot4Sq + 0.5 * inv.normH2).margin(1e-12));
    const double slack = inv.nablaBarJ2 - 0.5 * inv.normH2;
    worst = std::min(worst, slack);
  }
  CHECK(worst >= -1e-12);
}

TEST_CASE("reaction terms: worked examples") {
  auto r1 = sff::reaction_terms(make(1, 0, 1, 0, 0, 0));
  CHECK(r1.R1 == Catch::Approx(0.0).margin(1e-14));
  CHECK(r1.R2 == Catch::Approx(4.0));
  CHECK(r1.R3 == Catch::Approx(8.0));

  auto r2 = sff::reaction_terms(make(1, 0, -1, 0, 1, 0));
  CHECK(r2.R1 == Catch::Approx(16.0));
  CHECK(r2.R2 == Catch::Approx(8.0));
  CHECK(r2.R3 == Catch::Approx(0.0).margin(1e-14));

  auto r3 = sff::reaction_terms(make(0, 0, 0, 0, 1, 0));
  CHECK(r3.R1 == Catch::Approx(0.0).margin(1e-14));
  CHECK(r3.R2 == Catch::Approx(4.0));
  CHECK(r3.R3 == Catch::Approx(0.0).margin(1e-14));
}

TEST_CASE("normalize_frame: identity on already-normalized input") {
  const auto out = sff::normalize_frame(make(2, 0, 1, 0.5, 0, -0.5));
  CHECK((out.normal_rot - Mat2::Identity()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((out.tangent_rot - Mat2::Identity()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK_FALSE(out.h_zero_branch);
}

TEST_CASE("normalize_frame: |H| = 0 branch diagonalizes") {
  const auto out = sff::normalize_frame(make(0, 1, 0, 0, 0, 0));
  CHECK(out.h_zero_branch);
  CHECK(out.h.h3(0, 0) == Catch::Approx(1.0));
  CHECK(out.h.h3(1, 1) == Catch::Approx(-1.0));
  CHECK(std::abs(out.h.h3(0, 1)) < 1e-12);
}

TEST_CASE("normalize_frame preserves every scalar invariant") {
  Rng rng(32);
  for (int it = 0; it < 2000; ++it) {
    const auto h = sampling::random_sff(rng);
    const auto out = sff::normalize_frame(h);
    const auto a = sff::sff_invariants(h);
    const auto b = sff::sff_invariants(out.h);
    CHECK(b.normA2 == Catch::Approx(a.normA2).margin(1e-10));
    CHECK(b.normH2 == Catch::Approx(a.normH2).margin(1e-10));
    CHECK(std::abs(b.H[1]) < 1e-10);
    CHECK(b.H[0] >= -1e-12);
    CHECK(std::abs(out.h.h3(0, 1)) < 1e-10);
    CHECK(out.h.h3(0, 0) >= out.h.h3(1, 1) - 1e-12);
    const auto ra = sff::reaction_terms(h);
    const auto rb = sff::reaction_terms(out.h);
    CHECK(rb.R1 == Catch::Approx(ra.R1).margin(1e-9));
    CHECK(rb.R2 == Catch::Approx(ra.R2).margin(1e-9));
    CHECK(rb.R3 == Catch::Approx(ra.R3).margin(1e-9));
  }
}

TEST_CASE("rotation invariance of the angle-gradient norm under joint rotations") {
  // |bar-nabla J|^2 is invariant under simultaneous tangent and normal SO(2)
  // rotations by the same angle composition used by normalize_frame only when
  // the rotations implement a frame change; check via normalize_frame output.
  Rng rng(33);
  for (int it = 0; it < 2000; ++it) {
    const auto h = sampling::random_sff(rng);
    const auto out = sff::normalize_frame(h);
    // tangent rotation by t paired with normal rotation by 2t fixes nbJ2
    // (frame change e1+ie2 -> e^{it}(e1+ie2), e3+ie4 -> e^{2it}(e3+ie4));
    // normalize_frame uses independent rotations, so check A2/H2 only here.
    const auto a = sff::sff_invariants(h);
    const auto b = sff::sff_invariants(out.h);
    CHECK(a.normA2 == Catch::Approx(b.normA2).margin(1e-10));
  }
}

TEST_CASE("reaction bound (mean curvature nonzero): equality case and oracle") {
  const auto eq = sff::reaction_bound_3_11(make(2, 0, 0, 0, 1, 0));
  CHECK(eq.lhs == Catch::Approx(152.0 / 3.0).margin(1e-10));
  CHECK(eq.rhs == Catch::Approx(152.0 / 3.0).margin(1e-10));

  CHECK_THROWS_AS(sff::reaction_bound_3_11(make(1, 0, -1, 0, 0, 0)), WrongBranch);
  CHECK_THROWS_AS(sff::reaction_bound_3_11(make(1, 0.5, 2, 0, 0, 0)), InvalidInput);

  Rng rng(34);
  double worst = 1e300;
  for (int it = 0; it < 100000; ++it) {
    const auto h = sampling::random_sff(rng);
    const auto out = sff::normalize_frame(h);
    if (out.h_zero_branch) continue;
    const auto b = sff::reaction_bound_3_11(out.h);
    worst = std::min(worst, b.rhs - b.lhs);
  }
  CHECK(worst >= -1e-10);
}

TEST_CASE("diagonal one-direction family satisfies the reaction bound") {
  for (double l1 = -3; l1 <= 3; l1 += 0.25)
    for (double l2 = -3; l2 <= 3; l2 += 0.25) {
      if (std::abs(l1 + l2) < 1e-9) continue;
      SecondFundamentalForm h = make(l1, 0, l2, 0, 0, 0);
      if (l1 + l2 < 0) {  // normalized frame needs H^3 = |H| > 0
        h.h3 = -h.h3;
      }
      if (h.h3(0, 0) < h.h3(1, 1)) std::swap(h.h3(0, 0), h.h3(1, 1));
      const auto b = sff::reaction_bound_3_11(h);
      CHECK(b.lhs <= b.rhs + 1e-10);
    }
}

TEST_CASE("trace-free bound: equality case and randomized oracle") {
  const auto eq = sff::cdk_bound_3_12(make(1, 0, -1, 0, 1, 0));
  CHECK(eq.lhs == Catch::Approx(48.0));
  CHECK(eq.rhs == Catch::Approx(48.0));

  const auto z = sff::cdk_bound_3_12(SecondFundamentalForm{});
  CHECK(z.lhs == 0);
  CHECK(z.rhs == 0);

  Rng rng(35);
  double worst = 1e300;
  for (int it = 0; it < 100000; ++it) {
    const auto h = sampling::random_traceless_sff(rng);
    const auto b = sff::cdk_bound_3_12(h);
    worst = std::min(worst, b.rhs - b.lhs);
  }
  CHECK(worst >= -1e-10);
}

TEST_CASE("curvature reaction terms: reduced forms match direct contraction") {
  Rng rng(36);
  const double k = 1.3;
  for (int it = 0; it < 500; ++it) {
    const auto h = sampling::random_sff(rng);
    const double x = rng.uniform(-1, 1);
    const double phi = rng.uniform(0, 2 * M_PI);
    const double s = std::sqrt(std::max(0.0, 1 - x * x));
    const Mat4 Jf = frames::j_matrix(x, s * std::cos(phi), s * std::sin(phi),
                                     frames::JForm::Form32);
    const auto K = ambient::model_curvature_tensor(Jf, k);
    const auto t = sff::curvature_reaction_terms(h, x, k);

    auto hc = [&](int al, int i, int j) { return (al == 2 ? h.h3 : h.h4)(i, j); };
    double T1 = 0, T2 = 0, T3 = 0, T4 = 0;
    for (int al = 2; al < 4; ++al)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          for (int l = 0; l < 2; ++l)
            for (int kk = 0; kk < 2; ++kk) {
              T1 += -4 * K(l, i, j, kk) * hc(al, l, kk) * hc(al, i, j);
              T3 += -4 * K(l, kk, i, kk) * hc(al, l, j) * hc(al, i, j);
            }
          for (int be = 2; be < 4; ++be)
            for (int kk = 0; kk < 2; ++kk)
              T2 += 8 * K(al, be, j, kk) * hc(be, i, kk) * hc(al, i, j);
          for (int be = 2; be < 4; ++be) {
            double ric = 0;
            for (int kk = 0; kk < 4; ++kk) ric += K(al, kk, be, kk);
            double tang = 0;
            for (int kk = 0; kk < 2; ++kk) tang += K(al, kk, be, kk);
            (void)ric;
            T4 += 2 * tang * hc(be, i, j) * hc(al, i, j);
          }
        }
    // T4's reduced form folds in the Einstein identity: sum over tangent k of
    // K_{a k b k} = (3k/2) delta_{ab} - sum over normal k.
    CHECK(t.T1 == Catch::Approx(T1).margin(1e-8));
    CHECK(t.T2 == Catch::Approx(T2).margin(1e-8));
    CHECK(t.T3 == Catch::Approx(T3).margin(1e-8));
    CHECK(t.T4 == Catch::Approx(T4).margin(1e-8));
  }
}

TEST_CASE("curvature reaction terms: special cases") {
  const auto z = sff::curvature_reaction_terms(SecondFundamentalForm{}, 0.5, 1.0);
  CHECK(z.T1 == 0);
  CHECK(z.T2 == 0);
  CHECK(z.T3 == 0);
  CHECK(z.T4 == 0);
  Rng rng(37);
  for (int it = 0; it < 10; ++it) {
    const auto h = sampling::random_sff(rng);
    const auto t = sff::curvature_reaction_terms(h, 1.0 / std::sqrt(3.0), 2.0);
    CHECK(std::abs(t.T2) < 1e-12);
  }
}

TEST_CASE("gradient decomposition: orthogonality, Pythagoras, inequality") {
  Rng rng(38);
  CHECK_THROWS_AS(sff::grad_decomposition(sff::GradSff{}, 2, 0.0), InvalidInput);
  CHECK_THROWS_AS(sff::grad_decomposition(sff::GradSff{}, 3, 0.1), InvalidInput);

  const auto z = sff::grad_decomposition(sff::GradSff{}, 2, 0.3);
  CHECK(z.normE2 == 0);
  CHECK(z.normGrad2 >= z.bound_rhs);

  for (int it = 0; it < 10000; ++it) {
    const auto g = sampling::random_grad_sff(rng);
    const double eta = rng.uniform(1e-3, 1.0);
    const auto d = sff::grad_decomposition(g, 2, eta);
    CHECK(std::abs(d.inner_EF) < 1e-9);
    CHECK(d.normGrad2 == Catch::Approx(d.normE2 + d.normF2).margin(1e-9));
    CHECK(d.normGrad2 >= d.bound_rhs - 1e-9);
  }
}

TEST_CASE("gradient decomposition: eta = 1/12 coefficients") {
  Rng rng(39);
  const auto g = sampling::random_grad_sff(rng);
  const auto d = sff::grad_decomposition(g, 2, 1.0 / 12.0);
  double nH2 = 0, nW2 = 0;
  for (int a = 0; a < 2; ++a) {
    nH2 += g.dH[a].squaredNorm();
    nW2 += g.w[a].squaredNorm();
  }
  CHECK(d.bound_rhs == Catch::Approx((2.0 / 3.0) * nH2 - 2.0 * nW2).margin(1e-10));
}

TEST_CASE("composed angle-gradient estimate with the curvature trace norm") {
  // (2/3)|grad H|^2 - |grad A|^2 <= 2 |w|^2 = (9k^2/4) cos^2 a sin^2 a when
  // the traced-Codazzi defect w carries the curvature-trace magnitude.
  Rng rng(40);
  const double k = 1.1;
  for (int it = 0; it < 2000; ++it) {
    auto g = sampling::random_grad_sff(rng);
    double nW2 = g.w[0].squaredNorm() + g.w[1].squaredNorm();
    if (nW2 < 1e-12) continue;
    const double x = rng.uniform(-1, 1);
    const double target = frames::w_norm_sq(x, k);
    const double s = std::sqrt(target / nW2);
    for (int i = 0; i < 2; ++i)
      for (int a = 0; a < 2; ++a) g.dh[i][a] *= s;
    const auto gs = sff::grad_sff_from_field(g.dh);
    const auto d = sff::grad_decomposition(gs, 2, 1.0 / 12.0);
    double nH2 = 0;
    for (int a = 0; a < 2; ++a) nH2 += gs.dH[a].squaredNorm();
    const double lhs = (2.0 / 3.0) * nH2 - d.normGrad2;
    CHECK(lhs <= (9 * k * k / 4.0) * x * x * (1 - x * x) + 1e-9);
  }
}
