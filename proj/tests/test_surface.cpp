#include <catch2/catch_amalgamated.hpp>

#include "smcf/surface.hpp"

using namespace smcf;
using surface::Family;
using surface::SurfaceConfig;

namespace {
SurfaceConfig base(Family f, int n = 33) {
  SurfaceConfig c;
  c.family = f;
  c.Nu = c.Nv = n;
  c.k = 1.0;
  c.c = 0.3;
  return c;
}
}  // namespace

TEST_CASE("build validation") {
  SurfaceConfig c = base(Family::ComplexLine);
  c.Nu = 4;
  CHECK_THROWS_AS(surface::build_surface(c), BuildError);
  c = base(Family::ComplexLine);
  c.u1 = c.u0;
  CHECK_THROWS_AS(surface::build_surface(c), BuildError);
  c = base(Family::ComplexLine);
  c.k = -1;
  CHECK_THROWS_AS(surface::build_surface(c), BuildError);
}

TEST_CASE("complex-line patch: holomorphic, totally geodesic") {
  const auto S = surface::build_surface(base(Family::ComplexLine));
  const auto F = surface::compute_fields(S);
  for (const auto& n : F.nodes) {
    if (!n.valid) continue;
    CHECK(n.cos_alpha == Catch::Approx(1.0).margin(1e-10));
    CHECK(n.A2 < 1e-10);
    CHECK(n.H2 < 1e-10);
  }
}

TEST_CASE("real slice patch: totally real, totally geodesic") {
  const auto S = surface::build_surface(base(Family::Lagrangian));
  const auto F = surface::compute_fields(S);
  for (const auto& n : F.nodes) {
    if (!n.valid) continue;
    CHECK(std::abs(n.cos_alpha) < 1e-10);
    CHECK(n.H2 < 1e-10);
  }
}

TEST_CASE("holomorphic graph: minimal but curved") {
  const auto S = surface::build_surface(base(Family::HolomorphicGraph));
  const auto F = surface::compute_fields(S);
  double maxH2 = 0, maxA2 = 0, min_cos = 1;
  for (const auto& n : F.nodes) {
    if (!n.valid) continue;
    maxH2 = std::max(maxH2, n.H2);
    maxA2 = std::max(maxA2, n.A2);
    min_cos = std::min(min_cos, n.cos_alpha);
  }
  CHECK(maxH2 < 1e-12);  // quadratic embedding: stencils are exact
  CHECK(maxA2 > 0.05);
  CHECK(min_cos == Catch::Approx(1.0).margin(1e-8));
}

TEST_CASE("perturbed graph: small non-holomorphic bump keeps the angle high") {
  SurfaceConfig c = base(Family::PerturbedGraph, 49);
  c.eps = 0.05;
  c.bump_width = 0.5;
  const auto S = surface::build_surface(c);
  const auto F = surface::compute_fields(S);
  double min_cos = 1, maxH2 = 0;
  for (const auto& n : F.nodes) {
    if (!n.valid) continue;
    min_cos = std::min(min_cos, n.cos_alpha);
    maxH2 = std::max(maxH2, n.H2);
  }
  CHECK(min_cos > std::sqrt(30.0) / 6.0);
  CHECK(min_cos < 1.0 - 1e-6);
  CHECK(maxH2 > 1e-6);  // genuinely non-minimal
}

TEST_CASE("angle field matches the frame x and flips with orientation") {
  const auto S = surface::build_surface(base(Family::HolomorphicGraph));
  const auto F = surface::compute_fields(S);
  const auto field = surface::kahler_angle_field(F);
  const int i = S.Nu / 2, j = S.Nv / 2;
  CHECK(field[static_cast<size_t>(i) * S.Nv + j] ==
        Catch::Approx(F.at(i, j).cos_alpha).margin(1e-15));

  // direct angle from the Kahler form on the frame
  const ambient::ChartPoint p(S.at(i, j));
  const auto& fr = F.at(i, j).frame;
  CHECK(ambient::kahler_form(p, S.k, fr.e1, fr.e2) ==
        Catch::Approx(F.at(i, j).cos_alpha).margin(1e-12));

  // orientation reversal: swapping the tangent basis order flips the sign
  const Mat4 g = ambient::fs_metric(p, S.k);
  const Mat4 J = ambient::complex_structure();
  const Vec4 Fu = (S.at(i + 1, j) - S.at(i - 1, j)) / (2 * S.du);
  const Vec4 Fv = (S.at(i, j + 1) - S.at(i, j - 1)) / (2 * S.dv);
  const auto fwd = frames::adapt_frame(Fu, Fv, g, J);
  const auto rev = frames::adapt_frame(Fv, Fu, g, J);
  CHECK(rev.x == Catch::Approx(-fwd.x).margin(1e-10));
}

TEST_CASE("Laplace-Beltrami: constants and a manufactured solution") {
  const auto S = surface::build_surface(base(Family::ComplexLine, 65));
  const auto F = surface::compute_fields(S);

  std::vector<double> ones(F.nodes.size(), 1.0);
  const auto lap1 = surface::laplace_beltrami(S, F, ones);
  for (double v : lap1)
    if (std::isfinite(v)) CHECK(std::abs(v) < 1e-12);

  // On the complex line the induced metric is conformal, (4/k)/(1+r^2)^2 I,
  // so Delta_g f = (k/4)(1+r^2)^2 Delta_euclid f; take f = sin(u).
  auto manufactured_error = [&](int n) {
    auto cfg = base(Family::ComplexLine, n);
    const auto Sn = surface::build_surface(cfg);
    const auto Fn = surface::compute_fields(Sn);
    std::vector<double> f(Fn.nodes.size(), 0.0);
    for (int i = 0; i < Sn.Nu; ++i)
      for (int j = 0; j < Sn.Nv; ++j)
        f[static_cast<size_t>(i) * Sn.Nv + j] = std::sin(Sn.u0 + i * Sn.du);
    const auto lap = surface::laplace_beltrami(Sn, Fn, f);
    double err = 0;
    for (int i = 0; i < Sn.Nu; ++i)
      for (int j = 0; j < Sn.Nv; ++j) {
        const size_t idx = static_cast<size_t>(i) * Sn.Nv + j;
        if (!std::isfinite(lap[idx])) continue;
        const double u = Sn.u0 + i * Sn.du, v = Sn.v0 + j * Sn.dv;
        const double r2 = u * u + v * v;
        const double exact = -(Sn.k / 4.0) * (1 + r2) * (1 + r2) * std::sin(u);
        err = std::max(err, std::abs(lap[idx] - exact));
      }
    return err;
  };
  const double e1 = manufactured_error(33);
  const double e2 = manufactured_error(65);
  CHECK(e1 < 0.02);
  const double ratio = e1 / e2;
  CHECK(ratio > 3.0);  // second-order convergence
  CHECK(ratio < 5.5);
}

TEST_CASE("second fundamental form converges at second order on a smooth bump") {
  auto max_err = [&](int n, double& maxA2) {
    SurfaceConfig c = base(Family::PerturbedGraph, n);
    c.eps = 0.05;
    const auto S = surface::build_surface(c);
    const auto F = surface::compute_fields(S);
    maxA2 = 0;
    for (const auto& nd : F.nodes)
      if (nd.valid) maxA2 = std::max(maxA2, nd.A2);
    return maxA2;
  };
  // Richardson-style: compare coarse values against a fine reference
  double a33, a65, a129;
  max_err(33, a33);
  max_err(65, a65);
  max_err(129, a129);
  const double d1 = std::abs(a33 - a129), d2 = std::abs(a65 - a129);
  if (d2 > 1e-12) {
    CHECK(d1 / d2 > 2.5);  // at least ~second-order decrease of the error
  }
}

TEST_CASE("diagnostics: global extrema and area") {
  const auto spec32 = pinching::PinchingSpec::thm32(1.0);

  const auto Sc = surface::build_surface(base(Family::ComplexLine));
  const auto Fc = surface::compute_fields(Sc);
  const auto dc = surface::diagnostics(Sc, Fc, {spec32}, 3);
  CHECK(dc.max_Q[0] == Catch::Approx(-0.5).margin(1e-6));
  CHECK(dc.min_cos_alpha == Catch::Approx(1.0).margin(1e-10));
  CHECK(dc.area > 0);

  const auto Sl = surface::build_surface(base(Family::Lagrangian));
  const auto Fl = surface::compute_fields(Sl);
  const auto dl = surface::diagnostics(Sl, Fl, {spec32}, 3);
  CHECK(dl.max_sin2_half == Catch::Approx(0.5).margin(1e-10));

  const auto Sh = surface::build_surface(base(Family::HolomorphicGraph));
  const auto Fh = surface::compute_fields(Sh);
  const auto dh = surface::diagnostics(Sh, Fh, {spec32}, 3);
  CHECK(dh.min_cos_alpha == Catch::Approx(1.0).margin(1e-8));
  CHECK(dh.max_H2 < 1e-10);

  CHECK_THROWS_AS(surface::diagnostics(Sc, Fc, {spec32}, 40), InvalidInput);
}

TEST_CASE("pointwise tensor inequalities hold at every node of every family") {
  for (Family f : {Family::ComplexLine, Family::Lagrangian, Family::HolomorphicGraph,
                   Family::PerturbedGraph}) {
    SurfaceConfig c = base(f);
    if (f == Family::PerturbedGraph) c.eps = 0.05;
    const auto S = surface::build_surface(c);
    const auto F = surface::compute_fields(S);
    for (const auto& n : F.nodes) {
      if (!n.valid) continue;
      CHECK(n.cos_alpha >= -1.0 - 1e-12);
      CHECK(n.cos_alpha <= 1.0 + 1e-12);
      CHECK(n.A2 >= 0.5 * n.H2 - 1e-10);
      CHECK(n.nbJ2 >= 0.5 * n.H2 - 1e-10);
      const auto b = sff::cdk_bound_3_12(n.h);
      if (n.H2 < 1e-12) CHECK(b.lhs <= b.rhs + 1e-10);
    }
  }
}
