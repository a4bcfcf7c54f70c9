#pragma once

// Discretized immersed surface patches in the ambient chart: grid immersions,
// induced metric, adapted frames, discrete second fundamental form, the
// angle field, a divergence-form Laplace-Beltrami operator, and diagnostics.

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "smcf/ambient.hpp"
#include "smcf/core.hpp"
#include "smcf/frames.hpp"
#include "smcf/pinching.hpp"
#include "smcf/sff.hpp"

namespace smcf::surface {

enum class Topology { PeriodicPeriodic, FixedBoundary };
enum class Family { ComplexLine, Lagrangian, HolomorphicGraph, PerturbedGraph };

struct SurfaceConfig {
  Family family = Family::HolomorphicGraph;
  int Nu = 64, Nv = 64;
  double u0 = -1, u1 = 1, v0 = -1, v1 = 1;
  double k = 1.0;
  double c = 0.3;         // graph coefficient in z2 = c z1^2
  double eps = 0.0;       // perturbation amplitude (PerturbedGraph)
  double bump_u = 0, bump_v = 0, bump_width = 0.5;
  ambient::DerivMode mode = ambient::DerivMode::Analytic;
  std::string label = "surface";
};

constexpr double kEpsImmersion = 1e-8;

struct ParamSurface {
  int Nu = 0, Nv = 0;
  Topology topology = Topology::FixedBoundary;
  double u0 = 0, v0 = 0, du = 0, dv = 0;
  double k = 1.0;
  ambient::DerivMode mode = ambient::DerivMode::Analytic;
  std::string label;
  std::vector<Vec4> pts;

  int wrap_u(int i) const { return ((i % Nu) + Nu) % Nu; }
  int wrap_v(int j) const { return ((j % Nv) + Nv) % Nv; }
  const Vec4& at(int i, int j) const {
    if (topology == Topology::PeriodicPeriodic) {
      i = wrap_u(i);
      j = wrap_v(j);
    }
    return pts[static_cast<size_t>(i) * Nv + j];
  }
  Vec4& at(int i, int j) { return pts[static_cast<size_t>(i) * Nv + j]; }

  /// Nodes with a full central stencil of the given radius.
  bool has_stencil(int i, int j, int radius) const {
    if (topology == Topology::PeriodicPeriodic) return true;
    return i >= radius && i < Nu - radius && j >= radius && j < Nv - radius;
  }
};

namespace detail {

/// Gaussian bump, = 1 at the center.  A Gaussian (rather than a compactly
/// supported cutoff) keeps all derivatives at the scale of the bump width, so
/// finite-difference estimates reach their asymptotic convergence rate on
/// practical grids.
inline double bump(double u, double v, const SurfaceConfig& c) {
  const double s2 = (std::pow(u - c.bump_u, 2) + std::pow(v - c.bump_v, 2)) /
                    (c.bump_width * c.bump_width);
  return std::exp(-s2);
}

inline Vec4 embed(const SurfaceConfig& c, double u, double v) {
  switch (c.family) {
    case Family::ComplexLine:
      return Vec4(u, v, 0, 0);
    case Family::Lagrangian:
      return Vec4(u, 0, v, 0);
    case Family::HolomorphicGraph:
      return Vec4(u, v, c.c * (u * u - v * v), 2 * c.c * u * v);
    case Family::PerturbedGraph:
      return Vec4(u, v, c.c * (u * u - v * v) + c.eps * bump(u, v, c),
                  2 * c.c * u * v);
  }
  throw InvalidInput("unknown surface family");
}

}  // namespace detail

struct NodeFields {
  bool valid = false;
  Mat2 G;       // induced metric in the (F_u, F_v) basis
  double detG = 0;
  frames::AdaptedFrame frame;
  sff::SecondFundamentalForm h;  // in the adapted orthonormal frame
  double cos_alpha = 0, A2 = 0, H2 = 0, nbJ2 = 0;
  Vec4 Hvec = Vec4::Zero();      // ambient mean curvature vector
};

struct SurfaceFields {
  int Nu = 0, Nv = 0;
  std::vector<NodeFields> nodes;
  const NodeFields& at(int i, int j) const {
    return nodes[static_cast<size_t>(i) * Nv + j];
  }
  NodeFields& at(int i, int j) { return nodes[static_cast<size_t>(i) * Nv + j]; }
};

inline ParamSurface build_surface(const SurfaceConfig& cfg) {
  if (cfg.Nu < 8 || cfg.Nv < 8) throw BuildError("grid must be at least 8x8");
  if (!(cfg.k > 0)) throw BuildError("k must be positive");
  ParamSurface S;
  S.Nu = cfg.Nu;
  S.Nv = cfg.Nv;
  S.topology = Topology::FixedBoundary;
  S.u0 = cfg.u0;
  S.v0 = cfg.v0;
  S.du = (cfg.u1 - cfg.u0) / (cfg.Nu - 1);
  S.dv = (cfg.v1 - cfg.v0) / (cfg.Nv - 1);
  if (!(S.du > 0) || !(S.dv > 0)) throw BuildError("empty parameter box");
  S.k = cfg.k;
  S.mode = cfg.mode;
  S.label = cfg.label;
  S.pts.resize(static_cast<size_t>(cfg.Nu) * cfg.Nv);
  for (int i = 0; i < cfg.Nu; ++i)
    for (int j = 0; j < cfg.Nv; ++j) {
      const Vec4 p = detail::embed(cfg, cfg.u0 + i * S.du, cfg.v0 + j * S.dv);
      if (!all_finite(p)) throw BuildError("non-finite node in built surface");
      S.at(i, j) = p;
    }
  return S;
}

namespace detail {

struct NodeDerivs {
  Vec4 Fu, Fv, Fuu, Fuv, Fvv;
};

inline NodeDerivs node_derivs(const ParamSurface& S, int i, int j) {
  NodeDerivs d;
  const Vec4 &pe = S.at(i + 1, j), &pw = S.at(i - 1, j);
  const Vec4 &pn = S.at(i, j + 1), &ps = S.at(i, j - 1);
  const Vec4& p = S.at(i, j);
  d.Fu = (pe - pw) / (2 * S.du);
  d.Fv = (pn - ps) / (2 * S.dv);
  d.Fuu = (pe - 2 * p + pw) / (S.du * S.du);
  d.Fvv = (pn - 2 * p + ps) / (S.dv * S.dv);
  d.Fuv = (S.at(i + 1, j + 1) - S.at(i + 1, j - 1) - S.at(i - 1, j + 1) +
           S.at(i - 1, j - 1)) /
          (4 * S.du * S.dv);
  return d;
}

inline Vec4 with_christoffel(const Christoffels& G, const Vec4& second, const Vec4& X,
                             const Vec4& Y) {
  Vec4 out = second;
  for (int a = 0; a < 4; ++a) {
    double s = 0;
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c) s += G(a, b, c) * X[b] * Y[c];
    out[a] += s;
  }
  return out;
}

}  // namespace detail

/// Compute all per-node fields at every node with a radius-1 stencil.
inline SurfaceFields compute_fields(const ParamSurface& S) {
  SurfaceFields F;
  F.Nu = S.Nu;
  F.Nv = S.Nv;
  F.nodes.resize(static_cast<size_t>(S.Nu) * S.Nv);

  for (int i = 0; i < S.Nu; ++i)
    for (int j = 0; j < S.Nv; ++j) {
      if (!S.has_stencil(i, j, 1)) continue;
      NodeFields& n = F.at(i, j);
      const ambient::ChartPoint p(S.at(i, j));
      const Mat4 g = ambient::fs_metric(p, S.k);
      const Mat4 J = ambient::complex_structure(p);
      const auto d = detail::node_derivs(S, i, j);

      n.G(0, 0) = d.Fu.dot(g * d.Fu);
      n.G(0, 1) = n.G(1, 0) = d.Fu.dot(g * d.Fv);
      n.G(1, 1) = d.Fv.dot(g * d.Fv);
      n.detG = n.G.determinant();
      if (!(n.detG > kEpsImmersion)) throw BuildError("degenerate immersion");

      n.frame = frames::adapt_frame(d.Fu, d.Fv, g, J);
      n.cos_alpha = n.frame.x;

      // Coefficients of e1, e2 in the (Fu, Fv) basis: a_i = G^{-1} <e_i, F_.>.
      const Mat2 Gi = n.G.inverse();
      Mat2 a;  // a(i, p): e_i = a(i,0) Fu + a(i,1) Fv
      const std::array<Vec4, 2> tang = {n.frame.e1, n.frame.e2};
      const std::array<Vec4, 2> par = {d.Fu, d.Fv};
      for (int t = 0; t < 2; ++t) {
        const Vec2 rhs(tang[t].dot(g * d.Fu), tang[t].dot(g * d.Fv));
        const Vec2 sol = Gi * rhs;
        a(t, 0) = sol[0];
        a(t, 1) = sol[1];
      }

      const Christoffels Gam = ambient::christoffels(p, S.k, S.mode);
      std::array<std::array<Vec4, 2>, 2> D;  // second derivative vectors D_p F_q
      D[0][0] = detail::with_christoffel(Gam, d.Fuu, d.Fu, d.Fu);
      D[0][1] = detail::with_christoffel(Gam, d.Fuv, d.Fu, d.Fv);
      D[1][0] = D[0][1];
      D[1][1] = detail::with_christoffel(Gam, d.Fvv, d.Fv, d.Fv);
      (void)par;

      const std::array<Vec4, 2> norm = {n.frame.e3, n.frame.e4};
      for (int al = 0; al < 2; ++al)
        for (int ii = 0; ii < 2; ++ii)
          for (int jj = ii; jj < 2; ++jj) {
            double s = 0;
            for (int pp = 0; pp < 2; ++pp)
              for (int qq = 0; qq < 2; ++qq)
                s += a(ii, pp) * a(jj, qq) * D[pp][qq].dot(g * norm[al]);
            (al == 0 ? n.h.h3 : n.h.h4)(ii, jj) = s;
            (al == 0 ? n.h.h3 : n.h.h4)(jj, ii) = s;
          }

      const auto inv = sff::sff_invariants(n.h);
      n.A2 = inv.normA2;
      n.H2 = inv.normH2;
      n.nbJ2 = inv.nablaBarJ2;
      n.Hvec = inv.H[0] * n.frame.e3 + inv.H[1] * n.frame.e4;
      n.valid = true;
    }
  return F;
}

inline std::vector<double> kahler_angle_field(const SurfaceFields& F) {
  std::vector<double> out(F.nodes.size(), std::numeric_limits<double>::quiet_NaN());
  for (size_t idx = 0; idx < F.nodes.size(); ++idx)
    if (F.nodes[idx].valid) out[idx] = F.nodes[idx].cos_alpha;
  return out;
}

/// Divergence-form Laplace-Beltrami of a nodal scalar field:
///   Delta f = (1/sqrt g) d_p ( sqrt(g) g^{pq} d_q f ),
/// nested second-order central differences.  Valid where a radius-2 stencil of
/// field-valid nodes exists; NaN elsewhere.
inline std::vector<double> laplace_beltrami(const ParamSurface& S,
                                            const SurfaceFields& F,
                                            const std::vector<double>& f) {
  if (f.size() != F.nodes.size()) throw InvalidInput("field size mismatch");
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const size_t N = F.nodes.size();
  auto id = [&](int i, int j) {
    if (S.topology == Topology::PeriodicPeriodic) {
      i = S.wrap_u(i);
      j = S.wrap_v(j);
    }
    return static_cast<size_t>(i) * S.Nv + j;
  };

  // Fluxes P^{pq} d_q f with P = sqrt(det G) G^{-1}, at radius-1 nodes.
  std::vector<double> flux_u(N, nan), flux_v(N, nan);
  for (int i = 0; i < S.Nu; ++i)
    for (int j = 0; j < S.Nv; ++j) {
      if (!S.has_stencil(i, j, 1)) continue;
      const NodeFields& n = F.at(i, j);
      if (!n.valid) continue;
      const double fu = (f[id(i + 1, j)] - f[id(i - 1, j)]) / (2 * S.du);
      const double fv = (f[id(i, j + 1)] - f[id(i, j - 1)]) / (2 * S.dv);
      if (!std::isfinite(fu) || !std::isfinite(fv)) continue;
      const Mat2 P = std::sqrt(n.detG) * n.G.inverse();
      flux_u[id(i, j)] = P(0, 0) * fu + P(0, 1) * fv;
      flux_v[id(i, j)] = P(1, 0) * fu + P(1, 1) * fv;
    }

  std::vector<double> out(N, nan);
  for (int i = 0; i < S.Nu; ++i)
    for (int j = 0; j < S.Nv; ++j) {
      if (!S.has_stencil(i, j, 2)) continue;
      const NodeFields& n = F.at(i, j);
      if (!n.valid) continue;
      const double gu = (flux_u[id(i + 1, j)] - flux_u[id(i - 1, j)]) / (2 * S.du);
      const double gv = (flux_v[id(i, j + 1)] - flux_v[id(i, j - 1)]) / (2 * S.dv);
      if (!std::isfinite(gu) || !std::isfinite(gv)) continue;
      out[id(i, j)] = (gu + gv) / std::sqrt(n.detG);
    }
  return out;
}

struct Diagnostics {
  double min_cos_alpha = 1, max_A2 = 0, max_H2 = 0, max_sin2_half = 0;
  double area = 0;
  std::vector<double> max_Q;  // one entry per PinchingSpec
  int margin = 0;
};

/// Global extrema over nodes at least `margin` away from a fixed boundary,
/// row-major reduction (deterministic).
inline Diagnostics diagnostics(const ParamSurface& S, const SurfaceFields& F,
                               const std::vector<pinching::PinchingSpec>& specs,
                               int margin = 3) {
  Diagnostics d;
  d.margin = margin;
  d.max_Q.assign(specs.size(), -std::numeric_limits<double>::infinity());
  d.min_cos_alpha = std::numeric_limits<double>::infinity();
  bool any = false;
  for (int i = 0; i < S.Nu; ++i)
    for (int j = 0; j < S.Nv; ++j) {
      const NodeFields& n = F.at(i, j);
      if (!n.valid) continue;
      d.area += std::sqrt(n.detG) * S.du * S.dv;  // all valid nodes contribute
      if (!S.has_stencil(i, j, margin)) continue;
      any = true;
      d.min_cos_alpha = std::min(d.min_cos_alpha, n.cos_alpha);
      d.max_A2 = std::max(d.max_A2, n.A2);
      d.max_H2 = std::max(d.max_H2, n.H2);
      d.max_sin2_half = std::max(d.max_sin2_half, 0.5 * (1.0 - n.cos_alpha));
      const auto inv = sff::sff_invariants(n.h);
      for (size_t s = 0; s < specs.size(); ++s)
        d.max_Q[s] = std::max(d.max_Q[s], pinching::q_value(inv, n.cos_alpha, specs[s]));
    }
  if (!any) throw InvalidInput("diagnostics margin leaves no interior nodes");
  return d;
}

}  // namespace smcf::surface
