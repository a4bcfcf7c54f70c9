#pragma once

// The ambient space: a single affine chart of the complex projective plane
// carrying the Fubini-Study metric scaled so that the holomorphic sectional
// curvature equals k, together with its Levi-Civita connection, curvature,
// the complex structure, and the closed-form constant-curvature model.

#include <complex>

#include "smcf/core.hpp"

namespace smcf::ambient {

using cplx = std::complex<double>;

/// Point in the affine chart: (Re z1, Im z1, Re z2, Im z2).
struct ChartPoint {
  Vec4 coords = Vec4::Zero();

  ChartPoint() = default;
  explicit ChartPoint(const Vec4& c) : coords(c) {}
  ChartPoint(double a, double b, double c, double d) : coords(a, b, c, d) {}
};

enum class DerivMode { Analytic, FiniteDifference };

inline void check_point(const ChartPoint& p, double k) {
  if (!all_finite(p.coords)) throw InvalidInput("chart point has non-finite coordinates");
  if (!(k > 0.0)) throw InvalidInput("holomorphic sectional curvature k must be positive");
}

/// Multiplication by i in chart coordinates; constant over the chart.
inline Mat4 complex_structure(const ChartPoint& = ChartPoint{}) {
  Mat4 J = Mat4::Zero();
  J(0, 1) = -1.0;
  J(1, 0) = 1.0;
  J(2, 3) = -1.0;
  J(3, 2) = 1.0;
  return J;
}

namespace detail {

// Complex components of the real coordinate basis vectors.
inline cplx basis(int mu, int a) {
  static const cplx table[4][2] = {
      {{1, 0}, {0, 0}}, {{0, 1}, {0, 0}}, {{0, 0}, {1, 0}}, {{0, 0}, {0, 1}}};
  return table[mu][a];
}

struct HermitianJet {
  // h[a][b] = h_{a \bar b}; dz[c][a][b] = d_{z_c} h; dzdz / dzbdz second derivatives.
  cplx h[2][2];
  cplx dz[2][2][2];
  cplx dzdz[2][2][2][2];   // [d][c][a][b] = d_{z_d} d_{z_c} h_{a \bar b}
  cplx dzbdz[2][2][2][2];  // [d][c][a][b] = d_{\bar z_d} d_{z_c} h_{a \bar b}
};

inline HermitianJet hermitian_jet(const ChartPoint& p, double k) {
  const cplx z[2] = {{p.coords[0], p.coords[1]}, {p.coords[2], p.coords[3]}};
  const cplx zb[2] = {std::conj(z[0]), std::conj(z[1])};
  const double m = 4.0 / k;
  const double w = 1.0 + std::norm(z[0]) + std::norm(z[1]);
  const double w2 = w * w, w3 = w2 * w, w4 = w3 * w;

  HermitianJet jet;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      const double d_ab = (a == b) ? 1.0 : 0.0;
      jet.h[a][b] = m * (d_ab / w - zb[a] * z[b] / w2);
      for (int c = 0; c < 2; ++c) {
        const double d_cb = (c == b) ? 1.0 : 0.0;
        jet.dz[c][a][b] =
            m * (-d_ab * zb[c] / w2 - d_cb * zb[a] / w2 + 2.0 * zb[a] * z[b] * zb[c] / w3);
        for (int d = 0; d < 2; ++d) {
          const double d_db = (d == b) ? 1.0 : 0.0;
          const double d_cd = (c == d) ? 1.0 : 0.0;
          const double d_ad = (a == d) ? 1.0 : 0.0;
          jet.dzdz[d][c][a][b] =
              m * (2.0 * d_ab * zb[c] * zb[d] / w3 + 2.0 * d_cb * zb[a] * zb[d] / w3 +
                   2.0 * d_db * zb[a] * zb[c] / w3 - 6.0 * zb[a] * z[b] * zb[c] * zb[d] / w4);
          jet.dzbdz[d][c][a][b] =
              m * (-d_ab * (d_cd / w2 - 2.0 * zb[c] * z[d] / w3) -
                   d_cb * (d_ad / w2 - 2.0 * zb[a] * z[d] / w3) +
                   2.0 * (d_ad * z[b] * zb[c] + zb[a] * z[b] * d_cd) / w3 -
                   6.0 * zb[a] * z[b] * zb[c] * z[d] / w4);
        }
      }
    }
  return jet;
}

}  // namespace detail

/// Real 4x4 Fubini-Study metric at p.  At the origin this is (4/k) * Identity.
inline Mat4 fs_metric(const ChartPoint& p, double k) {
  check_point(p, k);
  const auto jet = detail::hermitian_jet(p, k);
  Mat4 g;
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu) {
      cplx s = 0;
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          s += detail::basis(mu, a) * jet.h[a][b] * std::conj(detail::basis(nu, b));
      g(mu, nu) = s.real();
    }
  return g;
}

/// Metric with first and second coordinate derivatives.
struct MetricJet {
  Mat4 g;
  std::array<Mat4, 4> dg;                  // dg[rho](mu,nu) = d_rho g_{mu nu}
  std::array<std::array<Mat4, 4>, 4> d2g;  // d2g[rho][sig] = d_rho d_sig g
};

inline MetricJet metric_jet_analytic(const ChartPoint& p, double k) {
  const auto jet = detail::hermitian_jet(p, k);

  // First and second real-coordinate derivatives of h_{a \bar b}, using
  // d_{\bar c} h_{a\bar b} = conj(d_c h_{b\bar a}) and its second-order analogues.
  cplx dh[4][2][2];
  for (int r = 0; r < 4; ++r)
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        cplx s = 0;
        for (int c = 0; c < 2; ++c)
          s += detail::basis(r, c) * jet.dz[c][a][b] +
               std::conj(detail::basis(r, c)) * std::conj(jet.dz[c][b][a]);
        dh[r][a][b] = s;
      }

  MetricJet out;
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu) {
      cplx s = 0;
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          s += detail::basis(mu, a) * jet.h[a][b] * std::conj(detail::basis(nu, b));
      out.g(mu, nu) = s.real();
    }

  for (int r = 0; r < 4; ++r)
    for (int mu = 0; mu < 4; ++mu)
      for (int nu = 0; nu < 4; ++nu) {
        cplx s = 0;
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b)
            s += detail::basis(mu, a) * dh[r][a][b] * std::conj(detail::basis(nu, b));
        out.dg[r](mu, nu) = s.real();
      }

  for (int r = 0; r < 4; ++r)
    for (int t = 0; t < 4; ++t) {
      cplx d2h[2][2];
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          cplx s = 0;
          for (int c = 0; c < 2; ++c)
            for (int d = 0; d < 2; ++d) {
              const cplx cr = detail::basis(r, c), ct = detail::basis(t, d);
              s += cr * ct * jet.dzdz[d][c][a][b];
              s += cr * std::conj(ct) * jet.dzbdz[d][c][a][b];
              s += std::conj(cr) * ct * std::conj(jet.dzbdz[d][c][b][a]);
              s += std::conj(cr) * std::conj(ct) * std::conj(jet.dzdz[d][c][b][a]);
            }
          d2h[a][b] = s;
        }
      for (int mu = 0; mu < 4; ++mu)
        for (int nu = 0; nu < 4; ++nu) {
          cplx s = 0;
          for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
              s += detail::basis(mu, a) * d2h[a][b] * std::conj(detail::basis(nu, b));
          out.d2g[r][t](mu, nu) = s.real();
        }
    }
  return out;
}

inline MetricJet metric_jet_fd(const ChartPoint& p, double k, double step) {
  MetricJet out;
  out.g = fs_metric(p, k);
  for (int r = 0; r < 4; ++r) {
    Vec4 e = Vec4::Zero();
    e[r] = step;
    const Mat4 gp = fs_metric(ChartPoint(p.coords + e), k);
    const Mat4 gm = fs_metric(ChartPoint(p.coords - e), k);
    out.dg[r] = (gp - gm) / (2.0 * step);
  }
  for (int r = 0; r < 4; ++r)
    for (int t = 0; t < 4; ++t) {
      Vec4 er = Vec4::Zero(), et = Vec4::Zero();
      er[r] = step;
      et[t] = step;
      if (r == t) {
        const Mat4 gp = fs_metric(ChartPoint(p.coords + er), k);
        const Mat4 gm = fs_metric(ChartPoint(p.coords - er), k);
        out.d2g[r][t] = (gp - 2.0 * out.g + gm) / (step * step);
      } else {
        const Mat4 gpp = fs_metric(ChartPoint(p.coords + er + et), k);
        const Mat4 gpm = fs_metric(ChartPoint(p.coords + er - et), k);
        const Mat4 gmp = fs_metric(ChartPoint(p.coords - er + et), k);
        const Mat4 gmm = fs_metric(ChartPoint(p.coords - er - et), k);
        out.d2g[r][t] = (gpp - gpm - gmp + gmm) / (4.0 * step * step);
      }
    }
  return out;
}

constexpr double kFdStep = 1e-5;

inline MetricJet metric_jet(const ChartPoint& p, double k,
                            DerivMode mode = DerivMode::Analytic) {
  check_point(p, k);
  return mode == DerivMode::Analytic ? metric_jet_analytic(p, k)
                                     : metric_jet_fd(p, k, kFdStep);
}

inline Christoffels christoffels_from_jet(const MetricJet& jet) {
  const Mat4 gi = jet.g.inverse();
  Christoffels G;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c) {
        double s = 0;
        for (int d = 0; d < 4; ++d)
          s += gi(a, d) * (jet.dg[b](d, c) + jet.dg[c](b, d) - jet.dg[d](b, c));
        G(a, b, c) = 0.5 * s;
      }
  return G;
}

inline Christoffels christoffels(const ChartPoint& p, double k,
                                 DerivMode mode = DerivMode::Analytic) {
  return christoffels_from_jet(metric_jet(p, k, mode));
}

/// Lowered Riemann tensor R_{abcd} of the chart metric.  Convention:
/// sectional curvature of span(X, Y) is R(X,Y,X,Y) / Gram(X,Y), and on
/// an orthonormal frame the components match model_curvature.
inline Tensor4 riemann_chart(const ChartPoint& p, double k,
                             DerivMode mode = DerivMode::Analytic) {
  const MetricJet jet = metric_jet(p, k, mode);
  const Mat4 gi = jet.g.inverse();
  const Christoffels G = christoffels_from_jet(jet);

  // dG[r](a; b,c) = d_r Gamma^a_{bc}
  std::array<Christoffels, 4> dG;
  for (int r = 0; r < 4; ++r) {
    const Mat4 dgi = -gi * jet.dg[r] * gi;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        for (int c = 0; c < 4; ++c) {
          double s = 0;
          for (int d = 0; d < 4; ++d) {
            s += dgi(a, d) * (jet.dg[b](d, c) + jet.dg[c](b, d) - jet.dg[d](b, c));
            s += gi(a, d) *
                 (jet.d2g[r][b](d, c) + jet.d2g[r][c](b, d) - jet.d2g[r][d](b, c));
          }
          dG[r](a, b, c) = 0.5 * s;
        }
  }

  // R^a_{bcd} = d_c G^a_{db} - d_d G^a_{cb} + G^a_{ce} G^e_{db} - G^a_{de} G^e_{cb}
  Tensor4 R;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d) {
          double s = dG[c](a, d, b) - dG[d](a, c, b);
          for (int e = 0; e < 4; ++e)
            s += G(a, c, e) * G(e, d, b) - G(a, d, e) * G(e, c, b);
          R(a, b, c, d) = s;
        }

  Tensor4 low;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d) {
          double s = 0;
          for (int e = 0; e < 4; ++e) s += jet.g(a, e) * R(e, b, c, d);
          low(a, b, c, d) = s;
        }
  return low;
}

/// Kahler form omega(U, V) = g(JU, V).
inline double kahler_form(const ChartPoint& p, double k, const Vec4& U, const Vec4& V) {
  const Mat4 g = fs_metric(p, k);
  const Mat4 J = complex_structure(p);
  return (J * U).dot(g * V);
}

/// Single component of the constant-curvature model, Jf(a,b) = <J e_a, e_b>
/// on an orthonormal frame:
///   K_{kjih} = -(k/4) [ (d_{kh} d_{ji} - d_{jh} d_{ki})
///                       + (J_{kh} J_{ji} - J_{jh} J_{ki}) - 2 J_{kj} J_{ih} ].
inline double model_curvature_component(const Mat4& Jf, double k, int a, int b, int c,
                                        int d) {
  auto del = [](int i, int j) { return i == j ? 1.0 : 0.0; };
  return -(k / 4.0) * ((del(a, d) * del(b, c) - del(b, d) * del(a, c)) +
                       (Jf(a, d) * Jf(b, c) - Jf(b, d) * Jf(a, c)) -
                       2.0 * Jf(a, b) * Jf(c, d));
}

inline Tensor4 model_curvature_tensor(const Mat4& Jf, double k) {
  Tensor4 K;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d)
          K(a, b, c, d) = model_curvature_component(Jf, k, a, b, c, d);
  return K;
}

/// J in frame components: Jf(a,b) = <J e_a, e_b>_g.
inline Mat4 j_frame_components(const std::array<Vec4, 4>& frame, const Mat4& g,
                               const Mat4& J) {
  Mat4 Jf;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) Jf(a, b) = (J * frame[a]).dot(g * frame[b]);
  return Jf;
}

inline void require_orthonormal(const std::array<Vec4, 4>& frame, const Mat4& g,
                                double tol = 1e-8) {
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      const double target = (a == b) ? 1.0 : 0.0;
      if (std::abs(frame[a].dot(g * frame[b]) - target) > tol)
        throw InvalidInput("frame is not orthonormal in the ambient metric");
    }
}

/// Model curvature evaluated on an explicit orthonormal frame at p.
inline double model_curvature(const ChartPoint& p, double k,
                              const std::array<Vec4, 4>& frame, int a, int b, int c,
                              int d) {
  const Mat4 g = fs_metric(p, k);
  require_orthonormal(frame, g);
  const Mat4 Jf = j_frame_components(frame, g, complex_structure(p));
  return model_curvature_component(Jf, k, a, b, c, d);
}

/// Frame components of a chart tensor: T(e_i, e_j, e_k, e_l).
inline Tensor4 to_frame(const Tensor4& T, const std::array<Vec4, 4>& frame) {
  Tensor4 out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int kk = 0; kk < 4; ++kk)
        for (int l = 0; l < 4; ++l) {
          double s = 0;
          for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b)
              for (int c = 0; c < 4; ++c)
                for (int d = 0; d < 4; ++d)
                  s += T(a, b, c, d) * frame[i][a] * frame[j][b] * frame[kk][c] *
                       frame[l][d];
          out(i, j, kk, l) = s;
        }
  return out;
}

/// Sectional curvature of span(X, Y) from a lowered chart curvature tensor.
inline double sectional(const Tensor4& R, const Mat4& g, const Vec4& X, const Vec4& Y) {
  double num = 0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d) num += R(a, b, c, d) * X[a] * Y[b] * X[c] * Y[d];
  const double gram = X.dot(g * X) * Y.dot(g * Y) - std::pow(X.dot(g * Y), 2);
  if (std::abs(gram) < 1e-14) throw InvalidInput("degenerate plane for sectional curvature");
  return num / gram;
}

/// Ricci tensor in chart coordinates, Ric_{bd} = g^{ac} R_{abcd}.
inline Mat4 ricci(const Tensor4& R, const Mat4& g) {
  const Mat4 gi = g.inverse();
  Mat4 ric = Mat4::Zero();
  for (int b = 0; b < 4; ++b)
    for (int d = 0; d < 4; ++d) {
      double s = 0;
      for (int a = 0; a < 4; ++a)
        for (int c = 0; c < 4; ++c) s += gi(a, c) * R(a, b, c, d);
      ric(b, d) = s;
    }
  return ric;
}

}  // namespace smcf::ambient
