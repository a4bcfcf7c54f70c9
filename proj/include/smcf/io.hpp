#pragma once

// CSV serialization of time series and surface snapshots, plus minimal SVG
// line plots for the report command.

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "smcf/core.hpp"
#include "smcf/flow.hpp"
#include "smcf/surface.hpp"

namespace smcf::io {

inline std::string timeseries_header(const std::vector<std::string>& spec_names) {
  std::string h = "t,dt,area,min_cos_alpha,max_A2,max_H2";
  for (const auto& s : spec_names) h += ",max_Q_" + s;
  h += ",max_sin2_half,res_cosalpha,res_H2";
  return h;
}

inline void write_timeseries_csv(std::ostream& out, const flow::TimeSeries& ts) {
  out << timeseries_header(ts.spec_names) << "\n";
  out << std::setprecision(17);
  for (const auto& r : ts.rows) {
    out << r.t << ',' << r.dt << ',' << r.area << ',' << r.min_cos_alpha << ','
        << r.max_A2 << ',' << r.max_H2;
    for (double q : r.max_Q) out << ',' << q;
    out << ',' << r.max_sin2_half << ',' << r.res_cosalpha << ',' << r.res_H2 << "\n";
  }
}

inline void write_timeseries_csv(const std::string& path, const flow::TimeSeries& ts) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot open for writing: " + path);
  write_timeseries_csv(out, ts);
}

inline bool config_is_blank(const std::string& s) {
  for (char ch : s)
    if (!std::isspace(static_cast<unsigned char>(ch))) return false;
  return true;
}

inline flow::TimeSeries read_timeseries_csv(std::istream& in) {
  flow::TimeSeries ts;
  std::string line;
  if (!std::getline(in, line)) throw InvalidInput("empty time-series CSV");
  // parse header
  std::vector<std::string> cols;
  {
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) cols.push_back(tok);
  }
  const std::vector<std::string> prefix = {"t", "dt", "area", "min_cos_alpha",
                                           "max_A2", "max_H2"};
  const std::vector<std::string> suffix = {"max_sin2_half", "res_cosalpha", "res_H2"};
  if (cols.size() < prefix.size() + suffix.size())
    throw InvalidInput("time-series CSV header too short");
  for (size_t i = 0; i < prefix.size(); ++i)
    if (cols[i] != prefix[i]) throw InvalidInput("unexpected CSV column: " + cols[i]);
  for (size_t i = 0; i < suffix.size(); ++i)
    if (cols[cols.size() - suffix.size() + i] != suffix[i])
      throw InvalidInput("unexpected CSV column: " + cols[cols.size() - suffix.size() + i]);
  for (size_t i = prefix.size(); i < cols.size() - suffix.size(); ++i) {
    if (cols[i].rfind("max_Q_", 0) != 0)
      throw InvalidInput("unexpected CSV column: " + cols[i]);
    ts.spec_names.push_back(cols[i].substr(6));
  }

  while (std::getline(in, line)) {
    if (config_is_blank(line)) continue;
    std::stringstream ss(line);
    std::string tok;
    std::vector<double> vals;
    while (std::getline(ss, tok, ',')) {
      try {
        vals.push_back(std::stod(tok));
      } catch (const std::exception&) {
        throw InvalidInput("malformed CSV value: " + tok);
      }
    }
    if (vals.size() != cols.size()) throw InvalidInput("CSV row width mismatch");
    flow::TimeSeriesRow r;
    size_t c = 0;
    r.t = vals[c++];
    r.dt = vals[c++];
    r.area = vals[c++];
    r.min_cos_alpha = vals[c++];
    r.max_A2 = vals[c++];
    r.max_H2 = vals[c++];
    for (size_t s = 0; s < ts.spec_names.size(); ++s) r.max_Q.push_back(vals[c++]);
    r.max_sin2_half = vals[c++];
    r.res_cosalpha = vals[c++];
    r.res_H2 = vals[c++];
    ts.rows.push_back(r);
  }
  if (ts.rows.empty()) throw InvalidInput("time-series CSV has no data rows");
  return ts;
}

inline flow::TimeSeries read_timeseries_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open time-series CSV: " + path);
  return read_timeseries_csv(in);
}

/// Surface snapshot: node index, chart coords, angle, norms, Q values.
inline void write_surface_csv(std::ostream& out, const surface::ParamSurface& S,
                              const surface::SurfaceFields& F,
                              const std::vector<pinching::PinchingSpec>& specs,
                              const std::vector<std::string>& spec_names) {
  out << "i,j,x1,x2,x3,x4,cos_alpha,A2,H2";
  for (const auto& s : spec_names) out << ",Q_" << s;
  out << "\n" << std::setprecision(17);
  for (int i = 0; i < S.Nu; ++i)
    for (int j = 0; j < S.Nv; ++j) {
      const auto& n = F.at(i, j);
      if (!n.valid) continue;
      const Vec4& p = S.at(i, j);
      out << i << ',' << j << ',' << p[0] << ',' << p[1] << ',' << p[2] << ',' << p[3]
          << ',' << n.cos_alpha << ',' << n.A2 << ',' << n.H2;
      const auto inv = sff::sff_invariants(n.h);
      for (const auto& s : specs) out << ',' << pinching::q_value(inv, n.cos_alpha, s);
      out << "\n";
    }
}

/// Minimal SVG line plot with optional overlay curve (e.g. an envelope).
inline void write_svg_plot(const std::string& path, const std::string& title,
                           const std::vector<double>& xs, const std::vector<double>& ys,
                           const std::vector<double>& overlay = {}) {
  if (xs.size() != ys.size() || xs.empty())
    throw InvalidInput("svg plot: series size mismatch or empty");
  if (!overlay.empty() && overlay.size() != xs.size())
    throw InvalidInput("svg plot: overlay size mismatch");

  const double W = 640, Hh = 400, ml = 60, mr = 20, mt = 40, mb = 40;
  double xmin = xs.front(), xmax = xs.front(), ymin = ys.front(), ymax = ys.front();
  for (double x : xs) {
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
  }
  for (double y : ys) {
    ymin = std::min(ymin, y);
    ymax = std::max(ymax, y);
  }
  for (double y : overlay) {
    ymin = std::min(ymin, y);
    ymax = std::max(ymax, y);
  }
  if (xmax - xmin < 1e-300) xmax = xmin + 1;
  if (ymax - ymin < 1e-300) ymax = ymin + 1;

  auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (W - ml - mr); };
  auto py = [&](double y) { return Hh - mb - (y - ymin) / (ymax - ymin) * (Hh - mt - mb); };
  auto polyline = [&](const std::vector<double>& series, const char* color) {
    std::ostringstream s;
    s << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (size_t i = 0; i < xs.size(); ++i) s << px(xs[i]) << ',' << py(series[i]) << ' ';
    s << "\"/>\n";
    return s.str();
  };

  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot open for writing: " + path);
  out << std::setprecision(8);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << Hh
      << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << W / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
      << title << "</text>\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << Hh - mb << "\" x2=\"" << W - mr << "\" y2=\""
      << Hh - mb << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
      << Hh - mb << "\" stroke=\"black\"/>\n";
  out << "<text x=\"" << ml << "\" y=\"" << Hh - mb + 16 << "\" font-size=\"11\">" << xmin
      << "</text>\n<text x=\"" << W - mr << "\" y=\"" << Hh - mb + 16
      << "\" text-anchor=\"end\" font-size=\"11\">" << xmax << "</text>\n";
  out << "<text x=\"" << ml - 6 << "\" y=\"" << Hh - mb << "\" text-anchor=\"end\" font-size=\"11\">"
      << ymin << "</text>\n<text x=\"" << ml - 6 << "\" y=\"" << mt
      << "\" text-anchor=\"end\" font-size=\"11\">" << ymax << "</text>\n";
  out << polyline(ys, "#1f6fb5");
  if (!overlay.empty()) out << polyline(overlay, "#c23b22");
  out << "</svg>\n";
}

}  // namespace smcf::io
