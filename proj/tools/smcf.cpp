// Command-line laboratory driver: randomized algebra verification, threshold
// certification, flow experiments, and plotting.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "smcf/config.hpp"
#include "smcf/flow.hpp"
#include "smcf/io.hpp"
#include "smcf/sampling.hpp"

namespace fs = std::filesystem;
using namespace smcf;

namespace {

struct SuiteResult {
  std::string name;
  long samples = 0;
  long violations = 0;
  double worst_margin = 0;  // most negative slack observed (>= 0 means clean)
};

SuiteResult suite_eq25(long samples, std::uint64_t seed, bool corrupt) {
  SuiteResult r{"angle-gradient-lower-bound", samples, 0, 1e300};
  Rng rng(seed);
  const double factor = corrupt ? 0.75 : 0.5;
  for (long i = 0; i < samples; ++i) {
    const auto inv = sff::sff_invariants(sampling::random_sff(rng));
    const double slack = inv.nablaBarJ2 - factor * inv.normH2;
    r.worst_margin = std::min(r.worst_margin, slack);
    if (slack < -1e-12) ++r.violations;
  }
  return r;
}

SuiteResult suite_grad33(long samples, std::uint64_t seed, bool corrupt) {
  SuiteResult r{"gradient-decomposition", samples, 0, 1e300};
  Rng rng(seed + 1);
  for (long i = 0; i < samples; ++i) {
    const auto g = sampling::random_grad_sff(rng);
    const double eta = rng.uniform(1e-3, 1.0);
    const auto d = sff::grad_decomposition(g, 2, eta);
    double bound = d.bound_rhs;
    if (corrupt) {
      // negative control: pretend the |grad H|^2 coefficient were 3/(n+2)+eta
      double nH2 = 0;
      for (int a = 0; a < 2; ++a) nH2 += g.dH[a].squaredNorm();
      bound += 2 * eta * nH2;
    }
    const double slack = std::min(d.normGrad2 - bound, 1e-9 - std::abs(d.inner_EF));
    r.worst_margin = std::min(r.worst_margin, slack);
    if (slack < -1e-9) ++r.violations;
  }
  return r;
}

SuiteResult suite_bound311(long samples, std::uint64_t seed, bool corrupt) {
  SuiteResult r{"reaction-bound-mean-curvature-nonzero", samples, 0, 1e300};
  Rng rng(seed + 2);
  for (long i = 0; i < samples; ++i) {
    const auto out = sff::normalize_frame(sampling::random_sff(rng));
    if (out.h_zero_branch) continue;
    const auto b = sff::reaction_bound_3_11(out.h);
    const double rhs = corrupt ? b.rhs - 0.5 * std::abs(b.rhs) - 1.0 : b.rhs;
    const double slack = rhs - b.lhs;
    r.worst_margin = std::min(r.worst_margin, slack);
    if (slack < -1e-10) ++r.violations;
  }
  return r;
}

SuiteResult suite_bound312(long samples, std::uint64_t seed, bool corrupt) {
  SuiteResult r{"reaction-bound-trace-free", samples, 0, 1e300};
  Rng rng(seed + 3);
  const double factor = corrupt ? 2.0 : 3.0;
  for (long i = 0; i < samples; ++i) {
    const auto h = sampling::random_traceless_sff(rng);
    const auto b = sff::cdk_bound_3_12(h);
    const auto inv = sff::sff_invariants(h);
    const double slack = factor * inv.normA2 * inv.normA2 - b.lhs;
    r.worst_margin = std::min(r.worst_margin, slack);
    if (slack < -1e-10) ++r.violations;
  }
  return r;
}

SuiteResult suite_wnorm(long samples, std::uint64_t seed, bool corrupt) {
  const long n = std::max(50L, samples / 500);
  SuiteResult r{"curvature-trace-norm", n, 0, 1e300};
  Rng rng(seed + 4);
  const double k = 1.5;
  const Mat4 J = ambient::complex_structure();
  for (long i = 0; i < n; ++i) {
    const auto p = sampling::random_point(rng);
    const Mat4 g = ambient::fs_metric(p, k);
    const auto f = sampling::random_adapted_frame(rng, g, J);
    const Mat4 Jf = ambient::j_frame_components(f.vectors(), g, J);
    const auto K = ambient::model_curvature_tensor(Jf, k);
    double w2 = 0;
    for (int al = 2; al < 4; ++al)
      for (int ii = 0; ii < 2; ++ii) {
        double wi = 0;
        for (int l = 0; l < 2; ++l) wi += K(al, l, ii, l);
        w2 += wi * wi;
      }
    const double coeff = corrupt ? 9.0 * k * k / 4.0 : 9.0 * k * k / 8.0;
    const double expect = coeff * f.x * f.x * (1 - f.x * f.x);
    const double slack = 1e-8 - std::abs(w2 - expect);
    r.worst_margin = std::min(r.worst_margin, slack);
    if (slack < 0) ++r.violations;
  }
  return r;
}

SuiteResult suite_scalars36(long samples, std::uint64_t seed, bool corrupt) {
  const long n = std::max(50L, samples / 500);
  SuiteResult r{"frame-curvature-scalars", n, 0, 1e300};
  Rng rng(seed + 5);
  const double k = 1.2;
  const Mat4 J = ambient::complex_structure();
  for (long i = 0; i < n; ++i) {
    const auto p = sampling::random_point(rng);
    const Mat4 g = ambient::fs_metric(p, k);
    const auto f = sampling::random_adapted_frame(rng, g, J);
    const Mat4 Jf = ambient::j_frame_components(f.vectors(), g, J);
    const auto K = ambient::model_curvature_tensor(Jf, k);
    auto sc = frames::frame_curvature_scalars(f.x, k);
    if (corrupt) sc.K1234 = -sc.K1234;
    const double err = std::max({std::abs(K(0, 1, 0, 1) - sc.K1212),
                                 std::abs(K(2, 3, 2, 3) - sc.K3434),
                                 std::abs(K(0, 1, 2, 3) - sc.K1234)});
    const double slack = 1e-8 - err;
    r.worst_margin = std::min(r.worst_margin, slack);
    if (slack < 0) ++r.violations;
  }
  return r;
}

SuiteResult suite_reaction_oracle(long samples, std::uint64_t seed, bool corrupt) {
  const long n = std::max(50L, samples / 200);
  SuiteResult r{"curvature-reaction-oracle", n, 0, 1e300};
  Rng rng(seed + 6);
  const double k = 1.3;
  for (long it = 0; it < n; ++it) {
    const auto h = sampling::random_sff(rng);
    const double x = rng.uniform(-1, 1);
    const double phi = rng.uniform(0, 2 * M_PI);
    const double s = std::sqrt(std::max(0.0, 1 - x * x));
    const Mat4 Jf = frames::j_matrix(x, s * std::cos(phi), s * std::sin(phi),
                                     frames::JForm::Form32);
    const auto K = ambient::model_curvature_tensor(Jf, k);
    auto t = sff::curvature_reaction_terms(h, x, k);
    if (corrupt) t.T2 = -t.T2;
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
          for (int be = 2; be < 4; ++be) {
            for (int kk = 0; kk < 2; ++kk)
              T2 += 8 * K(al, be, j, kk) * hc(be, i, kk) * hc(al, i, j);
            double tang = 0;
            for (int kk = 0; kk < 2; ++kk) tang += K(al, kk, be, kk);
            T4 += 2 * tang * hc(be, i, j) * hc(al, i, j);
          }
        }
    const double err = std::max({std::abs(t.T1 - T1), std::abs(t.T2 - T2),
                                 std::abs(t.T3 - T3), std::abs(t.T4 - T4)});
    const double slack = 1e-8 - err;
    r.worst_margin = std::min(r.worst_margin, slack);
    if (slack < 0) ++r.violations;
  }
  return r;
}

int cmd_verify_algebra(long samples, std::uint64_t seed, const std::string& corrupt) {
  const std::vector<std::string> names = {
      "eq25", "grad33", "bound311", "bound312", "wnorm", "scalars36", "reaction-oracle"};
  if (!corrupt.empty() &&
      std::find(names.begin(), names.end(), corrupt) == names.end()) {
    std::cerr << "unknown suite for --corrupt: " << corrupt << "\n";
    return 2;
  }
  std::vector<SuiteResult> results = {
      suite_eq25(samples, seed, corrupt == "eq25"),
      suite_grad33(samples, seed, corrupt == "grad33"),
      suite_bound311(samples, seed, corrupt == "bound311"),
      suite_bound312(samples, seed, corrupt == "bound312"),
      suite_wnorm(samples, seed, corrupt == "wnorm"),
      suite_scalars36(samples, seed, corrupt == "scalars36"),
      suite_reaction_oracle(samples, seed, corrupt == "reaction-oracle"),
  };
  long total = 0;
  std::cout << std::left << std::setw(42) << "suite" << std::right << std::setw(10)
            << "samples" << std::setw(12) << "violations" << std::setw(16)
            << "worst margin" << "\n";
  for (const auto& r : results) {
    total += r.violations;
    std::cout << std::left << std::setw(42) << r.name << std::right << std::setw(10)
              << r.samples << std::setw(12) << r.violations << std::setw(16)
              << std::scientific << std::setprecision(3) << r.worst_margin
              << std::defaultfloat << "\n";
  }
  std::cout << (total == 0 ? "all suites clean\n" : "VIOLATIONS DETECTED\n");
  return total == 0 ? 0 : 1;
}

int cmd_thresholds(const std::string& csv_path, double yang_lambda) {
  const auto reports = pinching::all_threshold_reports();
  bool ok = true;
  std::cout << std::left << std::setw(58) << "case" << std::right << std::setw(16)
            << "root" << std::setw(12) << "bound" << std::setw(20) << "margin" << "\n";
  std::cout << std::setprecision(12);
  for (const auto& r : reports) {
    ok = ok && r.margin >= 0;
    std::cout << std::left << std::setw(58) << r.tag << std::right << std::setw(16)
              << static_cast<double>(r.root) << std::setw(12)
              << (std::to_string(r.paper_bound.numerator()) + "/" +
                  std::to_string(r.paper_bound.denominator()))
              << std::setw(20) << static_cast<double>(r.margin) << "\n";
  }
  auto yang_row = [&](double lam) {
    const auto spec = pinching::PinchingSpec::yang(lam, 1.0);
    std::cout << std::left << std::setw(58)
              << ("lambda-family angle threshold, lambda = " + std::to_string(lam))
              << std::right << std::setw(16) << pinching::angle_threshold(spec) << "\n";
  };
  yang_row(0.5);
  yang_row(2.0 / 3.0);
  if (yang_lambda > 0) yang_row(yang_lambda);

  if (!csv_path.empty()) {
    std::ofstream out(csv_path);
    if (!out) {
      std::cerr << "cannot write " << csv_path << "\n";
      return 2;
    }
    out << "case,root,bound_num,bound_den,margin,cert_num,cert_den\n"
        << std::setprecision(17);
    for (const auto& r : reports)
      out << r.tag << ',' << static_cast<double>(r.root) << ','
          << r.paper_bound.numerator() << ',' << r.paper_bound.denominator() << ','
          << static_cast<double>(r.margin) << ',' << r.cert_value.numerator() << ','
          << r.cert_value.denominator() << "\n";
  }
  return ok ? 0 : 1;
}

void write_monitor_report(std::ostream& out, const flow::TimeSeries& ts,
                          const std::vector<pinching::PinchingSpec>& specs, double k,
                          bool& gate_fail) {
  out << "status: " << ts.status << "\ntrusted: " << (ts.trusted ? "yes" : "no")
      << "\n";
  if (!ts.trusted) gate_fail = true;
  for (size_t s = 0; s < specs.size(); ++s) {
    const auto rep = flow::monitors(ts, specs[s], k, s);
    out << "\nspec: " << ts.spec_names[s]
        << "\n  in-hypothesis: " << (rep.in_hypothesis ? "yes" : "no")
        << "\n  decay constant c: " << rep.decay_c
        << " (halved-coefficient variant: " << rep.decay_c_half << ")"
        << "\n  growth constant C0: " << rep.growth_C0 << "\n";
    for (const auto& c : rep.checks) {
      out << "  " << c.name << ": " << (c.pass ? "pass" : "FAIL")
          << " (margin " << c.margin << ")\n";
      if (rep.in_hypothesis && !c.pass) gate_fail = true;
    }
  }
  if (!ts.rows.empty()) {
    out << "\nhalf-angle reaction coefficient comparison (max residuals):\n"
        << "  published coefficients: " << ts.rows.back().res_sin2_paper << "\n"
        << "  halved coefficients:    " << ts.rows.back().res_sin2_derived << "\n"
        << "  better match: "
        << (ts.rows.back().res_sin2_derived <= ts.rows.back().res_sin2_paper
                ? "halved"
                : "published")
        << "\n";
  }
}

void write_plots(const fs::path& dir, const flow::TimeSeries& ts, double k) {
  std::vector<double> t;
  for (const auto& r : ts.rows) t.push_back(r.t);
  auto col = [&](auto getter) {
    std::vector<double> v;
    for (const auto& r : ts.rows) v.push_back(getter(r));
    return v;
  };
  io::write_svg_plot((dir / "area.svg").string(), "area", t,
                     col([](const auto& r) { return r.area; }));
  io::write_svg_plot((dir / "min_cos_alpha.svg").string(), "min cos(alpha)", t,
                     col([](const auto& r) { return r.min_cos_alpha; }));
  io::write_svg_plot((dir / "max_A2.svg").string(), "max |A|^2", t,
                     col([](const auto& r) { return r.max_A2; }));
  io::write_svg_plot((dir / "res.svg").string(), "residuals (angle)", t,
                     col([](const auto& r) { return r.res_cosalpha; }),
                     col([](const auto& r) { return r.res_H2; }));
  for (size_t s = 0; s < ts.spec_names.size(); ++s)
    io::write_svg_plot((dir / ("max_Q_" + ts.spec_names[s] + ".svg")).string(),
                       "max Q (" + ts.spec_names[s] + ")", t,
                       col([&](const auto& r) { return r.max_Q[s]; }));

  // decay and growth plots with envelopes from the monitor constants
  if (!ts.spec_names.empty()) {
    const auto spec = ts.spec_names[0] == "thm51" ? pinching::PinchingSpec::thm51(k)
                                                  : pinching::PinchingSpec::thm32(k);
    const auto rep = flow::monitors(ts, spec, k, 0);
    const double s0 = ts.rows.front().max_sin2_half;
    std::vector<double> env_decay, env_growth;
    for (const auto& r : ts.rows) {
      env_decay.push_back(s0 * std::exp(-rep.decay_c_half * r.t));
      env_growth.push_back(rep.growth_C0 * std::exp(2.25 * k * r.t));
    }
    io::write_svg_plot((dir / "max_sin2_half.svg").string(),
                       "max sin^2(alpha/2) with decay envelope", t,
                       col([](const auto& r) { return r.max_sin2_half; }), env_decay);
    io::write_svg_plot((dir / "max_H2.svg").string(), "max |H|^2 with growth envelope",
                       t, col([](const auto& r) { return r.max_H2; }), env_growth);
  }
}

int cmd_flow(const std::string& config_path, std::string out_dir, bool svg) {
  flow::FlowConfig cfg;
  try {
    cfg = config::load_flow_config(config_path);
  } catch (const InvalidSpec& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const InvalidInput& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
  if (const char* env = std::getenv("SMCF_OUT_DIR"); env && out_dir == ".")
    out_dir = env;
  fs::create_directories(out_dir);
  const fs::path dir(out_dir);

  flow::TimeSeries ts;
  try {
    ts = flow::run(cfg);
  } catch (const std::exception& e) {
    std::cerr << "flow error: " << e.what() << "\n";
    return 1;
  }
  io::write_timeseries_csv((dir / "series.csv").string(), ts);

  bool gate_fail = ts.status != "completed";
  {
    std::ofstream rep(dir / "monitors.txt");
    write_monitor_report(rep, ts, cfg.specs, cfg.surf.k, gate_fail);
  }
  write_monitor_report(std::cout, ts, cfg.specs, cfg.surf.k, gate_fail);
  if (svg) write_plots(dir, ts, cfg.surf.k);
  return gate_fail ? 1 : 0;
}

int cmd_report(const std::string& series_path, std::string out_dir, double k) {
  flow::TimeSeries ts;
  try {
    ts = io::read_timeseries_csv(series_path);
  } catch (const InvalidInput& e) {
    std::cerr << "report error: " << e.what() << "\n";
    return 2;
  }
  if (const char* env = std::getenv("SMCF_OUT_DIR"); env && out_dir == ".")
    out_dir = env;
  fs::create_directories(out_dir);
  write_plots(fs::path(out_dir), ts, k);
  std::cout << "plots written to " << out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for mean curvature flow of surfaces in a "
               "complex space form"};
  app.require_subcommand(1);

  long samples = 100000;
  std::uint64_t seed = 1;
  std::string corrupt;
  auto* va = app.add_subcommand("verify-algebra", "run the randomized oracle suites");
  va->add_option("--samples", samples, "sample count per algebra suite");
  va->add_option("--seed", seed, "random seed");
  va->add_option("--corrupt", corrupt, "negative control: corrupt the named suite");

  std::string csv_path;
  double yang_lambda = 0;
  auto* th = app.add_subcommand("thresholds", "re-derive and certify pinching thresholds");
  th->add_option("--csv", csv_path, "also write the table as CSV");
  th->add_option("--yang-lambda", yang_lambda, "extra lambda-family threshold row");

  std::string flow_config, flow_out = ".";
  bool flow_svg = false;
  auto* fl = app.add_subcommand("flow", "run a flow experiment from a config file");
  fl->add_option("config", flow_config, "key = value config file")->required();
  fl->add_option("--out", flow_out, "output directory");
  fl->add_flag("--svg", flow_svg, "also write SVG plots");

  std::string series_path, report_out = ".";
  double report_k = 1.0;
  auto* rp = app.add_subcommand("report", "plot a recorded time series");
  rp->add_option("series", series_path, "time-series CSV")->required();
  rp->add_option("--out", report_out, "output directory");
  rp->add_option("--k", report_k, "ambient curvature used for envelopes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (va->parsed()) {
      if (samples < 1) {
        std::cerr << "--samples must be >= 1\n";
        return 2;
      }
      return cmd_verify_algebra(samples, seed, corrupt);
    }
    if (th->parsed()) return cmd_thresholds(csv_path, yang_lambda);
    if (fl->parsed()) return cmd_flow(flow_config, flow_out, flow_svg);
    if (rp->parsed()) return cmd_report(series_path, report_out, report_k);
  } catch (const InvalidSpec& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
