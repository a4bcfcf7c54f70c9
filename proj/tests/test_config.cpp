#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "smcf/config.hpp"
#include "smcf/io.hpp"

using namespace smcf;

TEST_CASE("flat key = value parsing with comments and blanks") {
  std::istringstream in(R"(
# experiment
family = perturbed-graph
k = 2.0
nu = 48
nv = 48
eps = 0.05   # bump height
bump_width = 0.4
t_end = 0.25
c_cfl = 0.2
specs = thm32, thm51
scheme = midpoint
)");
  const auto cfg = config::parse_flow_config(in);
  CHECK(cfg.surf.family == surface::Family::PerturbedGraph);
  CHECK(cfg.surf.k == 2.0);
  CHECK(cfg.surf.Nu == 48);
  CHECK(cfg.surf.eps == 0.05);
  CHECK(cfg.t_end == 0.25);
  CHECK(cfg.c_cfl == 0.2);
  CHECK(cfg.scheme == flow::Scheme::Midpoint);
  REQUIRE(cfg.specs.size() == 2);
  CHECK(cfg.specs[0].variant == pinching::Variant::Thm32);
  CHECK(cfg.specs[1].variant == pinching::Variant::Thm51);
  CHECK(cfg.specs[0].k == 2.0);  // spec k follows the ambient k
}

TEST_CASE("rejections") {
  auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return config::parse_flow_config(in);
  };
  CHECK_THROWS_AS(parse("unknown_key = 3\n"), InvalidSpec);
  CHECK_THROWS_AS(parse("k = banana\n"), InvalidSpec);
  CHECK_THROWS_AS(parse("k = 1\nk = 2\n"), InvalidSpec);
  CHECK_THROWS_AS(parse("k\n"), InvalidSpec);
  CHECK_THROWS_AS(parse("family = torus\n"), InvalidSpec);
  CHECK_THROWS_AS(parse("specs = thm99\n"), InvalidSpec);
  CHECK_THROWS_AS(parse("scheme = rk7\n"), InvalidSpec);
  CHECK_THROWS_AS(parse("c_cfl = 0.9\n"), InvalidInput);  // module precondition
  CHECK_THROWS_AS(config::load_flow_config("/nonexistent/path.cfg"), InvalidSpec);
}

TEST_CASE("time series CSV round trip") {
  flow::TimeSeries ts;
  ts.spec_names = {"thm32", "thm51"};
  for (int i = 0; i < 3; ++i) {
    flow::TimeSeriesRow r;
    r.t = 0.01 * i;
    r.dt = 1e-3;
    r.area = 4.0 - 0.01 * i;
    r.min_cos_alpha = 0.95 + 0.001 * i;
    r.max_A2 = 0.5;
    r.max_H2 = 0.25;
    r.max_Q = {-0.4, -0.3};
    r.max_sin2_half = 0.02;
    r.res_cosalpha = 1e-4;
    r.res_H2 = 2e-4;
    ts.rows.push_back(r);
  }
  std::ostringstream out;
  io::write_timeseries_csv(out, ts);
  const std::string text = out.str();
  CHECK(text.rfind("t,dt,area,min_cos_alpha,max_A2,max_H2,max_Q_thm32,max_Q_thm51,"
                   "max_sin2_half,res_cosalpha,res_H2\n",
                   0) == 0);

  std::istringstream in(text);
  const auto back = io::read_timeseries_csv(in);
  REQUIRE(back.rows.size() == ts.rows.size());
  REQUIRE(back.spec_names == ts.spec_names);
  for (size_t i = 0; i < ts.rows.size(); ++i) {
    CHECK(back.rows[i].t == ts.rows[i].t);
    CHECK(back.rows[i].max_Q == ts.rows[i].max_Q);
    CHECK(back.rows[i].res_H2 == ts.rows[i].res_H2);
  }
}

TEST_CASE("malformed CSV is rejected") {
  auto read = [](const std::string& text) {
    std::istringstream in(text);
    return io::read_timeseries_csv(in);
  };
  CHECK_THROWS_AS(read(""), InvalidInput);
  CHECK_THROWS_AS(read("a,b,c\n1,2,3\n"), InvalidInput);
  const std::string hdr =
      "t,dt,area,min_cos_alpha,max_A2,max_H2,max_sin2_half,res_cosalpha,res_H2\n";
  CHECK_THROWS_AS(read(hdr), InvalidInput);               // no data rows
  CHECK_THROWS_AS(read(hdr + "1,2,3\n"), InvalidInput);   // row width mismatch
  CHECK_THROWS_AS(read(hdr + "1,2,3,4,5,x,7,8,9\n"), InvalidInput);
}

TEST_CASE("svg plot writer") {
  const std::string path = "/tmp/smcf_test_plot.svg";
  io::write_svg_plot(path, "series", {0, 1, 2}, {1.0, 0.5, 0.25}, {1.0, 0.6, 0.36});
  std::ifstream in(path);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string svg = ss.str();
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("polyline") != std::string::npos);
  CHECK_THROWS_AS(io::write_svg_plot(path, "bad", {}, {}), InvalidInput);
  CHECK_THROWS_AS(io::write_svg_plot(path, "bad", {0, 1}, {1}), InvalidInput);
}
