#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fcdg/cli.hpp"
#include "fcdg/error.hpp"
#include "fcdg/harness.hpp"

using namespace fcdg;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "fcdg_harness_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("config parsing") {
  const Config c = Config::parse(R"(
experiment = transport1d   # trailing comment
[basis]
type = "fc"
N = 40
[sweep]
n_el = 2, 4, 8
values = [0.5, 1e-3]
)");
  CHECK(c.get_string("experiment") == "transport1d");
  CHECK(c.get_string("basis.type") == "fc");
  CHECK(c.get_int("basis.N") == 40);
  CHECK(c.get_int("basis.p", 10) == 10);
  CHECK(c.get_int_list("sweep.n_el") == std::vector<int>{2, 4, 8});
  CHECK(c.get_double_list("sweep.values")[1] == doctest::Approx(1e-3));
  CHECK_THROWS_AS(c.get_string("missing"), ConfigError);
  CHECK_THROWS_AS(c.get_int("basis.type"), ConfigError);
  CHECK_THROWS_AS(Config::parse("[basis\nN = 2"), ConfigError);
  CHECK_THROWS_AS(Config::parse("just words"), ConfigError);
  CHECK_THROWS_AS(Config::parse("a = 1\na = 2"), ConfigError);
  CHECK_THROWS_AS(Config::load("/nonexistent/file.cfg"), ConfigError);
}

TEST_CASE("config translation") {
  Config c = Config::parse("[basis]\nN = 30\ndegree = 6\n[solver]\nflux = centered\ncfl = 0.1\n");
  const Transport1DConfig t = transport1d_from_config(c);
  CHECK(t.basis.fc.n_points == 30);
  CHECK(t.basis.fc.poly_points == 7);
  CHECK(t.flux == FluxKind::Centered);
  CHECK(t.cfl == doctest::Approx(0.1));
  c.set("basis.p", "5");
  CHECK_THROWS_AS(basis_from_config(c), ConfigError);
  CHECK_THROWS_AS(basis_from_config(Config::parse("[basis]\nN = 10\np = 10\n")), ConfigError);
  const BasisSpec l = basis_from_config(Config::parse("[basis]\ntype = legendre\ndegree = 4\n"));
  CHECK(l.type == BasisType::Legendre);
  CHECK(l.degree == 4);
  const MaxwellConfig m = maxwell_from_config(Config::parse(
      "[material]\nmodel = duffing\nlambdas = 1, 0.5\n[forcing]\nenabled = true\n[initial]\nkind = zero\n"));
  CHECK(m.setup.material == MaterialModel::Duffing);
  CHECK(m.setup.duffing.lambdas.size() == 2);
  CHECK(m.setup.forcing.enabled);
  CHECK_FALSE(m.standing_mode_error);
}

TEST_CASE("rate fit") {
  std::vector<double> h, e;
  for (int n : {4, 6, 8, 12, 16}) {
    h.push_back(2.0 / n);
    e.push_back(3.7 * std::pow(2.0 / n, 7.25));
  }
  const RateFit fit = fit_rate(h, e);
  CHECK(std::fabs(fit.rate - 7.25) <= 1e-10);
  CHECK(fit.predict(0.5) == doctest::Approx(3.7 * std::pow(0.5, 7.25)).epsilon(1e-10));
  CHECK_THROWS_AS(fit_rate({1.0}, {1.0}), ParameterError);
  CHECK_THROWS_AS(fit_rate({1.0, 1.0}, {1.0, 2.0}), ParameterError);
}

TEST_CASE("plateau detection") {
  std::vector<ConvergenceRow> rows;
  for (int n : {2, 4, 8, 16, 32, 64}) {
    const double h = 1.0 / n;
    rows.push_back({n, h, std::max(std::pow(h, 6.0), 1e-8)});
  }
  const ConvergenceReport rep = analyze_convergence(rows);
  // 16^-6 = 6e-8 still converges; 32^-6 = 9.3e-10 is clamped to 1e-8, more
  // than 10 times the extrapolated value.
  CHECK(rep.fit_rows == 4);
  CHECK(rep.rate == doctest::Approx(6.0).epsilon(1e-10));
  REQUIRE(rep.saturation.has_value());
  CHECK(*rep.saturation == doctest::Approx(1e-8));
  CHECK_FALSE(rep.rows[4].in_fit);

  rows.resize(4);
  const ConvergenceReport clean = analyze_convergence(rows);
  CHECK_FALSE(clean.saturation.has_value());
  CHECK(clean.fit_rows == 4);
}

TEST_CASE("csv output is deterministic") {
  const auto p = scratch("a.csv");
  write_csv(p, {"x", "y"}, {{0.1, 1.0 / 3.0}, {2.0, -1e-20}});
  CHECK(slurp(p) == "x,y\n0.10000000000000001,0.33333333333333331\n2,-9.9999999999999995e-21\n");
  CHECK_THROWS_AS(write_csv(p, {"x"}, {{1.0, 2.0}}), ShapeError);
}

TEST_CASE("convergence and long-time studies") {
  const Config c = Config::parse(R"(
experiment = transport1d
[basis]
type = legendre
degree = 4
[solver]
cfl = 0.05
t_final = 0.5
[initial]
param = 1
[sweep]
n_el = 4, 8, 16
)");
  const ConvergenceReport rep = run_convergence_study(c);
  CHECK(rep.rows.size() == 3);
  CHECK(rep.rate == doctest::Approx(5.0).epsilon(0.15));

  Config lt = c;
  lt.set("mesh.n_el", "8");
  lt.set("solver.record_interval", "0.1");
  const auto hist = run_long_time_study(lt);
  CHECK(hist.size() == 6);
  CHECK(hist.back().t == doctest::Approx(0.5));
  lt.set("basis.type", "fc");
  lt.set("basis.N", "20");
  lt.set("solver.t_final", "0");
  const auto zero = run_long_time_study(lt);
  CHECK(zero.size() == 1);
  CHECK(zero[0].l2_error <= 1e-14);
}

TEST_CASE("command line") {
  const auto cfg = scratch("spec.cfg");
  std::ofstream(cfg) << "[basis]\nN = 20\n[mesh]\nn_el = 3\n";
  const auto out = scratch("spectrum.csv");
  CHECK(cli_main({"fcdg", "spectrum", "--config", cfg.string(), "--output", out.string()}) == 0);
  std::ifstream in(out);
  int lines = 0;
  for (std::string s; std::getline(in, s);) ++lines;
  CHECK(lines == 1 + 20 * 3);
  const std::string first = slurp(out);
  CHECK(cli_main({"fcdg", "spectrum", "--config", cfg.string(), "--output", out.string()}) == 0);
  CHECK(slurp(out) == first);

  CHECK(cli_main({"fcdg"}) == 2);
  CHECK(cli_main({"fcdg", "frobnicate"}) == 2);
  CHECK(cli_main({"fcdg", "converge", "--config", "/nonexistent.cfg"}) == 2);
  CHECK(cli_main({"fcdg", "spectrum", "--config", cfg.string(), "--set", "solver.flux=sideways"}) == 2);
  CHECK(cli_main({"fcdg", "transport1d", "--config", cfg.string(), "--set", "solver.cfl=8", "--set",
                  "solver.t_final=40", "--set", "solver.flux=centered", "--output", scratch("t.csv").string()}) == 1);

  const auto conv = scratch("conv.cfg");
  std::ofstream(conv) << "experiment = transport1d\n[basis]\ntype = legendre\ndegree = 3\n"
                         "[solver]\nt_final = 0.1\ncfl = 0.05\n[initial]\nparam = 1\n[sweep]\nn_el = 4, 8\n";
  const auto report = scratch("conv.csv");
  CHECK(cli_main({"fcdg", "converge", "-c", conv.string(), "-o", report.string()}) == 0);
  CHECK(std::filesystem::exists(report));
}
