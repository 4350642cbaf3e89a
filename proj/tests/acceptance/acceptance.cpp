// Acceptance run: one PASS/FAIL line per criterion.
//
//   acceptance [--config-dir DIR] [--output-dir DIR] [--only LIST] [--skip-long]
//
// Criteria listed in kKnownDeviations still print FAIL when they fail but do
// not change the exit status.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Dense>

#include "fcdg/analysis.hpp"
#include "fcdg/cli.hpp"
#include "fcdg/config.hpp"
#include "fcdg/element_basis.hpp"
#include "fcdg/error.hpp"
#include "fcdg/fc_basis.hpp"
#include "fcdg/harness.hpp"
#include "fcdg/maxwell2d.hpp"
#include "fcdg/operators.hpp"
#include "fcdg/quadrature.hpp"
#include "fcdg/time_integration.hpp"

#ifndef FCDG_CONFIG_DIR
#define FCDG_CONFIG_DIR "configs"
#endif

namespace fs = std::filesystem;
using namespace fcdg;

namespace {

const std::set<std::string> kKnownDeviations = {"6c", "7"};

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Options {
  fs::path config_dir = FCDG_CONFIG_DIR;
  fs::path output_dir = "acceptance_output";
  std::set<int> only;
  bool skip_long = false;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

class Report {
 public:
  void line(const std::string& id, const std::string& label, const Outcome& o, double seconds) {
    const bool known = kKnownDeviations.count(id) > 0;
    std::printf("%s [%s] %s: %s (%.1f s)%s\n", o.pass ? "PASS" : "FAIL", id.c_str(), label.c_str(),
                o.detail.c_str(), seconds, !o.pass && known ? " [known deviation]" : "");
    std::fflush(stdout);
    if (!o.pass) {
      ++failed_;
      if (!known) ++blocking_;
    }
  }
  int failed() const { return failed_; }
  int blocking() const { return blocking_; }

 private:
  int failed_ = 0;
  int blocking_ = 0;
};

template <typename F>
void run(Report& rep, const std::string& id, const std::string& label, F&& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  rep.line(id, label, o, s);
}

Config load(const Options& opt, const std::string& name) { return Config::load(opt.config_dir / name); }

// ---------------------------------------------------------------------------

Outcome nodality() {
  Outcome o;
  std::ostringstream d;
  for (int n : {20, 40, 80}) {
    FcParams p;
    p.n_points = n;
    const FcBasis b = build_basis(p);
    const auto z = uniform_grid(p);
    const double dev = (evaluate_basis(b, z) - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
    o.pass = o.pass && dev <= 1e-12;
    d << "N=" << n << " " << fmt("%.2e", dev) << " ";
  }
  o.detail = d.str() + "(tol 1e-12)";
  return o;
}

Outcome conditioning() {
  const int ns[] = {20, 40, 80, 200};
  const double ref[] = {324.32, 322.66, 322.22, 322.07};
  Outcome o;
  std::ostringstream d;
  double lo = 1e300, hi = 0.0;
  bool band = true, spd = true;
  for (int i = 0; i < 4; ++i) {
    FcParams p;
    p.n_points = ns[i];
    const ElementOperators ops = fc_operators(p);
    const Eigen::MatrixXd& m = ops.mass;
    spd = spd && (m - m.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * m.cwiseAbs().maxCoeff() &&
          Eigen::LLT<Eigen::MatrixXd>(m).info() == Eigen::Success;
    const double k = condition_number(m);
    lo = std::min(lo, k);
    hi = std::max(hi, k);
    band = band && std::fabs(k - ref[i]) <= 0.05 * ref[i];
    d << "N=" << ns[i] << " " << fmt("%.2f", k) << " ";
  }
  const double flat = (hi - lo) / lo;
  o.pass = band && spd && flat <= 0.02;
  d << "spread " << fmt("%.2f%%", 100 * flat) << (spd ? " SPD" : " not SPD") << (band ? "" : " outside 5% band");
  o.detail = d.str();
  return o;
}

struct RateCheck {
  std::string config;
  double target;
  double tol;
};

Outcome convergence(const Options& opt, const std::vector<RateCheck>& checks, double plateau_cap) {
  Outcome o;
  std::ostringstream d;
  for (const RateCheck& c : checks) {
    const ConvergenceReport rep = run_convergence_study(load(opt, c.config));
    const bool ok = std::fabs(rep.rate - c.target) <= c.tol;
    double floor = rep.rows.back().l2_error;
    if (rep.saturation) floor = *rep.saturation;
    const bool flat_ok = plateau_cap <= 0.0 || floor <= plateau_cap;
    o.pass = o.pass && ok && flat_ok;
    d << c.config << " rate " << fmt("%.2f", rep.rate) << " vs " << fmt("%.2f", c.target) << "+-"
      << fmt("%.1f", c.tol);
    if (plateau_cap > 0.0) d << " floor " << fmt("%.2e", floor);
    d << "; ";
  }
  o.detail = d.str();
  return o;
}

// Dense Maxwell operator on a small PEC cavity.
Eigen::MatrixXd maxwell_dense(const ElementBasis& basis, FluxKind flux) {
  const Mesh2D mesh(-1.0, 1.0, -1.0, 1.0, 2, 2);
  MaxwellSetup s;
  s.flux = flux;
  s.bc = EmBoundary::PecCavity;
  const MaxwellOperator op(basis.ops(), mesh, basis.nodes(), s);
  const int n = op.dofs();
  Eigen::MatrixXd a(n, n);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n), col;
  for (int j = 0; j < n; ++j) {
    e(j) = 1.0;
    op.rhs(0.0, e, col);
    a.col(j) = col;
    e(j) = 0.0;
  }
  return a;
}

double relative_real_part(const SpectrumResult& s) {
  double re = 0.0;
  for (const auto& l : s.eigenvalues) re = std::max(re, std::fabs(l.real()));
  return re / s.spectral_radius;
}

void spectral_claims(Report& rep) {
  const Mesh1D mesh8 = Mesh1D::uniform(-1.0, 1.0, 8);
  std::vector<SpectrumResult> up;
  run(rep, "6a", "upwind spectrum in the closed left half plane", [&] {
    Outcome o;
    std::ostringstream d;
    for (int n : {20, 40, 80}) {
      up.push_back(operator_spectrum(ElementBasis(fc_spec(n)), mesh8, FluxKind::Upwind));
      o.pass = o.pass && up.back().max_real <= 1e-10;
      d << "N=" << n << " max Re " << fmt("%.2e", up.back().max_real) << " ";
    }
    o.detail = d.str() + "(tol 1e-10)";
    return o;
  });
  run(rep, "6b", "centered and alternating spectra on the imaginary axis", [&] {
    Outcome o;
    std::ostringstream d;
    const ElementBasis b20(fc_spec(20));
    const double t = relative_real_part(operator_spectrum(b20, mesh8, FluxKind::Centered));
    d << "transport centered " << fmt("%.2e", t);
    o.pass = t <= 1e-9;
    const ElementBasis b10(fc_spec(12, 6));
    for (FluxKind f : {FluxKind::Centered, FluxKind::Alternating}) {
      const double m = relative_real_part(spectrum_of(maxwell_dense(b10, f), 1.0));
      d << ", maxwell " << to_string(f) << " " << fmt("%.2e", m);
      o.pass = o.pass && m <= 1e-9;
    }
    o.detail = d.str() + " (relative, tol 1e-9)";
    return o;
  });
  run(rep, "6c", "FC scaled max imaginary eigenvalue", [&] {
    Outcome o;
    std::ostringstream d;
    bool range = true, monotone = true;
    for (std::size_t i = 0; i < up.size(); ++i) {
      const double v = up[i].max_imag;
      range = range && v >= 2.5 && v <= M_PI + 0.1;
      if (i > 0) monotone = monotone && std::fabs(v - M_PI) < std::fabs(up[i - 1].max_imag - M_PI);
      d << fmt("%.4f", v) << " ";
    }
    o.pass = !up.empty() && range && monotone;
    o.detail = "N=20,40,80: " + d.str() + (range ? "in [2.5, pi+0.1]" : "outside [2.5, pi+0.1]") +
               (monotone ? ", monotone toward pi" : ", not monotone toward pi");
    return o;
  });
  run(rep, "6d", "spectral radius Legendre q=20 / FC", [&] {
    const double leg = operator_spectrum(ElementBasis(legendre_spec(20)), mesh8, FluxKind::Upwind).spectral_radius;
    const double fc = operator_spectrum(ElementBasis(fc_spec(21)), mesh8, FluxKind::Upwind).spectral_radius;
    return Outcome{leg / fc > 3.0, "21 dofs per element: " + fmt("%.3f", leg) + " / " + fmt("%.3f", fc) +
                                       " = " + fmt("%.2f", leg / fc) + " (need > 3)"};
  });
  run(rep, "6e", "spectral radius under doubling n_el", [&] {
    const ElementBasis b(fc_spec(20));
    const double r8 = operator_spectrum(b, mesh8, FluxKind::Upwind).spectral_radius;
    const double r16 = operator_spectrum(b, Mesh1D::uniform(-1.0, 1.0, 16), FluxKind::Upwind).spectral_radius;
    const double rel = std::fabs(r16 - r8) / r8;
    return Outcome{rel <= 0.02, "n_el 8 -> 16: " + fmt("%.4f", r8) + " -> " + fmt("%.4f", r16) + " (" +
                                    fmt("%.3f%%", 100 * rel) + ", tol 2%)"};
  });
}

Outcome dispersion() {
  std::vector<double> K(801);
  for (std::size_t i = 0; i < K.size(); ++i) K[i] = M_PI * i / (K.size() - 1);
  const auto fc = dispersion_relation(ElementBasis(fc_spec(40)), FluxKind::Upwind, K, DispersionScale::PerDof);
  const auto lg = dispersion_relation(ElementBasis(legendre_spec(10)), FluxKind::Upwind, K, DispersionScale::PerDof);
  const double kf = accurate_wavenumber_limit(fc, 0.01), kl = accurate_wavenumber_limit(lg, 0.01);
  return {kf >= 1.5 * kl, "1% limit FC N=40 " + fmt("%.3f", kf) + ", Legendre q=10 " + fmt("%.3f", kl) +
                              ", ratio " + fmt("%.2f", kf / kl) + " (need >= 1.5)"};
}

// Property suites -----------------------------------------------------------

Field1D sample1d(const ElementBasis& b, const Mesh1D& m, const std::function<double(double)>& f) {
  Field1D u(b.size(), m.n_el);
  for (int k = 0; k < m.n_el; ++k) u.col(k) = b.project([&](double z) { return f(m.x(k, z)); });
  return u;
}

double energy_rate(const Field1D& u, const Field1D& du, const ElementOperators& ops, const Mesh1D& m) {
  double r = 0.0;
  for (int k = 0; k < m.n_el; ++k) r += 2.0 * m.jacobians[k] * u.col(k).dot(ops.mass * du.col(k));
  return r;
}

void property_suites(Report& rep) {
  run(rep, "8a", "upwind energy decay", [] {
    const ElementBasis b(fc_spec(20));
    const Mesh1D m = Mesh1D::uniform(-1.0, 1.0, 5);
    const Field1D u = sample1d(b, m, [](double x) { return std::exp(std::sin(M_PI * x)) + x; });
    const double r = energy_rate(u, semidiscrete_rhs(u, b.ops(), m, 1.0, FluxKind::Upwind), b.ops(), m);
    return Outcome{r < 0.0, "dE/dt = " + fmt("%.3e", r)};
  });
  run(rep, "8b", "centered energy conservation over one period", [] {
    Transport1DConfig c;
    c.basis = fc_spec(20);
    c.n_el = 6;
    c.flux = FluxKind::Centered;
    c.t_final = 2.0;
    c.initial.kind = InitialData::Kind::Sine;
    c.initial.param = 3.0;
    const ElementBasis b(c.basis);
    const Mesh1D m = Mesh1D::uniform(c.a, c.b, c.n_el);
    const double e0 = discrete_energy(sample1d(b, m, [&](double x) { return c.initial(x); }), b.ops(), m);
    const double e1 = discrete_energy(solve_transport_1d(c, b).coeffs, b.ops(), m);
    const double rel = std::fabs(e1 - e0) / e0;
    return Outcome{rel <= 1e-8, "relative change " + fmt("%.2e", rel) + " (tol 1e-8)"};
  });
  run(rep, "8c", "free-stream preservation", [] {
    const ElementBasis b(fc_spec(40));
    double worst = 0.0;
    const Mesh1D m = Mesh1D::uniform(0.0, 6.0, 3);
    const Field1D one = Field1D::Ones(b.size(), 3);
    for (FluxKind f : {FluxKind::Upwind, FluxKind::Centered})
      worst = std::max(worst, semidiscrete_rhs(one, b.ops(), m, 1.0, f).cwiseAbs().maxCoeff());
    const Mesh2D m2(0.0, 4.0, 0.0, 4.0, 2, 2);
    const Field2D c2 = Field2D::Ones(b.size(), b.size() * 4);
    worst = std::max(worst, semidiscrete_rhs_2d_transport(c2, 1.0, 1.0, b.ops(), m2, FluxKind::Upwind)
                                .cwiseAbs()
                                .maxCoeff());
    return Outcome{worst <= 1e-10, "max residual " + fmt("%.2e", worst) + " (tol 1e-10)"};
  });
  run(rep, "8d", "summation-by-parts identity", [] {
    double worst = 0.0;
    for (int n : {20, 40, 80}) {
      FcParams p;
      p.n_points = n;
      const ElementOperators o = fc_operators(p);
      const Eigen::MatrixXd d = o.stiffness + o.stiffness.transpose() -
                                (o.lift_right * o.lift_right.transpose() - o.lift_left * o.lift_left.transpose());
      worst = std::max(worst, d.cwiseAbs().maxCoeff());
    }
    return Outcome{worst <= 1e-9, "N=20,40,80 max " + fmt("%.2e", worst) + " (tol 1e-9)"};
  });
  run(rep, "8e", "Bloch matrix equals the periodic operator", [] {
    double worst = 0.0;
    const int n_el = 4;
    const Mesh1D mesh = Mesh1D::uniform(-n_el, n_el, n_el);
    for (const BasisSpec& spec : {fc_spec(10, 5), legendre_spec(9)}) {
      const ElementBasis b(spec);
      const int n = b.size();
      for (FluxKind flux : {FluxKind::Upwind, FluxKind::Centered}) {
        const Eigen::MatrixXcd a = Transport1D(b.ops(), mesh, 1.0, flux).dense().cast<std::complex<double>>();
        for (int j = 0; j < n_el; ++j) {
          const double theta = 2.0 * M_PI * j / n_el;
          const Eigen::MatrixXcd bl = bloch_matrix(b.ops(), flux, theta);
          Eigen::MatrixXcd u(n * n_el, n), expect(n * n_el, n);
          for (int k = 0; k < n_el; ++k) {
            const std::complex<double> ph = std::polar(1.0, theta * k);
            u.middleRows(k * n, n) = ph * Eigen::MatrixXcd::Identity(n, n);
            expect.middleRows(k * n, n) = ph * bl;
          }
          worst = std::max(worst, (a * u - expect).cwiseAbs().maxCoeff());
        }
      }
    }
    return Outcome{worst <= 1e-8, "N=10, n_el=4 max " + fmt("%.2e", worst) + " (tol 1e-8)"};
  });
  run(rep, "8f", "Duffing with F = 1 matches Lorentz", [] {
    const ElementBasis b(fc_spec(20));
    const Mesh2D mesh(0.0, 1.0, 0.0, 1.0, 2, 2);
    MaxwellSetup s;
    s.material = MaterialModel::Duffing;
    s.duffing.omega0 = 3.0;
    s.duffing.omega_p = 2.0;
    s.duffing.tau_inv = 0.4;
    s.duffing.lambdas = {1.0, 0.0};
    s.forcing.enabled = true;
    MaxwellSetup l = s;
    l.material = MaterialModel::Lorentz;
    const MaxwellOperator od(b.ops(), mesh, b.nodes(), s), ol(b.ops(), mesh, b.nodes(), l);
    Eigen::VectorXd ud = Eigen::VectorXd::Zero(od.dofs()), ul = ud;
    const TimeRhs fd = [&](double t, const Eigen::VectorXd& x, Eigen::VectorXd& y) { od.rhs(t, x, y); };
    const TimeRhs fl = [&](double t, const Eigen::VectorXd& x, Eigen::VectorXd& y) { ol.rhs(t, x, y); };
    double worst = 0.0;
    const double dt = 2e-4;
    for (int k = 0; k < 200; ++k) {
      rk4_step(ud, fd, k * dt, dt);
      rk4_step(ul, fl, k * dt, dt);
      worst = std::max(worst, (ud - ul).cwiseAbs().maxCoeff());
    }
    return Outcome{worst <= 1e-10 && ud.cwiseAbs().maxCoeff() > 0.0,
                   "200 forced steps, max node difference " + fmt("%.2e", worst) + " (tol 1e-10)"};
  });
  run(rep, "8g", "quadrature monomial exactness", [] {
    double worst = 0.0;
    for (int order : {4, 8, 12, 16}) {
      const int n = 2 * gregory_stencil_width(order) + 8;
      const GregoryRule r = gregory_weights(n, order);
      for (int deg = 0; deg < order; ++deg) {
        double q = 0.0;
        for (int l = 0; l < n; ++l) q += r.weights[l] * std::pow(-1.0 + 2.0 * l / (n - 1), deg);
        worst = std::max(worst, std::fabs(q - (deg % 2 ? 0.0 : 2.0 / (deg + 1))));
      }
    }
    return Outcome{worst <= 1e-12, "orders 4..16 max error " + fmt("%.2e", worst)};
  });
  run(rep, "8h", "Taylor stability classification", [] {
    const std::set<int> stable = {3, 4, 7, 8, 11, 12};
    std::string got;
    bool ok = true;
    for (int k = 1; k <= 12; ++k) {
      const bool s = stability_includes_imaginary_axis(k);
      ok = ok && s == (stable.count(k) > 0);
      if (s) got += std::to_string(k) + " ";
    }
    return Outcome{ok, "imaginary-axis stable orders: " + got};
  });
}

// Forced cavity and Duffing runs --------------------------------------------

std::vector<std::vector<double>> read_csv(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw Error("cannot read " + p.string());
  std::string line;
  std::getline(in, line);
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> r;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) r.push_back(std::stod(cell));
    rows.push_back(r);
  }
  return rows;
}

Outcome long_run(const Options& opt, const std::string& config, const std::string& tag,
                 const std::vector<std::string>& extra) {
  const fs::path dir = opt.output_dir / tag;
  fs::create_directories(dir);
  const fs::path energy = dir / "energy.csv";
  std::vector<std::string> args{"fcdg", "maxwell2d", "--config", (opt.config_dir / config).string(),
                                "--output", energy.string(), "--set",
                                "output.snapshot_prefix=" + (dir / "hz").string()};
  for (const auto& e : extra) {
    args.push_back("--set");
    args.push_back(e);
  }
  const int rc = cli_main(args);
  if (rc != 0) return {false, "fcdg maxwell2d exited with " + std::to_string(rc)};
  std::ostringstream d;
  bool ok = true;
  for (const char* t : {"2", "5", "50"}) {
    const fs::path snap = dir / (std::string("hz_t") + t + ".csv");
    bool finite = fs::exists(snap);
    if (finite) {
      for (const auto& r : read_csv(snap))
        for (double v : r) finite = finite && std::isfinite(v);
    }
    ok = ok && finite;
    if (!finite) d << "snapshot t=" << t << " missing or not finite; ";
  }
  double peak = 0.0, slack = 0.0;
  for (const auto& r : read_csv(energy)) {
    // t, trapezoid, mass, total, bound
    if (!std::isfinite(r[3])) ok = false;
    peak = std::max(peak, r[3]);
    slack = std::max(slack, r[3] / std::max(r[4], 1e-300));
  }
  ok = ok && slack <= 1.0 + 1e-6;
  d << "snapshots t=2,5,50 written, peak energy " << fmt("%.4g", peak) << ", max energy/bound "
    << fmt("%.4f", slack);
  return {ok, d.str()};
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  std::string only;
  CLI::App app{"FC-DG acceptance run"};
  app.add_option("--config-dir", opt.config_dir, "directory with the experiment configs");
  app.add_option("--output-dir", opt.output_dir, "where long runs write their CSV files");
  app.add_option("--only", only, "comma separated criteria numbers");
  app.add_flag("--skip-long", opt.skip_long, "skip the forced cavity and Duffing runs");
  CLI11_PARSE(app, argc, argv);
  std::stringstream ss(only);
  for (std::string tok; std::getline(ss, tok, ',');)
    if (!tok.empty()) opt.only.insert(std::stoi(tok));
  auto want = [&](int k) { return opt.only.empty() || opt.only.count(k) > 0; };

  Report rep;
  if (want(1)) run(rep, "1", "nodality", nodality);
  if (want(2)) run(rep, "2", "mass matrix conditioning", conditioning);
  if (want(3))
    run(rep, "3", "1-D transport convergence", [&] {
      return convergence(opt,
                         {{"transport1d_deg9_n20.cfg", 10.08, 1.0},
                          {"transport1d_deg9_n40.cfg", 10.01, 1.0},
                          {"transport1d_deg6_n80.cfg", 6.99, 0.7},
                          {"transport1d_deg7_n40.cfg", 8.10, 0.7}},
                         5e-9);
    });
  if (want(4))
    run(rep, "4", "2-D transport convergence",
        [&] { return convergence(opt, {{"transport2d_n20.cfg", 9.46, 1.0}}, 0.0); });
  if (want(5))
    run(rep, "5", "Maxwell standing mode convergence", [&] {
      return convergence(opt, {{"maxwell_centered_n20.cfg", 9.49, 1.0}, {"maxwell_alternating_n40.cfg", 9.43, 1.0}},
                         0.0);
    });
  if (want(6)) spectral_claims(rep);
  if (want(7)) run(rep, "7", "dispersion accuracy", dispersion);
  if (want(8)) property_suites(rep);
  if (want(9) && !opt.skip_long) {
    run(rep, "9a", "forced cavity", [&] { return long_run(opt, "maxwell_forced_cavity.cfg", "forced_cavity", {}); });
    for (const char* w : {"1", "100", "1000"}) {
      run(rep, std::string("9b-") + w, std::string("Duffing demo omega0=") + w, [&] {
        return long_run(opt, "duffing_demo.cfg", std::string("duffing_omega0_") + w,
                        {std::string("material.omega0=") + w});
      });
    }
  }
  std::printf("%d failed, %d outside the known deviations\n", rep.failed(), rep.blocking());
  return rep.blocking() == 0 ? 0 : 1;
}
