#include "fcdg/cli.hpp"

#include <cmath>
#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "fcdg/analysis.hpp"
#include "fcdg/error.hpp"
#include "fcdg/harness.hpp"
#include "fcdg/legendre.hpp"

namespace fcdg {

namespace {

struct Options {
  std::string config_path;
  std::string output;
  std::vector<std::string> overrides;
};

Config load_with_overrides(const Options& opt) {
  Config cfg = opt.config_path.empty() ? Config::parse("", "<none>") : Config::load(opt.config_path);
  for (const auto& kv : opt.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("--set expects key=value, got '" + kv + "'");
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  return cfg;
}

std::filesystem::path output_path(const Options& opt, const Config& cfg, const std::string& fallback) {
  if (!opt.output.empty()) return opt.output;
  return cfg.get_string("output.csv", fallback);
}

void run_assemble(const Config& cfg, const Options& opt) {
  const ElementBasis basis(basis_from_config(cfg));
  const ElementOperators& ops = basis.ops();
  validate_operators(ops);
  std::printf("%s size=%d cond(M)=%.6f\n", describe(ops.basis_id).c_str(), ops.size(),
              condition_number(ops.mass));
  const std::string out = !opt.output.empty() ? opt.output : cfg.get_string("output.operators", "");
  if (!out.empty()) store_cache(ops, out);
}

void run_basis_dump(const Config& cfg, const Options& opt) {
  const BasisSpec spec = basis_from_config(cfg);
  const int samples = cfg.get_int("output.samples", 1000);
  if (samples < 2) throw ConfigError("output.samples must be at least 2");
  std::vector<double> z(samples);
  Eigen::MatrixXd values;
  if (spec.type == BasisType::Fc) {
    const FcBasis b = build_basis(spec.fc);
    for (int m = 0; m < samples; ++m) z[m] = -1.0 + b.period_len * m / samples;
    values = evaluate_basis(b, z);
  } else {
    for (int m = 0; m < samples; ++m) z[m] = -1.0 + 2.0 * m / (samples - 1);
    values = legendre_vandermonde(spec.degree, z);
  }
  std::vector<std::string> header{"z"};
  for (int i = 0; i < values.cols(); ++i) header.push_back("phi" + std::to_string(i));
  std::vector<std::vector<double>> rows;
  for (int m = 0; m < samples; ++m) {
    std::vector<double> row{z[m]};
    for (int i = 0; i < values.cols(); ++i) row.push_back(values(m, i));
    rows.push_back(std::move(row));
  }
  write_csv(output_path(opt, cfg, "basis.csv"), header, rows);
}

void run_transport1d(const Config& cfg, const Options& opt) {
  const Transport1DConfig c = transport1d_from_config(cfg);
  const ElementBasis basis(c.basis);
  const Transport1DResult r = solve_transport_1d(c, basis);
  const Mesh1D mesh = Mesh1D::uniform(c.a, c.b, c.n_el);
  std::vector<std::vector<double>> rows;
  for (int k = 0; k < c.n_el; ++k)
    for (int i = 0; i < basis.size(); ++i) {
      const double x = mesh.x(k, basis.nodes()[i]);
      rows.push_back({x, r.node_values(i, k), transport_exact(c, x, c.t_final)});
    }
  write_csv(output_path(opt, cfg, "transport1d.csv"), {"x", "u", "exact"}, rows);
  if (cfg.has("output.history")) {
    std::vector<std::vector<double>> hist;
    for (const auto& s : r.history) hist.push_back({s.t, s.l2_error});
    write_csv(cfg.get_string("output.history"), {"t", "l2_error"}, hist);
  }
  std::printf("steps=%ld dt=%s l2_error=%s\n", r.steps, format_number(r.dt).c_str(),
              format_number(r.final_error).c_str());
}

std::vector<std::vector<double>> field_rows(const Mesh2D& mesh, const std::vector<double>& nodes,
                                            std::initializer_list<const Field2D*> fields) {
  const int n = static_cast<int>(nodes.size());
  std::vector<std::vector<double>> rows;
  for (int ey = 0; ey < mesh.ny; ++ey)
    for (int ex = 0; ex < mesh.nx; ++ex) {
      const Eigen::Index c0 = static_cast<Eigen::Index>(mesh.element(ex, ey)) * n;
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
          std::vector<double> row{mesh.x(ex, nodes[i]), mesh.y(ey, nodes[j])};
          for (const Field2D* f : fields) row.push_back((*f)(i, c0 + j));
          rows.push_back(std::move(row));
        }
    }
  return rows;
}

void run_transport2d(const Config& cfg, const Options& opt) {
  const Transport2DConfig c = transport2d_from_config(cfg);
  const ElementBasis basis(c.basis);
  const Transport2DResult r = solve_transport_2d(c, basis);
  const Mesh2D mesh(c.x0, c.x1, c.y0, c.y1, c.n_el_x, c.n_el_y);
  write_csv(output_path(opt, cfg, "transport2d.csv"), {"x", "y", "u"},
            field_rows(mesh, basis.nodes(), {&r.node_values}));
  std::printf("steps=%ld dt=%s l2_error=%s\n", r.steps, format_number(r.dt).c_str(),
              format_number(r.final_error).c_str());
}

void run_maxwell2d(const Config& cfg, const Options& opt) {
  const MaxwellConfig c = maxwell_from_config(cfg);
  const ElementBasis basis(c.basis);
  const MaxwellResult r = solve_maxwell_2d(c, basis);
  std::vector<std::vector<double>> energy;
  for (const auto& e : r.energy) energy.push_back({e.t, e.trapezoid, e.mass, e.total, e.bound});
  write_csv(output_path(opt, cfg, "maxwell_energy.csv"), {"t", "trapezoid", "mass", "total", "bound"},
            energy);
  const Mesh2D mesh(c.x0, c.x1, c.y0, c.y1, c.n_el_x, c.n_el_y);
  const std::string prefix = cfg.get_string("output.snapshot_prefix", "maxwell_snapshot");
  for (const auto& s : r.snapshots) {
    char tag[64];
    std::snprintf(tag, sizeof tag, "_t%g.csv", s.t);
    write_csv(prefix + tag, {"x", "y", "hz", "ex", "ey"},
              field_rows(mesh, basis.nodes(), {&s.hz, &s.ex, &s.ey}));
  }
  std::printf("steps=%ld dt=%s t_final=%s", r.steps, format_number(r.dt).c_str(),
              format_number(r.t_final).c_str());
  if (c.standing_mode_error) std::printf(" hz_error=%s", format_number(r.hz_error).c_str());
  std::printf("\n");
}

DispersionScale parse_scale(const std::string& s) {
  if (s == "node") return DispersionScale::NodeSpacing;
  if (s == "dof") return DispersionScale::PerDof;
  throw ConfigError("unknown dispersion.scale '" + s + "' (expected node or dof)");
}

void run_dispersion(const Config& cfg, const Options& opt) {
  const ElementBasis basis(basis_from_config(cfg));
  const int samples = cfg.get_int("dispersion.samples", 200);
  if (samples < 2) throw ConfigError("dispersion.samples must be at least 2");
  std::vector<double> K(samples);
  for (int i = 0; i < samples; ++i) K[i] = M_PI * i / (samples - 1);
  const DispersionResult d = dispersion_relation(basis, parse_flux(cfg.get_string("solver.flux", "upwind")),
                                                 K, parse_scale(cfg.get_string("dispersion.scale", "node")));
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < d.K.size(); ++i)
    rows.push_back({d.K[i], d.Omega[i].real(), d.Omega[i].imag(), d.projection[i]});
  write_csv(output_path(opt, cfg, "dispersion.csv"), {"K", "re_omega", "im_omega", "projection"}, rows);
  const double tol = cfg.get_double("dispersion.tolerance", 0.01);
  std::printf("accurate up to K=%s (relative tolerance %g)\n",
              format_number(accurate_wavenumber_limit(d, tol)).c_str(), tol);
}

void run_spectrum(const Config& cfg, const Options& opt) {
  const ElementBasis basis(basis_from_config(cfg));
  const Mesh1D mesh = Mesh1D::uniform(cfg.get_double("mesh.a", -1.0), cfg.get_double("mesh.b", 1.0),
                                      cfg.get_int("mesh.n_el", 30));
  const SpectrumResult s =
      operator_spectrum(basis, mesh, parse_flux(cfg.get_string("solver.flux", "upwind")));
  std::vector<std::vector<double>> rows;
  for (const auto& l : s.eigenvalues) rows.push_back({l.real(), l.imag()});
  write_csv(output_path(opt, cfg, "spectrum.csv"), {"re_lambda", "im_lambda"}, rows);
  std::printf("spectral_radius=%s max_imag=%s max_real=%s\n", format_number(s.spectral_radius).c_str(),
              format_number(s.max_imag).c_str(), format_number(s.max_real).c_str());
}

void run_converge(const Config& cfg, const Options& opt) {
  const ConvergenceReport rep = run_convergence_study(cfg);
  std::vector<std::vector<double>> rows;
  for (const auto& r : rep.rows) rows.push_back({double(r.n_el), r.h, r.l2_error, r.in_fit ? 1.0 : 0.0});
  write_csv(output_path(opt, cfg, "convergence.csv"), {"n_el", "h", "l2_error", "in_fit"}, rows);
  std::printf("rate=%.4f fit_rows=%d", rep.rate, rep.fit_rows);
  if (rep.saturation) std::printf(" saturation=%.3e", *rep.saturation);
  std::printf("\n");
}

void run_longtime(const Config& cfg, const Options& opt) {
  const auto hist = run_long_time_study(cfg);
  std::vector<std::vector<double>> rows;
  for (const auto& s : hist) rows.push_back({s.t, s.l2_error});
  write_csv(output_path(opt, cfg, "longtime.csv"), {"t", "l2_error"}, rows);
  std::printf("samples=%zu final_error=%s\n", hist.size(), format_number(hist.back().l2_error).c_str());
}

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{"FC-DG solver toolkit"};
  app.require_subcommand(1);
  Options opt;
  using Runner = void (*)(const Config&, const Options&);
  const std::vector<std::tuple<std::string, std::string, Runner, bool>> commands{
      {"assemble", "assemble (or load) element operators and validate them", run_assemble, false},
      {"basis-dump", "sample the basis functions", run_basis_dump, false},
      {"transport1d", "1-D periodic transport", run_transport1d, true},
      {"transport2d", "2-D periodic transport", run_transport2d, true},
      {"maxwell2d", "2-D Maxwell TE", run_maxwell2d, true},
      {"dispersion", "Bloch dispersion relation", run_dispersion, false},
      {"spectrum", "global operator spectrum", run_spectrum, false},
      {"converge", "convergence study with rate fit", run_converge, true},
      {"longtime", "error history of a long run", run_longtime, true},
  };
  std::vector<std::pair<CLI::App*, Runner>> subs;
  for (const auto& [name, help, run, needs_config] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    auto* c = sub->add_option("-c,--config", opt.config_path, "configuration file");
    if (needs_config) c->required();
    sub->add_option("-o,--output", opt.output, "output path");
    sub->add_option("-s,--set", opt.overrides, "override a config entry, key=value");
    subs.emplace_back(sub, run);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    const Config cfg = load_with_overrides(opt);
    for (const auto& [sub, run] : subs)
      if (sub->parsed()) run(cfg, opt);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

int cli_main(const std::vector<std::string>& args) {
  std::vector<std::string> storage = args;
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());
  argv.push_back(nullptr);
  return cli_main(static_cast<int>(storage.size()), argv.data());
}

}  // namespace fcdg
