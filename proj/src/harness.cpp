#include "fcdg/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "fcdg/error.hpp"

namespace fcdg {

ExperimentKind parse_experiment(const std::string& name) {
  if (name == "transport1d") return ExperimentKind::Transport1D;
  if (name == "transport2d") return ExperimentKind::Transport2D;
  if (name == "maxwell2d") return ExperimentKind::Maxwell2D;
  throw ConfigError("unknown experiment '" + name + "'");
}

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Transport1D: return "transport1d";
    case ExperimentKind::Transport2D: return "transport2d";
    case ExperimentKind::Maxwell2D: return "maxwell2d";
  }
  return "?";
}

namespace {

IntegratorKind parse_integrator(const std::string& name) {
  if (name == "taylor") return IntegratorKind::Taylor;
  if (name == "rk4") return IntegratorKind::Rk4;
  throw ConfigError("unknown integrator '" + name + "'");
}

InitialData initial_from_config(const Config& cfg) {
  InitialData init;
  const std::string kind = cfg.get_string("initial.kind", "sine");
  if (kind == "sine") {
    init.kind = InitialData::Kind::Sine;
    init.param = cfg.get_double("initial.param", 10.0);
  } else if (kind == "gaussian") {
    init.kind = InitialData::Kind::Gaussian;
    init.param = cfg.get_double("initial.param", 50.0);
  } else {
    throw ConfigError("unknown initial.kind '" + kind + "'");
  }
  return init;
}

void check_positive(const std::string& key, double v) {
  if (!(v > 0.0)) throw ConfigError("key '" + key + "' must be positive");
}

}  // namespace

BasisSpec basis_from_config(const Config& cfg) {
  const std::string type = cfg.get_string("basis.type", "fc");
  BasisSpec spec;
  if (type == "fc") {
    const int n = cfg.get_int("basis.N", 20);
    int p = 10;
    if (cfg.has("basis.p") && cfg.has("basis.degree"))
      throw ConfigError("give either basis.p or basis.degree, not both");
    if (cfg.has("basis.p")) p = cfg.get_int("basis.p");
    if (cfg.has("basis.degree")) p = cfg.get_int("basis.degree") + 1;
    spec = fc_spec(n, p, cfg.get_int("basis.M", 25));
    try {
      spec.fc.validate();
    } catch (const ParameterError& e) {
      throw ConfigError(e.what());
    }
  } else if (type == "legendre") {
    spec = legendre_spec(cfg.get_int("basis.degree", 9));
    if (spec.degree < 1) throw ConfigError("basis.degree must be at least 1");
  } else {
    throw ConfigError("unknown basis.type '" + type + "'");
  }
  spec.quad.gregory_order = cfg.get_int("basis.quad_order", spec.quad.gregory_order);
  spec.quad.points_per_period = cfg.get_int("basis.points_per_period", spec.quad.points_per_period);
  return spec;
}

Transport1DConfig transport1d_from_config(const Config& cfg) {
  Transport1DConfig c;
  c.basis = basis_from_config(cfg);
  c.a = cfg.get_double("mesh.a", c.a);
  c.b = cfg.get_double("mesh.b", c.b);
  if (!(c.b > c.a)) throw ConfigError("mesh.b must exceed mesh.a");
  c.n_el = cfg.get_int("mesh.n_el", c.n_el);
  if (c.n_el < 1) throw ConfigError("mesh.n_el must be positive");
  c.speed = cfg.get_double("solver.speed", c.speed);
  c.flux = parse_flux(cfg.get_string("solver.flux", "upwind"));
  c.integrator = parse_integrator(cfg.get_string("solver.integrator", "taylor"));
  c.taylor_order = cfg.get_int("solver.taylor_order", c.taylor_order);
  c.cfl = cfg.get_double("solver.cfl", c.cfl);
  check_positive("solver.cfl", c.cfl);
  c.t_final = cfg.get_double("solver.t_final", c.t_final);
  if (c.t_final < 0.0) throw ConfigError("solver.t_final must be non-negative");
  c.record_interval = cfg.get_double("solver.record_interval", c.record_interval);
  c.initial = initial_from_config(cfg);
  return c;
}

Transport2DConfig transport2d_from_config(const Config& cfg) {
  Transport2DConfig c;
  c.basis = basis_from_config(cfg);
  c.x0 = cfg.get_double("mesh.x0", c.x0);
  c.x1 = cfg.get_double("mesh.x1", c.x1);
  c.y0 = cfg.get_double("mesh.y0", c.y0);
  c.y1 = cfg.get_double("mesh.y1", c.y1);
  const int n = cfg.get_int("mesh.n_el", c.n_el_x);
  c.n_el_x = cfg.get_int("mesh.n_el_x", n);
  c.n_el_y = cfg.get_int("mesh.n_el_y", n);
  c.alpha = cfg.get_double("solver.alpha", c.alpha);
  c.beta = cfg.get_double("solver.beta", c.beta);
  c.flux = parse_flux(cfg.get_string("solver.flux", "upwind"));
  c.taylor_order = cfg.get_int("solver.taylor_order", c.taylor_order);
  c.cfl = cfg.get_double("solver.cfl", c.cfl);
  check_positive("solver.cfl", c.cfl);
  c.t_final = cfg.get_double("solver.t_final", c.t_final);
  const double k = cfg.get_double("initial.param", 10.0);
  if (cfg.get_string("initial.kind", "sine") != "sine")
    throw ConfigError("transport2d supports initial.kind = sine only");
  c.initial = [k](double x, double y) { return std::sin(k * M_PI * x) + std::sin(k * M_PI * y); };
  return c;
}

MaxwellConfig maxwell_from_config(const Config& cfg) {
  MaxwellConfig c;
  c.basis = basis_from_config(cfg);
  c.x0 = cfg.get_double("mesh.x0", c.x0);
  c.x1 = cfg.get_double("mesh.x1", c.x1);
  c.y0 = cfg.get_double("mesh.y0", c.y0);
  c.y1 = cfg.get_double("mesh.y1", c.y1);
  const int n = cfg.get_int("mesh.n_el", c.n_el_x);
  c.n_el_x = cfg.get_int("mesh.n_el_x", n);
  c.n_el_y = cfg.get_int("mesh.n_el_y", n);

  MaxwellSetup& s = c.setup;
  s.params.mu0 = cfg.get_double("material.mu0", s.params.mu0);
  s.params.eps0 = cfg.get_double("material.eps0", s.params.eps0);
  s.params.eps_inf = cfg.get_double("material.eps_inf", s.params.eps_inf);
  s.material = parse_material(cfg.get_string("material.model", "vacuum"));
  s.duffing.omega0 = cfg.get_double("material.omega0", s.duffing.omega0);
  s.duffing.omega_p = cfg.get_double("material.omega_p", s.duffing.omega_p);
  s.duffing.tau_inv = cfg.get_double("material.tau_inv", s.duffing.tau_inv);
  if (cfg.has("material.lambdas")) s.duffing.lambdas = cfg.get_double_list("material.lambdas");
  s.flux = parse_flux(cfg.get_string("solver.flux", "centered"));
  s.bc = parse_boundary(cfg.get_string("solver.boundary", "pec"));
  s.forcing.enabled = cfg.get_bool("forcing.enabled", false);
  s.forcing.amplitude = cfg.get_double("forcing.amplitude", s.forcing.amplitude);
  s.forcing.frequency = cfg.get_double("forcing.frequency", s.forcing.frequency);
  s.forcing.width = cfg.get_double("forcing.width", s.forcing.width);
  s.forcing.x0 = cfg.get_double("forcing.x0", s.forcing.x0);
  s.forcing.y0 = cfg.get_double("forcing.y0", s.forcing.y0);
  try {
    s.params.validate();
    if (s.material == MaterialModel::Duffing) s.duffing.validate();
  } catch (const ParameterError& e) {
    throw ConfigError(e.what());
  }

  if (cfg.has("solver.integrator")) c.integrator = parse_integrator(cfg.get_string("solver.integrator"));
  c.taylor_order = cfg.get_int("solver.taylor_order", c.taylor_order);
  c.cfl = cfg.get_double("solver.cfl", c.cfl);
  check_positive("solver.cfl", c.cfl);
  c.t_final = cfg.get_double("solver.t_final", c.t_final);
  c.energy_stride = cfg.get_int("solver.energy_stride", c.energy_stride);
  const std::string init = cfg.get_string("initial.kind", "standing_mode");
  if (init == "standing_mode") {
    c.standing_mode_error = true;
  } else if (init == "zero") {
    c.standing_mode_error = false;
    c.initial_hz = [](double, double) { return 0.0; };
  } else {
    throw ConfigError("unknown initial.kind '" + init + "' for maxwell2d");
  }
  if (cfg.has("output.snapshot_times")) c.snapshot_times = cfg.get_double_list("output.snapshot_times");
  return c;
}

double RateFit::predict(double h) const { return std::exp(log_const + rate * std::log(h)); }

RateFit fit_rate(const std::vector<double>& h, const std::vector<double>& error) {
  if (h.size() != error.size()) throw ShapeError("fit_rate: h and error differ in length");
  if (h.size() < 2) throw ParameterError("fit_rate: need at least two points");
  const double n = static_cast<double>(h.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (!(h[i] > 0.0) || !(error[i] > 0.0)) throw ParameterError("fit_rate: values must be positive");
    sx += std::log(h[i]);
    sy += std::log(error[i]);
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double dx = std::log(h[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(error[i]) - my);
  }
  if (sxx == 0.0) throw ParameterError("fit_rate: all h values coincide");
  RateFit fit;
  fit.rate = sxy / sxx;
  fit.log_const = my - fit.rate * mx;
  return fit;
}

ConvergenceReport analyze_convergence(std::vector<ConvergenceRow> rows) {
  if (rows.size() < 2) throw ParameterError("convergence study needs at least two sweep points");
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.h > b.h; });
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (!(rows[i].h < rows[i - 1].h)) throw ParameterError("convergence sweep repeats a mesh size");

  std::vector<double> h, e;
  ConvergenceReport rep;
  std::size_t plateau = rows.size();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i >= 2) {
      const RateFit fit = fit_rate(h, e);
      const double predicted = rows[i - 1].l2_error * std::pow(rows[i].h / rows[i - 1].h, fit.rate);
      if (rows[i].l2_error > 10.0 * predicted) {
        plateau = i;
        break;
      }
    }
    h.push_back(rows[i].h);
    e.push_back(rows[i].l2_error);
  }
  for (std::size_t i = plateau; i < rows.size(); ++i) {
    rows[i].in_fit = false;
    rep.saturation = std::max(rep.saturation.value_or(0.0), rows[i].l2_error);
  }
  rep.rate = fit_rate(h, e).rate;
  rep.fit_rows = static_cast<int>(h.size());
  rep.rows = std::move(rows);
  return rep;
}

ConvergenceReport run_convergence_study(const Config& cfg) {
  const ExperimentKind kind = parse_experiment(cfg.get_string("experiment"));
  const std::vector<int> sweep = cfg.get_int_list("sweep.n_el");
  if (sweep.empty()) throw ConfigError("sweep.n_el is empty");
  std::vector<ConvergenceRow> rows;
  auto fail = [](int n, const Error& e) -> Error {
    return Error("sweep point n_el = " + std::to_string(n) + ": " + e.what());
  };
  switch (kind) {
    case ExperimentKind::Transport1D: {
      Transport1DConfig c = transport1d_from_config(cfg);
      const ElementBasis basis(c.basis);
      for (int n : sweep) {
        c.n_el = n;
        try {
          rows.push_back({n, (c.b - c.a) / n, solve_transport_1d(c, basis).final_error});
        } catch (const Error& e) {
          throw fail(n, e);
        }
      }
      break;
    }
    case ExperimentKind::Transport2D: {
      Transport2DConfig c = transport2d_from_config(cfg);
      const ElementBasis basis(c.basis);
      for (int n : sweep) {
        c.n_el_x = c.n_el_y = n;
        try {
          rows.push_back({n, (c.x1 - c.x0) / n, solve_transport_2d(c, basis).final_error});
        } catch (const Error& e) {
          throw fail(n, e);
        }
      }
      break;
    }
    case ExperimentKind::Maxwell2D: {
      MaxwellConfig c = maxwell_from_config(cfg);
      if (!c.standing_mode_error) throw ConfigError("maxwell2d convergence needs the standing mode");
      const ElementBasis basis(c.basis);
      for (int n : sweep) {
        c.n_el_x = c.n_el_y = n;
        try {
          rows.push_back({n, (c.x1 - c.x0) / n, solve_maxwell_2d(c, basis).hz_error});
        } catch (const Error& e) {
          throw fail(n, e);
        }
      }
      break;
    }
  }
  return analyze_convergence(std::move(rows));
}

std::vector<ErrorSample> run_long_time_study(const Config& cfg) {
  if (parse_experiment(cfg.get_string("experiment", "transport1d")) != ExperimentKind::Transport1D)
    throw ConfigError("long-time studies support transport1d only");
  Transport1DConfig c = transport1d_from_config(cfg);
  if (c.record_interval <= 0.0) c.record_interval = std::max(c.t_final / 100.0, 1e-300);
  return solve_transport_1d(c).history;
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  for (std::size_t j = 0; j < header.size(); ++j) out << (j ? "," : "") << header[j];
  out << '\n';
  for (const auto& row : rows) {
    if (row.size() != header.size()) throw ShapeError("CSV row width differs from header");
    for (std::size_t j = 0; j < row.size(); ++j) out << (j ? "," : "") << format_number(row[j]);
    out << '\n';
  }
  if (!out) throw Error("write failed for " + path.string());
}

}  // namespace fcdg
