#include "fcdg/maxwell2d.hpp"

#include <cmath>

#include "fcdg/error.hpp"

namespace fcdg {

void MaxwellParams::validate() const {
  if (!(mu0 > 0.0) || !(eps0 > 0.0) || !(eps_inf > 0.0)) {
    throw ParameterError("mu0, eps0 and eps_inf must be positive");
  }
}

double MaxwellParams::wave_speed() const { return 1.0 / std::sqrt(mu0 * eps0 * eps_inf); }

void DuffingParams::validate() const {
  if (n_pmd() < 1) throw ParameterError("Duffing model needs n_pmd >= 1 (at least two lambdas)");
  if (tau_inv < 0.0) throw ParameterError("Duffing damping tau_inv must be non-negative");
}

double DuffingParams::factor(double p_squared) const {
  double f = 0.0, pw = 1.0;
  for (double l : lambdas) {
    f += l * pw;
    pw *= p_squared;
  }
  return f;
}

double DuffingParams::factor_integral(double s) const {
  double g = 0.0, pw = s;
  for (std::size_t l = 0; l < lambdas.size(); ++l) {
    g += lambdas[l] * pw / static_cast<double>(l + 1);
    pw *= s;
  }
  return g;
}

MaterialModel parse_material(const std::string& name) {
  if (name == "none" || name == "vacuum") return MaterialModel::Vacuum;
  if (name == "lorentz") return MaterialModel::Lorentz;
  if (name == "duffing") return MaterialModel::Duffing;
  throw ConfigError("unknown material '" + name + "' (expected none, lorentz or duffing)");
}

EmBoundary parse_boundary(const std::string& name) {
  if (name == "periodic") return EmBoundary::Periodic;
  if (name == "pec_cavity" || name == "pec") return EmBoundary::PecCavity;
  throw ConfigError("unknown boundary '" + name + "' (expected periodic or pec_cavity)");
}

double ForcingSpec::value(double x, double y, double t) const {
  if (!enabled) return 0.0;
  const double r2 = (x - x0) * (x - x0) + (y - y0) * (y - y0);
  return amplitude * std::sin(frequency * t) * std::exp(-width * r2);
}

double apply_em_boundary(double interior, GhostKind kind) {
  return kind == GhostKind::PecTangential ? -interior : interior;
}

DuffingRates duffing_rhs(double px, double py, double jx, double jy, double ex, double ey,
                         const DuffingParams& dp) {
  const double f = dp.factor(px * px + py * py);
  const double w0 = dp.omega0 * dp.omega0, wp = dp.omega_p * dp.omega_p;
  return {jx, jy, wp * ex - dp.tau_inv * jx - w0 * px * f, wp * ey - dp.tau_inv * jy - w0 * py * f};
}

DuffingRates lorentz_rhs(double px, double py, double jx, double jy, double ex, double ey,
                         const DuffingParams& dp) {
  DuffingRates r;
  r.dpx = jx;
  r.dpy = jy;
  r.djx = dp.omega_p * dp.omega_p * ex - dp.tau_inv * jx - dp.omega0 * dp.omega0 * px;
  r.djy = dp.omega_p * dp.omega_p * ey - dp.tau_inv * jy - dp.omega0 * dp.omega0 * py;
  return r;
}

MaxwellOperator::MaxwellOperator(const ElementOperators& ops, const Mesh2D& mesh,
                                 const std::vector<double>& nodes, const MaxwellSetup& setup)
    : dg_(ops, mesh), setup_(setup), n_(ops.size()), mass_(ops.mass), nodes_(nodes) {
  setup_.params.validate();
  if (setup_.material == MaterialModel::Duffing) setup_.duffing.validate();
  if (setup_.flux == FluxKind::Upwind) {
    throw ConfigError("Maxwell solver supports centered and alternating fluxes only");
  }
  if (static_cast<int>(nodes.size()) != n_) throw ShapeError("node count does not match operators");
  trap_ = trapezoid_weights(nodes_);
  const ForcingSpec& f = setup_.forcing;
  if (f.enabled) {
    if (!(f.width > 0.0)) throw ParameterError("forcing width must be positive");
    auto profile = [&](double x, double y) {
      const double r2 = (x - f.x0) * (x - f.x0) + (y - f.y0) * (y - f.y0);
      return f.amplitude * std::exp(-f.width * r2);
    };
    forcing_x_ = sample_field(mesh, nodes_, [&](double x, double y) { return profile(x, y) * (y - f.y0); });
    forcing_y_ = sample_field(mesh, nodes_, [&](double x, double y) { return profile(x, y) * (x - f.x0); });
  }
}

namespace {

// Interface fluxes for one direction. e and h are traces of the tangential
// electric component and of Hz; lo/hi are the faces at the low and high end
// of each element along the direction.
struct DirFlux {
  Eigen::MatrixXd e_lo, e_hi, h_lo, h_hi;
};

DirFlux direction_fluxes(const Eigen::MatrixXd& e_lo_tr, const Eigen::MatrixXd& e_hi_tr,
                         const Eigen::MatrixXd& h_lo_tr, const Eigen::MatrixXd& h_hi_tr,
                         const std::function<int(int)>& hi_neighbor,
                         const std::function<int(int)>& lo_neighbor,
                         const std::function<bool(int)>& hi_wall,
                         const std::function<bool(int)>& lo_wall, FluxKind flux) {
  const Eigen::Index n = e_lo_tr.rows(), ne = e_lo_tr.cols();
  DirFlux f;
  f.e_hi.resize(n, ne);
  f.h_hi.resize(n, ne);
  f.e_lo.resize(n, ne);
  f.h_lo.resize(n, ne);
  for (Eigen::Index k = 0; k < ne; ++k) {
    const int kk = static_cast<int>(k);
    if (hi_wall(kk)) {
      // Centered flux against PEC ghost values.
      const Eigen::VectorXd ghost = -e_hi_tr.col(k);
      f.e_hi.col(k) = 0.5 * (e_hi_tr.col(k) + ghost);
      f.h_hi.col(k) = h_hi_tr.col(k);
      continue;
    }
    const int nb = hi_neighbor(kk);
    if (flux == FluxKind::Alternating) {
      f.e_hi.col(k) = e_hi_tr.col(k);
      f.h_hi.col(k) = h_lo_tr.col(nb);
    } else {
      f.e_hi.col(k) = 0.5 * (e_hi_tr.col(k) + e_lo_tr.col(nb));
      f.h_hi.col(k) = 0.5 * (h_hi_tr.col(k) + h_lo_tr.col(nb));
    }
  }
  for (Eigen::Index k = 0; k < ne; ++k) {
    const int kk = static_cast<int>(k);
    if (lo_wall(kk)) {
      const Eigen::VectorXd ghost = -e_lo_tr.col(k);
      f.e_lo.col(k) = 0.5 * (e_lo_tr.col(k) + ghost);
      f.h_lo.col(k) = h_lo_tr.col(k);
      continue;
    }
    const int nb = lo_neighbor(kk);
    f.e_lo.col(k) = f.e_hi.col(nb);
    f.h_lo.col(k) = f.h_hi.col(nb);
  }
  return f;
}

}  // namespace

void MaxwellOperator::rhs(double t, const Eigen::VectorXd& u, Eigen::VectorXd& du) const {
  if (u.size() != dofs()) throw ShapeError("Maxwell state has the wrong length");
  const Mesh2D& mesh = dg_.mesh();
  const Eigen::Index cols = static_cast<Eigen::Index>(n_) * mesh.elements();
  const Eigen::Index fs = field_size();
  auto field = [&](const Eigen::VectorXd& v, int idx) {
    return Eigen::Map<const Eigen::MatrixXd>(v.data() + idx * fs, n_, cols);
  };
  const auto hz = field(u, 0), ex = field(u, 1), ey = field(u, 2);
  du.resize(u.size());
  auto out = [&](int idx) { return Eigen::Map<Eigen::MatrixXd>(du.data() + idx * fs, n_, cols); };
  auto dhz = out(0), dex = out(1), dey = out(2);

  const MaxwellParams& mp = setup_.params;
  const bool pec = setup_.bc == EmBoundary::PecCavity;
  const FaceTraces th = dg_.traces(hz), tex = dg_.traces(ex), tey = dg_.traces(ey);
  const int nx = mesh.nx, ny = mesh.ny;
  const DirFlux fx = direction_fluxes(
      tey.west, tey.east, th.west, th.east, [&](int k) { return dg_.east_neighbor(k); },
      [&](int k) { return dg_.west_neighbor(k); },
      [&](int k) { return pec && k % nx == nx - 1; }, [&](int k) { return pec && k % nx == 0; },
      setup_.flux);
  const DirFlux fy = direction_fluxes(
      tex.south, tex.north, th.south, th.north, [&](int k) { return dg_.north_neighbor(k); },
      [&](int k) { return dg_.south_neighbor(k); },
      [&](int k) { return pec && k / nx == ny - 1; }, [&](int k) { return pec && k / nx == 0; },
      setup_.flux);

  Eigen::MatrixXd r(n_, cols);
  const double jx = mesh.jac_x(), jy = mesh.jac_y();
  const double ce = 1.0 / (mp.eps0 * mp.eps_inf);
  // Reference derivatives: du/dx = r / J.
  dg_.derivative_x(ey, fx.e_lo, fx.e_hi, r);
  dhz.noalias() = (-1.0 / (mp.mu0 * jx)) * r;
  dg_.derivative_y(ex, fy.e_lo, fy.e_hi, r);
  dhz.noalias() += (1.0 / (mp.mu0 * jy)) * r;
  dg_.derivative_y(hz, fy.h_lo, fy.h_hi, r);
  dex.noalias() = (ce / jy) * r;
  dg_.derivative_x(hz, fx.h_lo, fx.h_hi, r);
  dey.noalias() = (-ce / jx) * r;

  if (setup_.forcing.enabled) {
    const double s = std::sin(setup_.forcing.frequency * t);
    dex.noalias() += (ce * s) * forcing_x_;
    dey.noalias() += (ce * s) * forcing_y_;
  }
  if (setup_.material == MaterialModel::Vacuum) return;

  const auto px = field(u, 3), py = field(u, 4), jxf = field(u, 5), jyf = field(u, 6);
  auto dpx = out(3), dpy = out(4), djx = out(5), djy = out(6);
  dex.noalias() -= (ce * mp.eps0) * jxf;
  dey.noalias() -= (ce * mp.eps0) * jyf;
  const bool duffing = setup_.material == MaterialModel::Duffing;
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index i = 0; i < n_; ++i) {
      const DuffingRates d =
          duffing ? duffing_rhs(px(i, c), py(i, c), jxf(i, c), jyf(i, c), ex(i, c), ey(i, c), setup_.duffing)
                  : lorentz_rhs(px(i, c), py(i, c), jxf(i, c), jyf(i, c), ex(i, c), ey(i, c), setup_.duffing);
      dpx(i, c) = d.dpx;
      dpy(i, c) = d.dpy;
      djx(i, c) = d.djx;
      djy(i, c) = d.djy;
    }
  }
}

void MaxwellOperator::forcing_rhs(double t, Eigen::VectorXd& g) const {
  g = Eigen::VectorXd::Zero(dofs());
  if (!setup_.forcing.enabled) return;
  const Eigen::Index fs = field_size();
  const double ce = 1.0 / (setup_.params.eps0 * setup_.params.eps_inf);
  const double s = std::sin(setup_.forcing.frequency * t);
  g.segment(fs, fs) = (ce * s) * Eigen::Map<const Eigen::VectorXd>(forcing_x_.data(), fs);
  g.segment(2 * fs, fs) = (ce * s) * Eigen::Map<const Eigen::VectorXd>(forcing_y_.data(), fs);
}

Eigen::VectorXd MaxwellOperator::pack(const MaxwellState& s) const {
  const Eigen::Index fs = field_size();
  Eigen::VectorXd u = Eigen::VectorXd::Zero(dofs());
  const Field2D* parts[7] = {&s.hz, &s.ex, &s.ey, &s.px, &s.py, &s.jx, &s.jy};
  for (int f = 0; f < field_count(); ++f) {
    if (parts[f]->size() == 0) continue;
    if (parts[f]->size() != fs) throw ShapeError("Maxwell field has the wrong shape");
    u.segment(f * fs, fs) = Eigen::Map<const Eigen::VectorXd>(parts[f]->data(), fs);
  }
  return u;
}

MaxwellState MaxwellOperator::unpack(const Eigen::VectorXd& u) const {
  const Eigen::Index fs = field_size();
  const Eigen::Index cols = static_cast<Eigen::Index>(n_) * dg_.mesh().elements();
  MaxwellState s;
  Field2D* parts[7] = {&s.hz, &s.ex, &s.ey, &s.px, &s.py, &s.jx, &s.jy};
  for (int f = 0; f < field_count(); ++f) {
    *parts[f] = Eigen::Map<const Eigen::MatrixXd>(u.data() + f * fs, n_, cols);
  }
  return s;
}

double MaxwellOperator::trapezoid_energy(const Eigen::VectorXd& u) const {
  const Eigen::Index fs = field_size();
  const Eigen::Index cols = static_cast<Eigen::Index>(n_) * dg_.mesh().elements();
  auto sq = [&](int idx) {
    const Eigen::Map<const Eigen::MatrixXd> a(u.data() + idx * fs, n_, cols);
    return trapezoid_integral(a.cwiseAbs2(), dg_.mesh(), nodes_);
  };
  const MaxwellParams& mp = setup_.params;
  return 0.5 * (mp.mu0 * sq(0) + mp.eps0 * mp.eps_inf * (sq(1) + sq(2)));
}

double MaxwellOperator::weighted_block(const Eigen::Ref<const Eigen::MatrixXd>& a) const {
  const Eigen::MatrixXd ma = mass_ * a;
  double sum = 0.0;
  for (int k = 0; k < dg_.mesh().elements(); ++k) {
    const Eigen::Index c0 = static_cast<Eigen::Index>(k) * n_;
    sum += (ma.middleCols(c0, n_) * mass_).cwiseProduct(a.middleCols(c0, n_)).sum();
  }
  return sum * dg_.mesh().jac_x() * dg_.mesh().jac_y();
}

double MaxwellOperator::mass_energy(const Eigen::VectorXd& u) const {
  const Eigen::Index fs = field_size();
  const Eigen::Index cols = static_cast<Eigen::Index>(n_) * dg_.mesh().elements();
  auto blk = [&](int idx) {
    return weighted_block(Eigen::Map<const Eigen::MatrixXd>(u.data() + idx * fs, n_, cols));
  };
  const MaxwellParams& mp = setup_.params;
  return 0.5 * (mp.mu0 * blk(0) + mp.eps0 * mp.eps_inf * (blk(1) + blk(2)));
}

double MaxwellOperator::total_energy(const Eigen::VectorXd& u) const {
  double e = mass_energy(u);
  if (setup_.material == MaterialModel::Vacuum) return e;
  const Eigen::Index fs = field_size();
  const Eigen::Index cols = static_cast<Eigen::Index>(n_) * dg_.mesh().elements();
  auto fld = [&](int idx) { return Eigen::Map<const Eigen::MatrixXd>(u.data() + idx * fs, n_, cols); };
  const DuffingParams& dp = setup_.duffing;
  const double c = setup_.params.eps0 / (2.0 * dp.omega_p * dp.omega_p);
  const double w0 = dp.omega0 * dp.omega0;
  if (setup_.material == MaterialModel::Lorentz) {
    return e + c * (weighted_block(fld(5)) + weighted_block(fld(6)) +
                    w0 * (weighted_block(fld(3)) + weighted_block(fld(4))));
  }
  const auto px = fld(3), py = fld(4);
  const Field2D g = (px.cwiseAbs2() + py.cwiseAbs2()).unaryExpr(
      [&](double s) { return dp.factor_integral(s); });
  const Field2D jj = fld(5).cwiseAbs2() + fld(6).cwiseAbs2();
  return e + c * trapezoid_integral(jj + w0 * g, dg_.mesh(), nodes_);
}

double MaxwellOperator::mass_norm(const Eigen::VectorXd& g) const { return std::sqrt(mass_energy(g)); }

MaxwellState maxwell_rhs(const MaxwellState& state, const ElementOperators& ops,
                         const Mesh2D& mesh, const std::vector<double>& nodes,
                         const MaxwellSetup& setup, double t) {
  MaxwellSetup s = setup;
  if (!state.has_polarization()) s.material = MaterialModel::Vacuum;
  const MaxwellOperator op(ops, mesh, nodes, s);
  Eigen::VectorXd du;
  op.rhs(t, op.pack(state), du);
  return op.unpack(du);
}

double standing_mode_period() { return 2.0 * M_PI / (5.0 * std::sqrt(2.0)); }

double standing_mode_hz(double x, double y, double t) {
  return std::sin(5.0 * x) * std::sin(5.0 * y) * std::cos(5.0 * std::sqrt(2.0) * t);
}

MaxwellResult solve_maxwell_2d(const MaxwellConfig& cfg) {
  return solve_maxwell_2d(cfg, ElementBasis(cfg.basis));
}

MaxwellResult solve_maxwell_2d(const MaxwellConfig& cfg, const ElementBasis& basis) {
  const MaxwellSetup& setup = cfg.setup;
  const bool linear_unforced = !setup.forcing.enabled && setup.material != MaterialModel::Duffing;
  const IntegratorKind integ =
      cfg.integrator.value_or(linear_unforced ? IntegratorKind::Taylor : IntegratorKind::Rk4);
  if (integ == IntegratorKind::Taylor && !linear_unforced) {
    throw ConfigError("Taylor stepping needs a linear unforced system; use rk4");
  }
  if (integ == IntegratorKind::Taylor) check_taylor_order(cfg.taylor_order, true);
  if (basis.modal() && (setup.forcing.enabled || setup.material == MaterialModel::Duffing)) {
    throw ConfigError("forcing and Duffing media need a nodal (FC) basis");
  }
  const Mesh2D mesh(cfg.x0, cfg.x1, cfg.y0, cfg.y1, cfg.n_el_x, cfg.n_el_y);
  const MaxwellOperator op(basis.ops(), mesh, basis.nodes(), setup);

  MaxwellState s0;
  auto hz0 = cfg.initial_hz;
  if (!hz0) hz0 = [](double x, double y) { return std::sin(5.0 * x) * std::sin(5.0 * y); };
  s0.hz = project_field(mesh, basis, hz0);
  s0.ex = Field2D::Zero(s0.hz.rows(), s0.hz.cols());
  s0.ey = s0.ex;
  if (setup.material != MaterialModel::Vacuum) {
    s0.px = s0.py = s0.jx = s0.jy = s0.ex;
  }
  Eigen::VectorXd u = op.pack(s0);

  const double c = setup.params.wave_speed();
  const double gap = basis.min_node_gap();
  const double dt_max = cfl_timestep_2d(cfg.cfl, c, gap * mesh.jac_x(), c, gap * mesh.jac_y());
  const double t_final = cfg.t_final > 0.0 ? cfg.t_final : standing_mode_period();

  std::vector<double> marks;
  for (double ts : cfg.snapshot_times) {
    if (ts > 0.0 && ts < t_final - 1e-12) marks.push_back(ts);
  }
  std::sort(marks.begin(), marks.end());
  marks.push_back(t_final);

  MaxwellResult res;
  res.t_final = t_final;
  auto snapshot = [&](double t) {
    const MaxwellState st = op.unpack(u);
    res.snapshots.push_back({t, field_node_values(st.hz, basis), field_node_values(st.ex, basis),
                             field_node_values(st.ey, basis)});
  };
  const bool want_snap = !cfg.snapshot_times.empty();
  auto wants = [&](double t) {
    for (double ts : cfg.snapshot_times) {
      if (std::fabs(ts - t) < 1e-12) return true;
    }
    return false;
  };
  if (want_snap && wants(0.0)) snapshot(0.0);

  // The forcing is g(t) = sin(w t) G, so int ||g|| = ||G|| int |sin(w t)|.
  Eigen::VectorXd g_profile;
  double g_norm = 0.0;
  if (setup.forcing.enabled) {
    ForcingSpec unit = setup.forcing;
    const double w = unit.frequency;
    const double t_peak = w != 0.0 ? M_PI / (2.0 * w) : 0.0;
    op.forcing_rhs(t_peak, g_profile);
    g_norm = op.mass_norm(g_profile);
  }
  const double e0 = op.total_energy(u);
  double forcing_integral = 0.0;
  auto record_energy = [&](double t) {
    const double sb = std::sqrt(e0) + forcing_integral;
    res.energy.push_back({t, op.trapezoid_energy(u), op.mass_energy(u), op.total_energy(u), sb * sb});
  };
  record_energy(0.0);

  const LinearRhs apply = [&](const Eigen::VectorXd& x, Eigen::VectorXd& y) { op.rhs(0.0, x, y); };
  const TimeRhs rhs = [&](double t, const Eigen::VectorXd& x, Eigen::VectorXd& y) { op.rhs(t, x, y); };
  auto abs_sin_integral = [&](double a, double b) {
    // Midpoint-refined integral of |sin(w t)| over one step.
    const double w = setup.forcing.frequency;
    const int sub = 16;
    double acc = 0.0;
    for (int q = 0; q < sub; ++q) {
      const double tm = a + (b - a) * (q + 0.5) / sub;
      acc += std::fabs(std::sin(w * tm));
    }
    return acc * (b - a) / sub;
  };

  double t = 0.0;
  long step_count = 0;
  for (double mark : marks) {
    const auto plan = plan_steps(mark - t, dt_max);
    const TaylorScheme scheme{cfg.taylor_order, plan.dt, cfg.cfl};
    for (long s = 0; s < plan.steps; ++s) {
      const double ts = t + s * plan.dt;
      if (integ == IntegratorKind::Taylor) {
        taylor_step(u, apply, scheme);
      } else {
        rk4_step(u, rhs, ts, plan.dt);
      }
      if (setup.forcing.enabled) forcing_integral += g_norm * abs_sin_integral(ts, ts + plan.dt);
      ++step_count;
      if (cfg.energy_stride > 0 && step_count % cfg.energy_stride == 0) {
        record_energy(ts + plan.dt);
      }
    }
    res.steps += plan.steps;
    if (plan.steps > 0) res.dt = plan.dt;
    t = mark;
    if (want_snap && wants(t)) snapshot(t);
  }
  if (res.energy.back().t < t - 1e-12) record_energy(t);

  res.final_state = op.unpack(u);
  if (cfg.standing_mode_error) {
    const Field2D exact = sample_field(mesh, basis.nodes(),
                                       [&](double x, double y) { return standing_mode_hz(x, y, t); });
    res.hz_error = l2_error_2d(field_node_values(res.final_state.hz, basis), exact, mesh, basis.nodes());
  }
  return res;
}

}  // namespace fcdg
