#pragma once

// Experiment runner: config translation, convergence studies with
// least-squares rate fits, long-time error histories and CSV output.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fcdg/config.hpp"
#include "fcdg/dg1d.hpp"
#include "fcdg/line_dg2d.hpp"
#include "fcdg/maxwell2d.hpp"

namespace fcdg {

enum class ExperimentKind { Transport1D, Transport2D, Maxwell2D };
ExperimentKind parse_experiment(const std::string& name);
std::string to_string(ExperimentKind kind);

/// [basis] type = fc|legendre, N, p (or degree = p - 1), M, quad_order,
/// points_per_period; degree for Legendre.
BasisSpec basis_from_config(const Config& cfg);
Transport1DConfig transport1d_from_config(const Config& cfg);
Transport2DConfig transport2d_from_config(const Config& cfg);
MaxwellConfig maxwell_from_config(const Config& cfg);

struct RateFit {
  double rate = 0.0;       // error ~ C h^rate
  double log_const = 0.0;  // log C
  double predict(double h) const;
};

/// Least-squares line through (log h, log error). Needs two distinct h.
RateFit fit_rate(const std::vector<double>& h, const std::vector<double>& error);

struct ConvergenceRow {
  int n_el = 0;
  double h = 0.0;
  double l2_error = 0.0;
  bool in_fit = true;
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
  double rate = 0.0;
  int fit_rows = 0;
  std::optional<double> saturation;  // largest error among plateau rows
};

/// Rows sorted by decreasing h. Row i (i >= 2) starts the plateau if its
/// error exceeds 10 times the value predicted from row i - 1 with the rate
/// fitted on rows 0..i-1; it and all later rows are excluded from the fit.
ConvergenceReport analyze_convergence(std::vector<ConvergenceRow> rows);

/// Needs `experiment` and `sweep.n_el`.
ConvergenceReport run_convergence_study(const Config& cfg);

/// 1-D transport only; errors recorded every `solver.record_interval`.
std::vector<ErrorSample> run_long_time_study(const Config& cfg);

/// 17 significant digits.
std::string format_number(double v);

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

}  // namespace fcdg
