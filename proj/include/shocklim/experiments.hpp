#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "shocklim/diagnostics.hpp"
#include "shocklim/initial_data.hpp"
#include "shocklim/shift.hpp"
#include "shocklim/solver.hpp"

namespace shocklim {

/// One simulation case. JSON layout (all keys optional):
///   flux, entropy, bound_m,
///   shock.{c_left, c_right},
///   domain.{x_lo, x_hi, n_cells, cells_per_eps},
///   sim.{epsilon, t_end, cfl_advective, cfl_diffusive, output_stride, resolution_factor},
///   diag.{theta, delta},
///   init.{preset, base, amplitude, width, center, wavenumber, modes, seed}
struct CaseConfig {
  std::string flux = "burgers";
  std::string entropy = "quadratic";
  std::optional<double> bound_m;
  double c_left = 1.0;
  double c_right = -1.0;

  double x_lo = -3.0;
  double x_hi = 2.0;
  int n_cells = 0;             // 0: derive from cells_per_eps
  double cells_per_eps = 40.0;  // dx = epsilon / cells_per_eps

  double epsilon = 0.02;
  double t_end = 1.0;
  double cfl_advective = 0.5;
  double cfl_diffusive = 0.45;
  int output_stride = 200;
  double resolution_factor = 20.0;

  std::optional<double> theta;
  std::optional<double> delta;

  InitConfig init;

  Grid grid() const;
  StepperConfig stepper() const;

  static CaseConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

/// Scalars summarising one run.
struct CaseSummary {
  double epsilon = 0.0;
  double dx = 0.0;
  int n_cells = 0;
  double lambda = 0.0;
  double theta = 0.0;        // theta used by the weight
  double theta_cert = 0.0;   // theta derived from the Lambda certificate
  double delta = 0.0;
  double l2sq_initial = 0.0;
  double excess = 0.0;       // sup_t l2sq(t) - l2sq(0), floored at 1e-12
  double c_star = 0.0;       // excess / (eps log(1/eps))
  double drift_ratio_max = 0.0;  // over t in [0.1, T]
  double max_abs_xdot = 0.0;
  double lipschitz_bound = 0.0;
  double pos_deriv_initial = 0.0;
  double max_pos_deriv_growth = 0.0;  // max relative increase between checkpoints
  double hyp_nonpositive_fraction = 0.0;
  double max_dHdt = 0.0;      // centred differences of the H series
  double exp_theta_delta = 0.0;  // e^{-theta delta}
  double away_excess_alpha1 = 0.0;  // alpha = eps log(1/eps)
  double away_excess_alpha2 = 0.0;  // alpha = 2 eps log(1/eps)
  double conservation_residual = 0.0;  // per unit time
  double runtime_s = 0.0;
  std::vector<std::string> warnings;
};

struct CaseResult {
  CaseConfig config;
  std::vector<DiagRecord> records;
  SimState final_state;
  ShiftTrack track;
  CaseSummary summary;
};

/// Runs one case with shift and diagnostics observers. Throws
/// Errc::resolution_gate if dx max|A'| > eps / resolution_factor and
/// Errc::config if the perturbation is not well inside the domain.
CaseResult run_case(const CaseConfig& cfg);

/// Time-series CSV: a `#` metadata line, then
/// t,X,Xdot,H,l2sq,rel_ent_total,pos_deriv_norm,hyp,dif,drift_dev2,drift_ratio
void write_timeseries_csv(const std::string& path, const CaseResult& result);
std::string timeseries_csv(const CaseResult& result);

struct RateFit {
  double slope;
  double intercept;
  double residual;  // RMS of the log-space residuals
};

/// Least squares of log(value) against log(abscissa). Throws
/// Errc::nonpositive_value for nonpositive inputs and Errc::invalid_parameter
/// for fewer than two points.
RateFit fit_rate(const std::vector<std::pair<double, double>>& points);

struct SweepEntry {
  double epsilon = 0.0;
  bool ok = false;
  std::string error;
  CaseSummary summary;
  std::optional<CaseSummary> refined;  // same case with dx halved
  bool under_resolved = false;         // refined excess differs by >= 10%
};

struct SweepReport {
  std::vector<SweepEntry> entries;
  RateFit fit{};
  std::optional<RateFit> fit_refined;  // refined excess substituted where available
  double c_star_family = 0.0;
  std::optional<double> eps0;  // largest epsilon passing every monitor
  double runtime_s = 0.0;

  nlohmann::json to_json() const;
};

using CaseRunner = std::function<CaseSummary(const CaseConfig&)>;

struct SweepOptions {
  std::vector<double> refine_eps;  // epsilons to rerun with dx halved
  unsigned workers = 0;            // 0: hardware concurrency
  CaseRunner runner;               // defaults to run_case(...).summary
};

/// Runs base_cfg at each epsilon (dx = eps / cells_per_eps) and fits the
/// slope of log(excess) against log(eps log(1/eps)). Requires at least three
/// decreasing epsilons and at least three successful cases.
SweepReport sweep(const CaseConfig& base_cfg, const std::vector<double>& eps_list,
                  const SweepOptions& options = {});

}  // namespace shocklim
