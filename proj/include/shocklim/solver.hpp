#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "shocklim/model.hpp"

namespace shocklim {

/// Uniform cell-centred grid on [x_lo, x_hi].
struct Grid {
  double x_lo = 0.0;
  double x_hi = 1.0;
  int n_cells = 16;

  /// Throws Errc::invalid_parameter unless x_hi > x_lo and n_cells >= 16.
  static Grid make(double x_lo, double x_hi, int n_cells);

  double dx() const { return (x_hi - x_lo) / n_cells; }
  double center(int i) const { return x_lo + (i + 0.5) * dx(); }
  double face(int i) const { return x_lo + i * dx(); }
};

/// Cell averages of U at time t, with constant far-field ghost values.
struct SimState {
  Grid grid;
  std::vector<double> u;
  double t = 0.0;
  double epsilon = 0.0;
  double bc_left = 0.0;
  double bc_right = 0.0;
  /// Time-integrated net inflow of mass through the two boundary faces
  /// (advective plus diffusive), so that sum(u) dx - inflow is invariant.
  double inflow = 0.0;

  double mass() const;
};

struct StepperConfig {
  double cfl_advective = 0.5;
  double cfl_diffusive = 0.25;
  double t_end = 0.0;
  /// Number of equal time intervals between output checkpoints on [t0, t_end].
  int output_stride = 1;

  void validate() const;
};

/// Exact Riemann (Godunov) flux for a convex A: min of A over [u_l, u_r] when
/// u_l <= u_r, max of A over [u_r, u_l] otherwise.
double godunov_flux(const FluxModel& flux, double u_l, double u_r);

/// max_i |A'(u_i)| over cells and ghost values.
double max_wave_speed(const SimState& state, const FluxModel& flux);

/// Time step bound from the advective and diffusive CFL numbers plus the
/// combined monotonicity limit, capped by `gap` (time to next checkpoint).
/// Throws Errc::invalid_parameter for a non-positive gap.
double stable_dt(double max_speed, double dx, double epsilon, const StepperConfig& cfg,
                 double gap);
double stable_dt(const SimState& state, const FluxModel& flux, const StepperConfig& cfg,
                 double gap);

/// One forward-Euler step of the Godunov + centred-diffusion update. Throws
/// Errc::instability if a cell leaves the input range by more than 1e-12.
SimState step(const SimState& state, const FluxModel& flux, double dt);

using Observer = std::function<void(const SimState&)>;
using StepHook = std::function<void(const SimState& before, const SimState& after, double dt)>;
using WarningSink = std::function<void(const std::string&)>;

struct EvolveHooks {
  /// Called at the initial time and at every output checkpoint.
  std::vector<Observer> observers;
  /// Called after every time step with the pre- and post-step states.
  StepHook on_step;
  WarningSink on_warning;
};

/// Advances `state` to cfg.t_end. Deterministic for identical inputs.
SimState evolve(SimState state, const FluxModel& flux, const StepperConfig& cfg,
                const EvolveHooks& hooks = {});

/// Mass change contributed by the boundary faces during one step of size dt.
double boundary_inflow(const SimState& state, const FluxModel& flux, double dt);

/// Cell averages of `fn` with 3-point Gauss per cell; cells are split at
/// every point of `breaks` they contain.
std::vector<double> cell_averages(const Grid& grid, const std::function<double(double)>& fn,
                                  std::span<const double> breaks = {});

}  // namespace shocklim
