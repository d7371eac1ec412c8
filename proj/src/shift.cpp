#include "shocklim/shift.hpp"

#include <cmath>

#include "shocklim/error.hpp"

namespace shocklim {

double trace(const SimState& state, double x) {
  const Grid& g = state.grid;
  const double first = g.center(0);
  const double last = g.center(g.n_cells - 1);
  if (!(x >= first && x <= last)) {
    throw Error(Errc::out_of_domain, "trace point " + std::to_string(x) + " outside [" +
                                         std::to_string(first) + ", " + std::to_string(last) +
                                         "]");
  }
  const double pos = (x - first) / g.dx();
  int i = static_cast<int>(std::floor(pos));
  if (i >= g.n_cells - 1) i = g.n_cells - 2;
  const double w = pos - i;
  return (1.0 - w) * state.u[static_cast<std::size_t>(i)] +
         w * state.u[static_cast<std::size_t>(i + 1)];
}

ShiftTrack ShiftTrack::start(const SimState& state, const ShockPair& shock,
                             const EntropyModel& entropy, const FluxModel& flux, double lambda) {
  ShiftTrack track;
  track.midpoint = shock.midpoint();
  track.lipschitz_bound = 2.0 * lambda * lambda;
  const double xdot = normalized_flux(entropy, flux, trace(state, 0.0), track.midpoint);
  track.head = {state.t, 0.0, xdot};
  track.samples.push_back(track.head);
  track.max_abs_xdot = std::abs(xdot);
  return track;
}

namespace {

void check_margin(const SimState& state, double X) {
  const Grid& g = state.grid;
  const double margin = 5.0 * g.dx();
  if (X < g.x_lo + margin || X > g.x_hi - margin) {
    throw Error(Errc::domain_too_small,
                "shift X=" + std::to_string(X) + " within 5 cells of the boundary");
  }
}

}  // namespace

void advance_shift(ShiftTrack& track, const SimState& state_old, const SimState& state_new,
                   double dt, const EntropyModel& entropy, const FluxModel& flux, bool record) {
  if (dt == 0.0) return;
  const ShiftSample prev = track.current();
  const double m = track.midpoint;
  const double k1 = normalized_flux(entropy, flux, trace(state_old, prev.x), m);
  const double x_pred = prev.x + dt * k1;
  check_margin(state_new, x_pred);
  const double k2 = normalized_flux(entropy, flux, trace(state_new, x_pred), m);
  const double xdot = 0.5 * (k1 + k2);
  const double x_new = prev.x + dt * xdot;
  check_margin(state_new, x_new);

  track.max_abs_xdot = std::max(track.max_abs_xdot, std::abs(xdot));
  if (std::abs(xdot) > track.lipschitz_bound + 1e-8) ++track.bound_violations;

  track.head = {state_new.t, x_new, xdot};
  if (record) track.samples.push_back(track.head);
}

ShiftTrack shift_step(const ShiftTrack& track, const SimState& state_old,
                      const SimState& state_new, double dt, const EntropyModel& entropy,
                      const FluxModel& flux) {
  ShiftTrack out = track;
  advance_shift(out, state_old, state_new, dt, entropy, flux, true);
  return out;
}

}  // namespace shocklim
