#pragma once

#include <vector>

#include "shocklim/model.hpp"
#include "shocklim/solver.hpp"

namespace shocklim {

struct ShiftSample {
  double t;
  double x;
  double xdot;
};

/// The shift curve X(t) driven by Xdot = f(U(t, X), (C_L + C_R)/2), X(0) = 0.
struct ShiftTrack {
  std::vector<ShiftSample> samples;  // recorded history
  ShiftSample head{};                // latest state, recorded or not
  double midpoint = 0.0;
  double lipschitz_bound = 0.0;  // 2 Lambda^2
  double max_abs_xdot = 0.0;     // over every step, recorded or not
  long bound_violations = 0;

  /// Starts at X(t0) = 0 with Xdot = f(trace, m) from the initial state.
  static ShiftTrack start(const SimState& state, const ShockPair& shock,
                          const EntropyModel& entropy, const FluxModel& flux, double lambda);

  const ShiftSample& current() const { return head; }
};

/// Linear interpolation of cell averages between neighbouring centres.
/// Throws Errc::out_of_domain outside [center(0), center(n-1)].
double trace(const SimState& state, double x);

/// Heun step of the shift ODE synchronised with one PDE step:
///   k1 = f(trace(old, X), m), X* = X + dt k1, k2 = f(trace(new, X*), m),
///   X += dt (k1 + k2)/2.
/// `record` controls whether the new point is also appended to `samples`.
/// Throws Errc::domain_too_small when X comes within 5 cells of either end.
void advance_shift(ShiftTrack& track, const SimState& state_old, const SimState& state_new,
                   double dt, const EntropyModel& entropy, const FluxModel& flux,
                   bool record = true);

/// Value-returning form of advance_shift; dt == 0 returns the track unchanged.
ShiftTrack shift_step(const ShiftTrack& track, const SimState& state_old,
                      const SimState& state_new, double dt, const EntropyModel& entropy,
                      const FluxModel& flux);

/// S0(x - X): C_L for x < X, C_R for x >= X.
inline double shifted_shock(const ShockPair& shock, double X, double x) {
  return x < X ? shock.c_left : shock.c_right;
}

}  // namespace shocklim
