#pragma once

#include <vector>

#include "shocklim/model.hpp"
#include "shocklim/solver.hpp"

namespace shocklim {

struct ProfileKnot {
  double x;
  double s;
};

/// Tabulated steady viscous layer S1 solving S1' = A(S1) - A(C_L) - sigma (S1 - C_L),
/// S1(-inf) = C_L, S1(+inf) = C_R, normalised so S1(0) = (C_L + C_R)/2.
struct LayerProfile {
  FluxModel flux;
  ShockPair shock;
  std::vector<ProfileKnot> knots;  // increasing x, decreasing s
  double tail_rate_left;   // h'(C_L)
  double tail_rate_right;  // |h'(C_R)|

  /// Right-hand side h(s) of the layer equation.
  double rhs(double s) const;
};

/// Default tabulation half-width: 40 e-foldings of the slower tail.
double default_half_width(const FluxModel& flux, const ShockPair& shock);

/// Inverts x(S) = int_{mid}^{S} du / h(u) onto a graded knot grid covering
/// [-half_width, half_width]. Marching stops early once S is within
/// tol * (C_L - C_R) of an end state; the exponential tails take over there.
/// Throws Errc::non_admissible_shock if h >= 0 somewhere inside (C_R, C_L).
LayerProfile solve_profile(const FluxModel& flux, const ShockPair& shock, double tol = 1e-10,
                           double half_width = 0.0);

/// Monotone cubic Hermite interpolation between knots, exponential tails
/// outside, clamped to [C_R, C_L].
double eval_profile(const LayerProfile& p, double x);

/// Cell averages of S1(x / epsilon). Throws Errc::invalid_parameter for
/// epsilon <= 0 and Errc::under_resolved_layer when dx > epsilon.
SimState layer_initial_data(const LayerProfile& p, double epsilon, const Grid& grid);

/// Max over interior knots of |S1' - h(S1)| with S1' from the three-point
/// non-uniform centred difference.
double profile_residual(const LayerProfile& p);

}  // namespace shocklim
