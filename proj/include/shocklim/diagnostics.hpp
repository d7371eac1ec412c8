#pragma once

#include <vector>

#include "shocklim/model.hpp"
#include "shocklim/shift.hpp"
#include "shocklim/solver.hpp"

namespace shocklim {

/// Layer-localising weight phi: linear with slope theta e^{1 - theta delta}
/// on [0, 1/theta), then e^{theta (x - delta)} up to delta, then 1.
struct WeightFn {
  double theta;
  double delta;

  /// Throws Errc::invalid_parameter unless theta > 0 and delta >= 1/theta.
  static WeightFn make(double theta, double delta);

  double knee() const { return 1.0 / theta; }
  double value(double x) const;
  /// One-sided (right) derivative.
  double derivative(double x) const;
  /// Closed form of int_0^delta (phi')^2 1{phi' > theta phi} dx.
  double defect_integral() const;
};

double weight_eval(const WeightFn& w, double x);

/// Numerical int_0^delta (phi')^2 1{phi' > theta phi} dx by composite
/// Gauss-Legendre on each smooth piece of phi.
double weight_defect_quadrature(const WeightFn& w);

struct DiagRecord {
  double t = 0.0;
  double x_shift = 0.0;
  double xdot = 0.0;
  double H = 0.0;
  double l2sq = 0.0;
  double rel_ent_total = 0.0;
  double pos_deriv_norm = 0.0;
  double hyp = 0.0;
  double dif = 0.0;
  double drift_dev2 = 0.0;
  double drift_ratio = 0.0;  // NaN at t = 0
};

/// int phi^2(|x - X|/eps) eta(U | S) dx over cells split at X and at the
/// weight's kinks.
double weighted_H(const SimState& state, double X, const WeightFn& w, const EntropyModel& entropy,
                  const ShockPair& shock);

/// int eta(U | S(. - X)) dx restricted to |x - X| >= band (band = 0: whole line).
double relative_entropy_total(const SimState& state, double X, const EntropyModel& entropy,
                              const ShockPair& shock, double band = 0.0);

/// ||U - S0(. - X)||^2 in L^2.
double l2_distance_sq(const SimState& state, double X, const ShockPair& shock);

/// sqrt(sum max((u_{i+1} - u_i)/dx, 0)^2 dx).
double pos_deriv_norm(const SimState& state);

struct HRateTerms {
  double hyp;  // (L)_Hyp + (R)_Hyp
  double dif;  // (L)_Dif + (R)_Dif
};

/// Hyperbolic and diffusive parts of dH/dt: on the left of X
///   (2/eps) phi phi' [Xdot eta(U|C_L) - F(U, C_L)],
/// on the right the negative of the same with C_R, and
///   eps phi^2 U_xx (eta'(U) - eta'(C_side))
/// with U_xx from the solver's centred stencil.
HRateTerms h_rate_terms(const SimState& state, double X, double Xdot, const WeightFn& w,
                           const EntropyModel& entropy, const FluxModel& flux,
                           const ShockPair& shock);

struct DriftPoint {
  double t;
  double dev2;
  double ratio;  // dev2 / t^{2/3}; NaN at t = 0
};

std::vector<DriftPoint> drift_deviation(const std::vector<ShiftSample>& samples, double sigma);

/// Fills every field of a DiagRecord for one snapshot.
DiagRecord diagnose(const SimState& state, const ShiftSample& shift, const WeightFn& w,
                    const EntropyModel& entropy, const FluxModel& flux, const ShockPair& shock);

}  // namespace shocklim
