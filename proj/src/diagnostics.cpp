#include "shocklim/diagnostics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "shocklim/error.hpp"
#include "shocklim/quadrature.hpp"

namespace shocklim {

WeightFn WeightFn::make(double theta, double delta) {
  if (!(theta > 0.0)) throw Error(Errc::invalid_parameter, "theta must be positive");
  // Tolerate the rounding in delta = 1/theta computed by the caller.
  if (!(delta * theta >= 1.0 - 1e-12)) {
    throw Error(Errc::invalid_parameter, "weight requires delta >= 1/theta (delta=" +
                                             std::to_string(delta) +
                                             ", theta=" + std::to_string(theta) + ")");
  }
  return WeightFn{theta, delta};
}

double WeightFn::value(double x) const {
  if (x <= 0.0) return 0.0;
  if (x < knee()) return theta * std::exp(1.0 - theta * delta) * x;
  if (x < delta) return std::exp(theta * (x - delta));
  return 1.0;
}

double WeightFn::derivative(double x) const {
  if (x < 0.0) return 0.0;
  if (x < knee()) return theta * std::exp(1.0 - theta * delta);
  if (x < delta) return theta * std::exp(theta * (x - delta));
  return 0.0;
}

double WeightFn::defect_integral() const {
  const double e = std::exp(1.0 - theta * delta);
  return theta * e * e;
}

double weight_eval(const WeightFn& w, double x) {
  if (x < 0.0) throw Error(Errc::invalid_parameter, "weight queried at negative argument");
  return w.value(x);
}

double weight_defect_quadrature(const WeightFn& w) {
  auto integrand = [&](double x) {
    const double d = w.derivative(x);
    return d > w.theta * w.value(x) ? d * d : 0.0;
  };
  // Composite Gauss on each smooth piece; the rule never samples the kinks.
  auto composite = [&](double a, double b) {
    constexpr int panels = 64;
    double s = 0.0;
    const double h = (b - a) / panels;
    for (int k = 0; k < panels; ++k) s += quad::gauss8(integrand, a + k * h, a + (k + 1) * h);
    return s;
  };
  const double knee = std::min(w.knee(), w.delta);
  double total = composite(0.0, knee);
  if (w.delta > knee) total += composite(knee, w.delta);
  return total;
}

namespace {

// Visits every cell of the state as pieces split at the sorted breakpoints;
// fn(i, a, b) returns the integral over [a, b] inside cell i.
template <class Fn>
double integrate_pieces(const SimState& state, std::span<const double> breaks, Fn&& fn) {
  const Grid& g = state.grid;
  const double dx = g.dx();
  double total = 0.0;
  for (int i = 0; i < g.n_cells; ++i) {
    double a = g.x_lo + i * dx;
    const double b = g.x_lo + (i + 1) * dx;
    for (double p : breaks) {
      if (p > a && p < b) {
        total += fn(i, a, p);
        a = p;
      }
    }
    total += fn(i, a, b);
  }
  return total;
}

std::array<double, 5> weight_breaks(double X, double eps, const WeightFn& w) {
  std::array<double, 5> br{X - eps * w.delta, X - eps * w.knee(), X, X + eps * w.knee(),
                           X + eps * w.delta};
  std::sort(br.begin(), br.end());
  return br;
}

}  // namespace

double weighted_H(const SimState& state, double X, const WeightFn& w, const EntropyModel& entropy,
                  const ShockPair& shock) {
  const double eps = state.epsilon;
  const double band = eps * w.delta;
  const auto br = weight_breaks(X, eps, w);
  return integrate_pieces(state, br, [&](int i, double a, double b) {
    const double u = state.u[static_cast<std::size_t>(i)];
    const double mid = 0.5 * (a + b);
    const double rel = relative_entropy(entropy, u, shifted_shock(shock, X, mid));
    if (b <= X - band || a >= X + band) return (b - a) * rel;
    const double wint = quad::gauss3(
        [&](double x) {
          const double phi = w.value(std::abs(x - X) / eps);
          return phi * phi;
        },
        a, b);
    return wint * rel;
  });
}

double relative_entropy_total(const SimState& state, double X, const EntropyModel& entropy,
                              const ShockPair& shock, double band) {
  const std::array<double, 3> br{X - band, X, X + band};
  return integrate_pieces(state, br, [&](int i, double a, double b) {
    const double mid = 0.5 * (a + b);
    if (std::abs(mid - X) < band) return 0.0;
    return (b - a) *
           relative_entropy(entropy, state.u[static_cast<std::size_t>(i)],
                            shifted_shock(shock, X, mid));
  });
}

double l2_distance_sq(const SimState& state, double X, const ShockPair& shock) {
  const std::array<double, 1> br{X};
  return integrate_pieces(state, br, [&](int i, double a, double b) {
    const double d = state.u[static_cast<std::size_t>(i)] - shifted_shock(shock, X, 0.5 * (a + b));
    return (b - a) * d * d;
  });
}

double pos_deriv_norm(const SimState& state) {
  if (state.u.size() < 2) throw Error(Errc::invalid_parameter, "need at least two cells");
  const double dx = state.grid.dx();
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < state.u.size(); ++i) {
    const double d = std::max((state.u[i + 1] - state.u[i]) / dx, 0.0);
    s += d * d;
  }
  return std::sqrt(s * dx);
}

HRateTerms h_rate_terms(const SimState& state, double X, double Xdot, const WeightFn& w,
                           const EntropyModel& entropy, const FluxModel& flux,
                           const ShockPair& shock) {
  const double eps = state.epsilon;
  const double band = eps * w.delta;
  const double dx = state.grid.dx();
  const std::size_t n = state.u.size();
  const auto br = weight_breaks(X, eps, w);

  HRateTerms terms{0.0, 0.0};
  terms.dif = integrate_pieces(state, br, [&](int i, double a, double b) {
    const std::size_t k = static_cast<std::size_t>(i);
    const double u = state.u[k];
    const double ul = k == 0 ? state.bc_left : state.u[k - 1];
    const double ur = k + 1 == n ? state.bc_right : state.u[k + 1];
    const double uxx = (ur - 2.0 * u + ul) / (dx * dx);
    const double c = shifted_shock(shock, X, 0.5 * (a + b));
    const double factor = eps * uxx * (entropy.eta1(u) - entropy.eta1(c));
    if (b <= X - band || a >= X + band) return (b - a) * factor;
    const double wint = quad::gauss3(
        [&](double x) {
          const double phi = w.value(std::abs(x - X) / eps);
          return phi * phi;
        },
        a, b);
    return wint * factor;
  });

  terms.hyp = integrate_pieces(state, br, [&](int i, double a, double b) {
    if (b <= X - band || a >= X + band) return 0.0;
    const double u = state.u[static_cast<std::size_t>(i)];
    const bool left = 0.5 * (a + b) < X;
    const double c = left ? shock.c_left : shock.c_right;
    const double bracket =
        Xdot * relative_entropy(entropy, u, c) - relative_flux(entropy, flux, u, c);
    const double wint = quad::gauss3(
        [&](double x) {
          const double z = std::abs(x - X) / eps;
          return 2.0 / eps * w.value(z) * w.derivative(z);
        },
        a, b);
    return (left ? 1.0 : -1.0) * wint * bracket;
  });
  return terms;
}

std::vector<DriftPoint> drift_deviation(const std::vector<ShiftSample>& samples, double sigma) {
  std::vector<DriftPoint> out;
  out.reserve(samples.size());
  for (const ShiftSample& s : samples) {
    const double d = s.x - sigma * s.t;
    const double dev2 = d * d;
    const double ratio =
        s.t > 0.0 ? dev2 / std::pow(s.t, 2.0 / 3.0) : std::numeric_limits<double>::quiet_NaN();
    out.push_back({s.t, dev2, ratio});
  }
  return out;
}

DiagRecord diagnose(const SimState& state, const ShiftSample& shift, const WeightFn& w,
                    const EntropyModel& entropy, const FluxModel& flux, const ShockPair& shock) {
  DiagRecord r;
  r.t = state.t;
  r.x_shift = shift.x;
  r.xdot = shift.xdot;
  r.H = weighted_H(state, shift.x, w, entropy, shock);
  r.l2sq = l2_distance_sq(state, shift.x, shock);
  r.rel_ent_total = relative_entropy_total(state, shift.x, entropy, shock);
  r.pos_deriv_norm = pos_deriv_norm(state);
  const HRateTerms terms = h_rate_terms(state, shift.x, shift.xdot, w, entropy, flux, shock);
  r.hyp = terms.hyp;
  r.dif = terms.dif;
  const DriftPoint drift = drift_deviation({shift}, shock.sigma).front();
  r.drift_dev2 = drift.dev2;
  r.drift_ratio = drift.ratio;
  return r;
}

}  // namespace shocklim
