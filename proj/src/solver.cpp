#include "shocklim/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "shocklim/error.hpp"
#include "shocklim/quadrature.hpp"

namespace shocklim {

Grid Grid::make(double x_lo, double x_hi, int n_cells) {
  if (!(x_hi > x_lo)) throw Error(Errc::invalid_parameter, "grid requires x_hi > x_lo");
  if (n_cells < 16) throw Error(Errc::invalid_parameter, "grid requires at least 16 cells");
  return Grid{x_lo, x_hi, n_cells};
}

double SimState::mass() const {
  long double s = 0.0L;
  for (double v : u) s += v;
  return static_cast<double>(s * grid.dx());
}

void StepperConfig::validate() const {
  if (!(cfl_advective > 0.0 && cfl_advective <= 1.0)) {
    throw Error(Errc::invalid_parameter, "cfl_advective must lie in (0, 1]");
  }
  if (!(cfl_diffusive > 0.0 && cfl_diffusive <= 0.5)) {
    throw Error(Errc::invalid_parameter, "cfl_diffusive must lie in (0, 1/2]");
  }
  if (output_stride < 1) throw Error(Errc::invalid_parameter, "output_stride must be >= 1");
}

namespace {

// Flux kernels. `sonic` is the minimiser of A, +-inf when A is monotone.
struct BurgersOps {
  double a(double u) const { return 0.5 * u * u; }
  double speed(double u) const { return std::abs(u); }
  double godunov(double ul, double ur) const {
    if (ul <= ur) {
      if (ul >= 0.0) return 0.5 * ul * ul;
      if (ur <= 0.0) return 0.5 * ur * ur;
      return 0.0;
    }
    return 0.5 * std::max(ul * ul, ur * ur);
  }
};

struct GenericOps {
  const FluxModel* flux;
  double sonic;
  double a(double u) const { return flux->a(u); }
  double speed(double u) const { return std::abs(flux->a1(u)); }
  double godunov(double ul, double ur) const {
    if (ul <= ur) {
      if (sonic <= ul) return flux->a(ul);
      if (sonic >= ur) return flux->a(ur);
      return flux->a(sonic);
    }
    return std::max(flux->a(ul), flux->a(ur));
  }
};

double sonic_or_inf(const FluxModel& flux) {
  if (auto s = flux.sonic_point()) return *s;
  // No zero of A': A is monotone on the whole line.
  return flux.a1(0.0) > 0.0 ? -std::numeric_limits<double>::infinity()
                            : std::numeric_limits<double>::infinity();
}

struct UpdateResult {
  double flux_left;
  double flux_right;
  double min_u;
  double max_u;
  double max_speed;
};

template <class Ops>
UpdateResult update(const Ops& ops, const std::vector<double>& u, std::vector<double>& out,
                    double bc_left, double bc_right, double lam, double mu) {
  const std::size_t n = u.size();
  out.resize(n);
  UpdateResult r{};
  r.min_u = std::numeric_limits<double>::infinity();
  r.max_u = -std::numeric_limits<double>::infinity();
  r.max_speed = std::max(ops.speed(bc_left), ops.speed(bc_right));

  double left_value = bc_left;
  double f_prev = ops.godunov(bc_left, u[0]);
  r.flux_left = f_prev;
  for (std::size_t i = 0; i < n; ++i) {
    const double ui = u[i];
    const double right_value = (i + 1 < n) ? u[i + 1] : bc_right;
    const double f_next = ops.godunov(ui, right_value);
    const double v = ui - lam * (f_next - f_prev) + mu * (right_value - 2.0 * ui + left_value);
    out[i] = v;
    r.min_u = std::min(r.min_u, v);
    r.max_u = std::max(r.max_u, v);
    r.max_speed = std::max(r.max_speed, ops.speed(v));
    f_prev = f_next;
    left_value = ui;
  }
  r.flux_right = f_prev;
  return r;
}

UpdateResult dispatch_update(const FluxModel& flux, const std::vector<double>& u,
                             std::vector<double>& out, double bc_left, double bc_right, double lam,
                             double mu) {
  if (flux.kind() == FluxKind::burgers) {
    return update(BurgersOps{}, u, out, bc_left, bc_right, lam, mu);
  }
  return update(GenericOps{&flux, sonic_or_inf(flux)}, u, out, bc_left, bc_right, lam, mu);
}

void check_range(const UpdateResult& r, double lo, double hi, double t) {
  constexpr double tol = 1e-12;
  if (r.min_u < lo - tol || r.max_u > hi + tol || !std::isfinite(r.min_u) ||
      !std::isfinite(r.max_u)) {
    throw Error(Errc::instability, "solution left [" + std::to_string(lo) + ", " +
                                       std::to_string(hi) + "] at t=" + std::to_string(t));
  }
}

std::pair<double, double> state_range(const SimState& s) {
  double lo = std::min(s.bc_left, s.bc_right);
  double hi = std::max(s.bc_left, s.bc_right);
  for (double v : s.u) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return {lo, hi};
}

}  // namespace

double godunov_flux(const FluxModel& flux, double u_l, double u_r) {
  return GenericOps{&flux, sonic_or_inf(flux)}.godunov(u_l, u_r);
}

double max_wave_speed(const SimState& state, const FluxModel& flux) {
  double s = std::max(std::abs(flux.a1(state.bc_left)), std::abs(flux.a1(state.bc_right)));
  for (double v : state.u) s = std::max(s, std::abs(flux.a1(v)));
  return s;
}

double stable_dt(double max_speed, double dx, double epsilon, const StepperConfig& cfg,
                 double gap) {
  if (!(gap > 0.0)) throw Error(Errc::invalid_parameter, "checkpoint gap must be positive");
  double dt = gap;
  if (max_speed > 0.0) dt = std::min(dt, cfg.cfl_advective * dx / max_speed);
  if (epsilon > 0.0) dt = std::min(dt, cfg.cfl_diffusive * dx * dx / epsilon);
  // Keep every coefficient of the explicit update nonnegative.
  const double rate = max_speed / dx + 2.0 * epsilon / (dx * dx);
  if (rate > 0.0) dt = std::min(dt, 1.0 / rate);
  return dt;
}

double stable_dt(const SimState& state, const FluxModel& flux, const StepperConfig& cfg,
                 double gap) {
  if (state.u.empty()) throw Error(Errc::degenerate_state, "empty state");
  return stable_dt(max_wave_speed(state, flux), state.grid.dx(), state.epsilon, cfg, gap);
}

double boundary_inflow(const SimState& state, const FluxModel& flux, double dt) {
  const double dx = state.grid.dx();
  const double fl = godunov_flux(flux, state.bc_left, state.u.front());
  const double fr = godunov_flux(flux, state.u.back(), state.bc_right);
  const double grad_l = (state.u.front() - state.bc_left) / dx;
  const double grad_r = (state.bc_right - state.u.back()) / dx;
  return dt * ((fl - fr) + state.epsilon * (grad_r - grad_l));
}

SimState step(const SimState& state, const FluxModel& flux, double dt) {
  if (state.u.empty()) throw Error(Errc::degenerate_state, "empty state");
  const double dx = state.grid.dx();
  SimState next = state;
  const auto [lo, hi] = state_range(state);
  const double inflow = boundary_inflow(state, flux, dt);
  const UpdateResult r = dispatch_update(flux, state.u, next.u, state.bc_left, state.bc_right,
                                         dt / dx, state.epsilon * dt / (dx * dx));
  check_range(r, lo, hi, state.t + dt);
  next.t = state.t + dt;
  next.inflow = state.inflow + inflow;
  return next;
}

SimState evolve(SimState state, const FluxModel& flux, const StepperConfig& cfg,
                const EvolveHooks& hooks) {
  cfg.validate();
  if (cfg.t_end < state.t) throw Error(Errc::invalid_parameter, "t_end precedes state time");
  if (state.u.empty()) throw Error(Errc::degenerate_state, "empty state");

  for (const Observer& obs : hooks.observers) obs(state);
  if (cfg.t_end == state.t) return state;

  const double dx = state.grid.dx();
  const auto [lo, hi] = state_range(state);
  const double contamination = 1e-6 * (state.bc_left != state.bc_right
                                           ? std::abs(state.bc_left - state.bc_right)
                                           : 1.0);
  bool warned = false;

  SimState next = state;
  double speed = max_wave_speed(state, flux);
  const double t0 = state.t;
  const int checkpoints = cfg.output_stride;

  for (int k = 1; k <= checkpoints; ++k) {
    const double t_k = (k == checkpoints) ? cfg.t_end
                                          : t0 + (cfg.t_end - t0) * static_cast<double>(k) /
                                                     static_cast<double>(checkpoints);
    while (state.t < t_k) {
      const double gap = t_k - state.t;
      double dt = stable_dt(speed, dx, state.epsilon, cfg, gap);
      const bool landing = dt >= gap * (1.0 - 1e-12);
      if (landing) dt = gap;

      const UpdateResult r = dispatch_update(flux, state.u, next.u, state.bc_left,
                                             state.bc_right, dt / dx,
                                             state.epsilon * dt / (dx * dx));
      check_range(r, lo, hi, state.t + dt);
      next.t = landing ? t_k : state.t + dt;
      // Ghost-face fluxes feed the conservation ledger.
      const double grad_l = (state.u.front() - state.bc_left) / dx;
      const double grad_r = (state.bc_right - state.u.back()) / dx;
      next.inflow = state.inflow + dt * ((r.flux_left - r.flux_right) +
                                         state.epsilon * (grad_r - grad_l));
      speed = r.max_speed;
      if (hooks.on_step) hooks.on_step(state, next, dt);
      std::swap(state, next);
    }

    if (!warned && (std::abs(state.u.front() - state.bc_left) > contamination ||
                    std::abs(state.u.back() - state.bc_right) > contamination)) {
      warned = true;
      if (hooks.on_warning) {
        hooks.on_warning("boundary contamination at t=" + std::to_string(state.t));
      }
    }
    for (const Observer& obs : hooks.observers) obs(state);
  }
  return state;
}

std::vector<double> cell_averages(const Grid& grid, const std::function<double(double)>& fn,
                                  std::span<const double> breaks) {
  std::vector<double> sorted(breaks.begin(), breaks.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> out(static_cast<std::size_t>(grid.n_cells));
  std::vector<double> pts;
  for (int i = 0; i < grid.n_cells; ++i) {
    const double a = grid.face(i);
    const double b = grid.face(i + 1);
    pts.assign({a});
    for (double p : sorted) {
      if (p > a && p < b) pts.push_back(p);
    }
    pts.push_back(b);
    // Weighted means per piece, combined by width fraction, so constant data
    // averages exactly.
    constexpr double wsum =
        quad::gauss3_weights[0] + quad::gauss3_weights[1] + quad::gauss3_weights[2];
    double s = 0.0;
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
      const double c = 0.5 * (pts[k] + pts[k + 1]);
      const double h = 0.5 * (pts[k + 1] - pts[k]);
      double m = 0.0;
      for (std::size_t q = 0; q < 3; ++q) m += quad::gauss3_weights[q] * fn(c + h * quad::gauss3_nodes[q]);
      m /= wsum;
      s += pts.size() == 2 ? m : m * (pts[k + 1] - pts[k]) / (b - a);
    }
    out[static_cast<std::size_t>(i)] = s;
  }
  return out;
}

}  // namespace shocklim
