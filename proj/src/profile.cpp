#include "shocklim/profile.hpp"

#include <algorithm>
#include <cmath>

#include "shocklim/error.hpp"
#include "shocklim/quadrature.hpp"

namespace shocklim {

namespace {

// Divided difference (A(u) - A(c)) / (u - c) as an average of A', free of
// cancellation when u is close to c.
double divided_difference(const FluxModel& flux, double u, double c) {
  if (u == c) return flux.a1(c);
  return quad::gauss8([&](double tau) { return flux.a1(c + tau * (u - c)); }, 0.0, 1.0);
}

// h(u) factored about the nearer end state so it keeps full relative
// accuracy as u approaches C_L or C_R.
double layer_rhs(const FluxModel& flux, const ShockPair& shock, double u) {
  if (u < shock.midpoint()) {
    return (u - shock.c_right) * (divided_difference(flux, u, shock.c_right) - shock.sigma);
  }
  return (u - shock.c_left) * (divided_difference(flux, u, shock.c_left) - shock.sigma);
}

struct Marcher {
  const FluxModel& flux;
  const ShockPair& shock;

  double inverse_rhs_integral(double s0, double s1) const {
    return quad::gauss8([&](double u) { return 1.0 / layer_rhs(flux, shock, u); }, s0, s1);
  }

  // Solves int_{s0}^{s} du / h(u) = dx for s (dx may be negative).
  double advance(double s0, double dx) const {
    // RK4 guess on s' = h(s).
    auto h = [&](double s) { return layer_rhs(flux, shock, s); };
    const double k1 = h(s0);
    const double k2 = h(s0 + 0.5 * dx * k1);
    const double k3 = h(s0 + 0.5 * dx * k2);
    const double k4 = h(s0 + dx * k3);
    double s = s0 + dx / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    const double lo = shock.c_right;
    const double hi = shock.c_left;
    for (int it = 0; it < 50; ++it) {
      const double g = inverse_rhs_integral(s0, s) - dx;
      const double step = g * h(s);
      double next = s - step;
      // Stay strictly inside the open interval.
      if (next <= lo) next = 0.5 * (s + lo);
      if (next >= hi) next = 0.5 * (s + hi);
      const bool done = std::abs(next - s) <= 4e-16 * std::max(1.0, std::abs(s)) ||
                        std::abs(g) <= 1e-15 * std::abs(dx);
      s = next;
      if (done) break;
    }
    return s;
  }
};

}  // namespace

double LayerProfile::rhs(double s) const { return layer_rhs(flux, shock, s); }

double default_half_width(const FluxModel& flux, const ShockPair& shock) {
  const double rate_l = flux.a1(shock.c_left) - shock.sigma;
  const double rate_r = shock.sigma - flux.a1(shock.c_right);
  return 40.0 * std::max(1.0 / rate_l, 1.0 / rate_r);
}

LayerProfile solve_profile(const FluxModel& flux, const ShockPair& shock, double tol,
                           double half_width) {
  if (!(shock.c_left > shock.c_right)) {
    throw Error(Errc::non_admissible_shock, "layer requires c_left > c_right");
  }
  if (!(tol > 0.0 && tol < 0.5)) throw Error(Errc::invalid_parameter, "tol must lie in (0, 1/2)");

  const double jump = shock.jump();
  for (int k = 1; k < 1000; ++k) {
    const double u = shock.c_right + jump * k / 1000.0;
    if (!(layer_rhs(flux, shock, u) < 0.0)) {
      throw Error(Errc::non_admissible_shock,
                  "layer right-hand side nonnegative at u=" + std::to_string(u));
    }
  }
  const double rate_l = flux.a1(shock.c_left) - shock.sigma;
  const double rate_r = shock.sigma - flux.a1(shock.c_right);
  if (!(rate_l > 0.0 && rate_r > 0.0)) {
    throw Error(Errc::non_admissible_shock, "Lax condition fails at the end states");
  }
  if (half_width <= 0.0) half_width = default_half_width(flux, shock);

  const double kappa = tol * jump;
  const double rate_max = std::max(rate_l, rate_r);
  const double base_step = 2.5e-4 / rate_max;
  const Marcher march{flux, shock};

  // Spacing grows like exp(rate |x| / 4) as the layer flattens out.
  auto spacing = [&](double x, double rate) {
    return std::min(base_step * std::exp(0.25 * rate * std::abs(x)), 0.05 / rate);
  };

  std::vector<ProfileKnot> right{{0.0, shock.midpoint()}};
  while (right.back().x < half_width) {
    const ProfileKnot& last = right.back();
    const double dx = spacing(last.x, rate_r);
    const double s = march.advance(last.s, dx);
    if (s - shock.c_right <= kappa || !(s < last.s)) break;
    right.push_back({last.x + dx, s});
  }
  std::vector<ProfileKnot> left;
  ProfileKnot cur{0.0, shock.midpoint()};
  while (cur.x > -half_width) {
    const double dx = spacing(cur.x, rate_l);
    const double s = march.advance(cur.s, -dx);
    if (shock.c_left - s <= kappa || !(s > cur.s)) break;
    cur = {cur.x - dx, s};
    left.push_back(cur);
  }

  LayerProfile p{flux, shock, {}, rate_l, rate_r};
  p.knots.reserve(left.size() + right.size());
  p.knots.insert(p.knots.end(), left.rbegin(), left.rend());
  p.knots.insert(p.knots.end(), right.begin(), right.end());
  return p;
}

double eval_profile(const LayerProfile& p, double x) {
  const auto& k = p.knots;
  const double cl = p.shock.c_left;
  const double cr = p.shock.c_right;
  double v;
  if (x <= k.front().x) {
    v = cl - (cl - k.front().s) * std::exp(p.tail_rate_left * (x - k.front().x));
  } else if (x >= k.back().x) {
    v = cr + (k.back().s - cr) * std::exp(-p.tail_rate_right * (x - k.back().x));
  } else {
    const auto it = std::upper_bound(k.begin(), k.end(), x,
                                     [](double xv, const ProfileKnot& kn) { return xv < kn.x; });
    const ProfileKnot& b = *it;
    const ProfileKnot& a = *(it - 1);
    const double h = b.x - a.x;
    const double secant = (b.s - a.s) / h;
    double ma = p.rhs(a.s);
    double mb = p.rhs(b.s);
    // Fritsch-Carlson limiting keeps each piece monotone.
    if (secant == 0.0) {
      ma = mb = 0.0;
    } else {
      const double alpha = ma / secant;
      const double beta = mb / secant;
      if (alpha < 0.0) ma = 0.0;
      if (beta < 0.0) mb = 0.0;
      const double r2 = alpha * alpha + beta * beta;
      if (r2 > 9.0) {
        const double tau = 3.0 / std::sqrt(r2);
        ma = tau * alpha * secant;
        mb = tau * beta * secant;
      }
    }
    const double t = (x - a.x) / h;
    const double t2 = t * t;
    const double t3 = t2 * t;
    v = (2 * t3 - 3 * t2 + 1) * a.s + (t3 - 2 * t2 + t) * h * ma + (-2 * t3 + 3 * t2) * b.s +
        (t3 - t2) * h * mb;
  }
  return std::clamp(v, cr, cl);
}

SimState layer_initial_data(const LayerProfile& p, double epsilon, const Grid& grid) {
  if (!(epsilon > 0.0)) throw Error(Errc::invalid_parameter, "epsilon must be positive");
  if (grid.dx() > epsilon) {
    throw Error(Errc::under_resolved_layer,
                "dx=" + std::to_string(grid.dx()) + " exceeds epsilon=" + std::to_string(epsilon));
  }
  SimState s;
  s.grid = grid;
  s.u = cell_averages(grid, [&](double x) { return eval_profile(p, x / epsilon); });
  s.t = 0.0;
  s.epsilon = epsilon;
  s.bc_left = p.shock.c_left;
  s.bc_right = p.shock.c_right;
  return s;
}

double profile_residual(const LayerProfile& p) {
  const auto& k = p.knots;
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < k.size(); ++i) {
    const double h1 = k[i].x - k[i - 1].x;
    const double h2 = k[i + 1].x - k[i].x;
    const double d = -h2 / (h1 * (h1 + h2)) * k[i - 1].s + (h2 - h1) / (h1 * h2) * k[i].s +
                     h1 / (h2 * (h1 + h2)) * k[i + 1].s;
    worst = std::max(worst, std::abs(d - p.rhs(k[i].s)));
  }
  return worst;
}

}  // namespace shocklim
