#include <cmath>

#include "doctest.h"
#include "shocklim/error.hpp"
#include "shocklim/profile.hpp"
#include "shocklim/solver.hpp"

using namespace shocklim;

namespace {

const FluxModel kBurgers = FluxModel::burgers();

LayerProfile burgers_layer() { return solve_profile(kBurgers, make_shock(kBurgers, 1.0, -1.0)); }

}  // namespace

TEST_CASE("burgers layer equals -tanh(x/2)") {
  const LayerProfile p = burgers_layer();
  CHECK(std::abs(eval_profile(p, 0.0)) <= 1e-12);
  CHECK(eval_profile(p, 2.0) == doctest::Approx(-0.7615941559557649).epsilon(1e-12));
  CHECK(eval_profile(p, -2.0) == doctest::Approx(0.7615941559557649).epsilon(1e-12));
  CHECK(eval_profile(p, 1.0) == doctest::Approx(-0.46211715726000974).epsilon(1e-12));
  double worst = 0.0;
  for (int k = -4000; k <= 4000; ++k) {
    const double x = k * 0.005;
    worst = std::max(worst, std::abs(eval_profile(p, x) + std::tanh(0.5 * x)));
  }
  CHECK(worst <= 1e-8);
}

TEST_CASE("profile invariants") {
  const LayerProfile p = burgers_layer();
  CHECK(p.tail_rate_left == doctest::Approx(1.0));
  CHECK(p.tail_rate_right == doctest::Approx(1.0));
  for (std::size_t k = 1; k < p.knots.size(); ++k) {
    CHECK(p.knots[k].x > p.knots[k - 1].x);
    CHECK(p.knots[k].s < p.knots[k - 1].s);
    CHECK(p.knots[k].s > -1.0);
    CHECK(p.knots[k].s < 1.0);
  }
  CHECK(profile_residual(p) <= 1e-8);
  const ProfileKnot& kn = p.knots[p.knots.size() / 3];
  CHECK(eval_profile(p, kn.x) == kn.s);
  const double far = p.knots.back().x + 40.0 / p.tail_rate_right;
  CHECK(std::abs(eval_profile(p, far) - (-1.0)) <= 1e-15);
  double prev = eval_profile(p, -30.0);
  for (int k = 1; k <= 10000; ++k) {
    const double v = eval_profile(p, -30.0 + 60.0 * k / 10000.0);
    CHECK(v <= prev);
    prev = v;
  }
}

TEST_CASE("profiles for other convex fluxes satisfy the layer equation") {
  for (const FluxModel& a : {FluxModel::exponential(), FluxModel::quartic()}) {
    const ShockPair s = make_shock(a, 1.0, -0.5);
    const LayerProfile p = solve_profile(a, s);
    CHECK(profile_residual(p) <= 1e-8);
    CHECK(eval_profile(p, 0.0) == doctest::Approx(s.midpoint()).epsilon(1e-12));
    // Tail rates from the linearisation h'(C) = A'(C) - sigma.
    CHECK(p.tail_rate_left == doctest::Approx(a.a1(1.0) - s.sigma).epsilon(1e-8));
    CHECK(p.tail_rate_right == doctest::Approx(s.sigma - a.a1(-0.5)).epsilon(1e-8));
  }
}

TEST_CASE("layer initial data") {
  const LayerProfile p = burgers_layer();
  const Grid g = Grid::make(-1.0, 1.0, 400);
  const SimState s = layer_initial_data(p, 0.05, g);
  CHECK(s.u.front() == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(s.u.back() == doctest::Approx(-1.0).epsilon(1e-8));
  CHECK(s.bc_left == 1.0);
  CHECK(s.bc_right == -1.0);
  try {
    layer_initial_data(p, 0.001, g);
    FAIL("expected under-resolved");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::under_resolved_layer);
  }
  CHECK_THROWS_AS(layer_initial_data(p, 0.0, g), Error);
}

TEST_CASE("squared distance of layer data to the shock scales linearly in epsilon") {
  const LayerProfile p = burgers_layer();
  auto dist = [&](double eps) {
    const Grid g = Grid::make(-1.0, 1.0, static_cast<int>(std::lround(2.0 / (eps / 20.0))));
    const SimState s = layer_initial_data(p, eps, g);
    double d = 0.0;
    for (int i = 0; i < g.n_cells; ++i) {
      const double c = g.center(i) < 0.0 ? 1.0 : -1.0;
      const double e = s.u[static_cast<std::size_t>(i)] - c;
      d += e * e * g.dx();
    }
    return d;
  };
  const double d1 = dist(0.04);
  const double d2 = dist(0.02);
  CHECK(d1 / d2 == doctest::Approx(2.0).epsilon(0.01));
  // int (tanh(x/2) - sign x)^2 dx = 4 (2 ln 2 - 1)
  CHECK(d2 / 0.02 == doctest::Approx(1.5451774444795623).epsilon(0.02));
}

TEST_CASE("layer data is nearly steady under the scheme") {
  const LayerProfile p = burgers_layer();
  auto change = [&](int n) {
    const Grid g = Grid::make(-1.0, 1.0, n);
    SimState s0 = layer_initial_data(p, 0.05, g);
    StepperConfig cfg;
    cfg.t_end = 1.0;
    cfg.cfl_diffusive = 0.45;
    const SimState s1 = evolve(s0, kBurgers, cfg);
    double d = 0.0;
    for (std::size_t i = 0; i < s0.u.size(); ++i) d += (s1.u[i] - s0.u[i]) * (s1.u[i] - s0.u[i]);
    return std::sqrt(d * g.dx());
  };
  // The first-order scheme relaxes S1 onto its own discrete layer, an O(dx) move.
  const double c1 = change(200);
  const double c2 = change(400);
  CHECK(c1 <= 0.01);
  CHECK(c2 <= 0.005);
  CHECK(c1 / c2 == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("non-admissible states are rejected") {
  const FluxModel b = FluxModel::burgers();
  const ShockPair bad{-1.0, 1.0, 0.0};
  try {
    solve_profile(b, bad);
    FAIL("expected non-admissible");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::non_admissible_shock);
  }
}
