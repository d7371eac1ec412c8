#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "shocklim/error.hpp"
#include "shocklim/solver.hpp"

using namespace shocklim;

namespace {

const FluxModel kBurgers = FluxModel::burgers();

// Dense-sampling oracle for the exact Riemann flux of a convex A.
double godunov_oracle(const FluxModel& a, double ul, double ur) {
  const int n = 20000;
  double best = a.a(ul);
  for (int k = 0; k <= n; ++k) {
    const double v = a.a(ul + (ur - ul) * k / n);
    best = ul <= ur ? std::min(best, v) : std::max(best, v);
  }
  return best;
}

SimState make_state(const Grid& g, double eps, const std::function<double(double)>& u0,
                    double bl, double br) {
  SimState s;
  s.grid = g;
  s.epsilon = eps;
  s.bc_left = bl;
  s.bc_right = br;
  s.u = cell_averages(g, u0);
  return s;
}

}  // namespace

TEST_CASE("grid contract") {
  const Grid g = Grid::make(-1.0, 1.0, 16);
  CHECK(g.dx() == 0.125);
  CHECK(g.center(0) == -0.9375);
  CHECK_THROWS_AS(Grid::make(1.0, 1.0, 32), Error);
  CHECK_THROWS_AS(Grid::make(0.0, 1.0, 15), Error);
}

TEST_CASE("godunov flux examples against dense sampling") {
  CHECK(godunov_flux(kBurgers, 2.0, 0.0) == 2.0);
  CHECK(godunov_flux(kBurgers, 0.0, 2.0) == 0.0);
  for (const FluxModel& a : {FluxModel::burgers(), FluxModel::exponential(), FluxModel::quartic()}) {
    CHECK(godunov_flux(a, 0.37, 0.37) == a.a(0.37));
    for (double ul : {-1.5, -0.2, 0.0, 0.9}) {
      for (double ur : {-1.1, 0.0, 0.4, 1.6}) {
        CHECK(godunov_flux(a, ul, ur) == doctest::Approx(godunov_oracle(a, ul, ur)).epsilon(1e-7));
      }
    }
  }
}

TEST_CASE("godunov flux is monotone") {
  for (const FluxModel& a : {FluxModel::burgers(), FluxModel::exponential(), FluxModel::quartic()}) {
    const double h = 1e-4;
    for (int i = 0; i <= 30; ++i) {
      for (int j = 0; j <= 30; ++j) {
        const double ul = -1.5 + 0.1 * i;
        const double ur = -1.5 + 0.1 * j;
        CHECK(godunov_flux(a, ul + h, ur) - godunov_flux(a, ul, ur) >= -1e-10);
        CHECK(godunov_flux(a, ul, ur + h) - godunov_flux(a, ul, ur) <= 1e-10);
      }
    }
  }
}

TEST_CASE("stable_dt examples") {
  StepperConfig cfg;
  cfg.cfl_advective = 0.5;
  cfg.cfl_diffusive = 0.25;
  CHECK(stable_dt(1.0, 0.01, 0.01, cfg, 1.0) == doctest::Approx(0.0025));
  CHECK(stable_dt(1.0, 0.01, 0.0, cfg, 1.0) == doctest::Approx(0.005));
  CHECK(stable_dt(0.0, 0.005, 0.01, cfg, 1.0) == doctest::Approx(0.0025 / 4.0));
  CHECK(stable_dt(1.0, 0.01, 0.01, cfg, 0.001) == 0.001);
  CHECK_THROWS_AS(stable_dt(1.0, 0.01, 0.01, cfg, 0.0), Error);
}

TEST_CASE("stepper config validation") {
  StepperConfig cfg;
  cfg.t_end = 1.0;
  cfg.validate();
  cfg.cfl_diffusive = 0.6;
  CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("constant state is a fixed point") {
  const Grid g = Grid::make(0.0, 1.0, 64);
  const SimState s = make_state(g, 0.1, [](double) { return 0.3; }, 0.3, 0.3);
  const SimState n = step(s, kBurgers, 1e-4);
  for (double v : n.u) CHECK(v == 0.3);
}

TEST_CASE("empty evolution calls observers once") {
  const Grid g = Grid::make(0.0, 1.0, 64);
  SimState s = make_state(g, 0.1, [](double x) { return x; }, 0.0, 1.0);
  StepperConfig cfg;
  cfg.t_end = 0.0;
  int calls = 0;
  EvolveHooks hooks;
  hooks.observers.push_back([&](const SimState&) { ++calls; });
  const SimState out = evolve(s, kBurgers, cfg, hooks);
  CHECK(calls == 1);
  CHECK(out.u == s.u);
}

TEST_CASE("observers land exactly on checkpoints") {
  const Grid g = Grid::make(-1.0, 1.0, 64);
  SimState s = make_state(g, 0.05, [](double x) { return x < 0 ? 1.0 : -1.0; }, 1.0, -1.0);
  StepperConfig cfg;
  cfg.t_end = 0.3;
  cfg.output_stride = 3;
  std::vector<double> times;
  EvolveHooks hooks;
  hooks.observers.push_back([&](const SimState& st) { times.push_back(st.t); });
  evolve(s, kBurgers, cfg, hooks);
  REQUIRE(times.size() == 4);
  CHECK(times[0] == 0.0);
  CHECK(times[1] == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(times[3] == 0.3);
}

TEST_CASE("conservation with boundary inflow, per step and per run") {
  const Grid g = Grid::make(-1.0, 1.0, 200);
  auto u0 = [](double x) { return (x < 0 ? 1.0 : -1.0) + 0.5 * std::exp(-50 * (x + 0.4) * (x + 0.4)); };
  for (const FluxModel& a : {FluxModel::burgers(), FluxModel::quartic()}) {
    SimState s = make_state(g, 0.02, u0, 1.0, -1.0);
    StepperConfig cfg;
    cfg.t_end = 0.5;
    cfg.output_stride = 10;
    const double m0 = s.mass();
    double worst_step = 0.0;
    EvolveHooks hooks;
    hooks.on_step = [&](const SimState& before, const SimState& after, double) {
      const double r = std::abs(after.mass() - before.mass() - (after.inflow - before.inflow));
      worst_step = std::max(worst_step, r);
    };
    const SimState out = evolve(s, a, cfg, hooks);
    CHECK(worst_step <= 1e-13);
    CHECK(std::abs(out.mass() - m0 - out.inflow) / cfg.t_end <= 1e-10);
  }
}

TEST_CASE("maximum principle") {
  const Grid g = Grid::make(-1.0, 1.0, 256);
  auto u0 = [](double x) { return std::sin(3 * std::numbers::pi * x) * std::exp(-4 * x * x); };
  SimState s = make_state(g, 0.01, u0, 0.0, 0.0);
  const double lo = *std::min_element(s.u.begin(), s.u.end());
  const double hi = *std::max_element(s.u.begin(), s.u.end());
  StepperConfig cfg;
  cfg.t_end = 0.5;
  cfg.cfl_diffusive = 0.5;
  cfg.cfl_advective = 1.0;
  bool ok = true;
  EvolveHooks hooks;
  hooks.on_step = [&](const SimState&, const SimState& after, double) {
    for (double v : after.u) ok = ok && v >= std::min(lo, 0.0) && v <= std::max(hi, 0.0);
  };
  evolve(s, kBurgers, cfg, hooks);
  CHECK(ok);
}

TEST_CASE("comparison principle for ordered data") {
  const Grid g = Grid::make(-1.0, 1.0, 200);
  auto base = [](double x) { return 0.5 * std::cos(2 * x) + (x < 0 ? 0.8 : -0.8); };
  SimState a = make_state(g, 0.02, base, 0.8 + 0.5 * std::cos(2.0), -0.8 + 0.5 * std::cos(2.0));
  SimState b = make_state(
      g, 0.02, [&](double x) { return base(x) + 0.3 * std::exp(-20 * x * x); }, a.bc_left,
      a.bc_right);
  StepperConfig cfg;
  cfg.t_end = 0.4;
  const SimState ea = evolve(a, kBurgers, cfg);
  const SimState eb = evolve(b, kBurgers, cfg);
  for (std::size_t i = 0; i < ea.u.size(); ++i) CHECK(ea.u[i] <= eb.u[i] + 1e-15);
}

TEST_CASE("three-grid self-convergence is first order in L1") {
  auto run = [](int n) {
    const Grid g = Grid::make(-1.0, 1.0, n);
    SimState s = make_state(
        g, 0.05, [](double x) { return 0.5 + 0.3 * std::sin(std::numbers::pi * x); },
        0.5 + 0.3 * std::sin(-std::numbers::pi), 0.5 + 0.3 * std::sin(std::numbers::pi));
    StepperConfig cfg;
    cfg.t_end = 0.3;
    return evolve(s, kBurgers, cfg).u;
  };
  const auto c = run(200), m = run(400), f = run(800);
  auto l1 = [](const std::vector<double>& coarse, const std::vector<double>& fine, double dx) {
    double e = 0.0;
    for (std::size_t i = 0; i < coarse.size(); ++i) {
      e += std::abs(coarse[i] - 0.5 * (fine[2 * i] + fine[2 * i + 1])) * dx;
    }
    return e;
  };
  const double e1 = l1(c, m, 0.01);
  const double e2 = l1(m, f, 0.005);
  CHECK(std::log2(e1 / e2) >= 0.9);
}

TEST_CASE("boundary contamination is reported once") {
  const Grid g = Grid::make(-1.0, 1.0, 64);
  auto count = [&](const std::function<double(double)>& u0) {
    SimState s = make_state(g, 0.05, u0, 1.0, -1.0);
    StepperConfig cfg;
    cfg.t_end = 0.1;
    cfg.output_stride = 5;
    int warnings = 0;
    EvolveHooks hooks;
    hooks.on_warning = [&](const std::string&) { ++warnings; };
    evolve(s, kBurgers, cfg, hooks);
    return warnings;
  };
  CHECK(count([](double x) { return x < -0.95 ? 0.0 : (x < 0 ? 1.0 : -1.0); }) == 1);
  CHECK(count([](double x) { return x < 0 ? 1.0 : -1.0; }) == 0);
}
