#include <cmath>

#include "doctest.h"
#include "shocklim/diagnostics.hpp"
#include "shocklim/error.hpp"

using namespace shocklim;

namespace {

const FluxModel kBurgers = FluxModel::burgers();
const EntropyModel kQuadratic = EntropyModel::quadratic();
const ShockPair kShock{1.0, -1.0, 0.0};

SimState averaged(const Grid& g, double eps, const std::function<double(double)>& fn) {
  SimState s;
  s.grid = g;
  s.epsilon = eps;
  s.bc_left = 1.0;
  s.bc_right = -1.0;
  const double breaks[] = {0.0};
  s.u = cell_averages(g, fn, breaks);
  return s;
}

}  // namespace

TEST_CASE("weight branch values") {
  const WeightFn w = WeightFn::make(1.0, 2.0);
  CHECK(w.value(0.0) == 0.0);
  CHECK(w.value(2.0) == 1.0);
  CHECK(w.value(5.0) == 1.0);
  CHECK(w.value(1.0) == doctest::Approx(0.36787944117144233).epsilon(1e-15));
  CHECK(w.value(0.5) == doctest::Approx(0.18393972058572117).epsilon(1e-15));
  // Both branch formulas at the knee.
  CHECK(std::exp(1.0 - 2.0) * 1.0 == doctest::Approx(std::exp(1.0 * (1.0 - 2.0))));
  CHECK(weight_eval(w, 1.5) == w.value(1.5));
  CHECK_THROWS_AS(weight_eval(w, -0.1), Error);
  CHECK_THROWS_AS(WeightFn::make(0.0, 1.0), Error);
  CHECK_THROWS_AS(WeightFn::make(1.0, 0.5), Error);
}

TEST_CASE("weight is nondecreasing and continuous") {
  for (double theta : {0.3, 1.0, 4.0}) {
    const WeightFn w = WeightFn::make(theta, 3.0 / theta);
    double prev = 0.0;
    for (int k = 1; k <= 4000; ++k) {
      const double x = w.delta * 1.2 * k / 4000.0;
      const double v = w.value(x);
      CHECK(v >= prev);
      CHECK(v - prev <= theta * w.delta * 1.2 / 4000.0 + 1e-15);
      prev = v;
    }
    const double knee = w.knee();
    CHECK(w.value(knee * (1 - 1e-12)) == doctest::Approx(w.value(knee)).epsilon(1e-10));
  }
}

TEST_CASE("weight defect integral matches its closed form") {
  for (double theta : {0.5, 1.0, 2.0}) {
    for (double delta : {1.0 / theta, 2.0, 5.0, 10.0}) {
      const WeightFn w = WeightFn::make(theta, delta);
      const double exact = theta * std::exp(2.0) * std::exp(-2.0 * theta * delta);
      CHECK(w.defect_integral() == doctest::Approx(exact).epsilon(1e-14));
      CHECK(std::abs(weight_defect_quadrature(w) - exact) <= 1e-8 * exact);
    }
  }
}

TEST_CASE("H vanishes on the shifted shock and counts a square bump exactly") {
  const Grid g = Grid::make(-1.0, 1.0, 200);
  const WeightFn w = WeightFn::make(1.0, 2.0);
  const SimState shock = averaged(g, 0.01, [](double x) { return x < 0 ? 1.0 : -1.0; });
  CHECK(weighted_H(shock, 0.0, w, kQuadratic, kShock) == 0.0);
  const double a = 0.3, L = 0.3;
  const SimState sq =
      averaged(g, 0.01, [&](double x) { return (x < 0 ? 1.0 : -1.0) + (x > 0.1 && x < 0.1 + L ? a : 0.0); });
  CHECK(weighted_H(sq, 0.0, w, kQuadratic, kShock) == doctest::Approx(a * a * L).epsilon(1e-12));
}

TEST_CASE("H tends to the plain relative entropy as the weight saturates") {
  const Grid g = Grid::make(-1.0, 1.0, 400);
  const SimState s = averaged(g, 0.01, [](double x) { return (x < 0 ? 1.0 : -1.0) + 0.4 * std::exp(-20 * x * x); });
  const WeightFn w = WeightFn::make(1e6, 1e-6);
  const double total = relative_entropy_total(s, 0.0, kQuadratic, kShock);
  CHECK(weighted_H(s, 0.0, w, kQuadratic, kShock) == doctest::Approx(total).epsilon(1e-6));
}

TEST_CASE("H dominance sandwich") {
  const Grid g = Grid::make(-1.0, 1.0, 400);
  const EntropyModel k = EntropyModel::quartic();
  const SimState s = averaged(g, 0.02, [](double x) { return (x < 0 ? 1.0 : -1.0) + 0.5 * std::sin(9 * x) * std::exp(-8 * x * x); });
  const WeightFn w = WeightFn::make(0.5, 4.0);
  const LambdaBox box = lambda_estimate(k, kBurgers, 1.6, 128);
  for (double X : {-0.05, 0.0, 0.013}) {
    const double H = weighted_H(s, X, w, k, kShock);
    const double R = relative_entropy_total(s, X, k, kShock);
    CHECK(H >= 0.0);
    CHECK(H <= R);
    CHECK(R <= 0.5 * box.lambda * l2_distance_sq(s, X, kShock));
  }
  CHECK(relative_entropy_total(s, 0.0, k, kShock, 0.2) < relative_entropy_total(s, 0.0, k, kShock));
}

TEST_CASE("positive derivative norm") {
  const Grid unit = Grid::make(0.0, 1.0, 100);
  SimState s;
  s.grid = unit;
  for (int i = 0; i < 100; ++i) s.u.push_back(unit.center(i));
  CHECK(pos_deriv_norm(s) == doctest::Approx(1.0).epsilon(unit.dx()));
  for (double& v : s.u) v = -v;
  CHECK(pos_deriv_norm(s) == 0.0);

  // Gaussian bump p = a exp(-x^2/(2w^2)); oracle integrates (p')_+^2 analytically sampled.
  const double a = 0.5, w = 0.1;
  const Grid g = Grid::make(-1.0, 1.0, static_cast<int>(std::lround(2.0 / (w / 50.0))));
  SimState b;
  b.grid = g;
  b.u = cell_averages(g, [&](double x) { return a * std::exp(-x * x / (2 * w * w)); });
  double oracle = 0.0;
  const int n = 200000;
  for (int k = 0; k < n; ++k) {
    const double x = -1.0 + (k + 0.5) * 2.0 / n;
    const double d = std::max(-a * x / (w * w) * std::exp(-x * x / (2 * w * w)), 0.0);
    oracle += d * d * 2.0 / n;
  }
  CHECK(pos_deriv_norm(b) == doctest::Approx(std::sqrt(oracle)).epsilon(0.02));
}

TEST_CASE("dH/dt terms vanish on the shifted shock") {
  const Grid g = Grid::make(-1.0, 1.0, 200);
  const SimState s = averaged(g, 0.01, [](double x) { return x < 0 ? 1.0 : -1.0; });
  const HRateTerms t = h_rate_terms(s, 0.0, 0.3, WeightFn::make(1.0, 3.0), kQuadratic, kBurgers, kShock);
  CHECK(t.hyp == 0.0);
  CHECK(t.dif == 0.0);
}

TEST_CASE("dH/dt terms track dH/dt on a smooth run") {
  const Grid g = Grid::make(-1.0, 1.0, 800);
  const double eps = 0.05;
  SimState s = averaged(g, eps, [&](double x) { return -std::tanh(x / (2 * eps)) + 0.3 * std::exp(-200 * (x + 0.15) * (x + 0.15)); });
  const WeightFn w = WeightFn::make(0.5, 3.0);
  const double X = 0.0, Xdot = 0.05;
  StepperConfig cfg;
  cfg.t_end = 1e-3;
  cfg.output_stride = 1;
  // Finite-difference derivative of H along the scheme with X moving at Xdot.
  const double h0 = weighted_H(s, X, w, kQuadratic, kShock);
  const SimState s1 = evolve(s, kBurgers, cfg);
  const double h1 = weighted_H(s1, X + Xdot * cfg.t_end, w, kQuadratic, kShock);
  const HRateTerms t0 = h_rate_terms(s, X, Xdot, w, kQuadratic, kBurgers, kShock);
  const HRateTerms t1 = h_rate_terms(s1, X + Xdot * cfg.t_end, Xdot, w, kQuadratic, kBurgers, kShock);
  const double predicted = 0.5 * (t0.hyp + t0.dif + t1.hyp + t1.dif);
  CHECK((h1 - h0) / cfg.t_end == doctest::Approx(predicted).epsilon(0.05));
}

TEST_CASE("drift deviation") {
  std::vector<ShiftSample> exact{{0.0, 0.0, 0.5}, {1.0, 0.5, 0.5}, {2.0, 1.0, 0.5}};
  for (const DriftPoint& p : drift_deviation(exact, 0.5)) CHECK(p.dev2 == 0.0);
  std::vector<ShiftSample> off{{0.0, 0.2, 0.5}, {1.0, 0.7, 0.5}, {8.0, 4.2, 0.5}};
  const auto d = drift_deviation(off, 0.5);
  CHECK(std::isnan(d[0].ratio));
  CHECK(d[1].dev2 == doctest::Approx(0.04));
  CHECK(d[2].ratio == doctest::Approx(0.04 / 4.0));
}

TEST_CASE("diagnose fills a consistent record") {
  const Grid g = Grid::make(-1.0, 1.0, 200);
  const SimState s = averaged(g, 0.02, [](double x) { return (x < 0 ? 1.0 : -1.0) + 0.2 * std::exp(-30 * x * x); });
  const WeightFn w = WeightFn::make(0.5, 4.0);
  const DiagRecord r = diagnose(s, {0.0, 0.01, 0.1}, w, kQuadratic, kBurgers, kShock);
  CHECK(r.x_shift == 0.01);
  CHECK(r.H <= r.rel_ent_total);
  CHECK(r.l2sq == doctest::Approx(r.rel_ent_total));  // quadratic entropy
  CHECK(r.pos_deriv_norm >= 0.0);
  CHECK(r.drift_dev2 == doctest::Approx(1e-4));
}
