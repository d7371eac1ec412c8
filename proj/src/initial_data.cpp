#include "shocklim/initial_data.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "shocklim/error.hpp"
#include "shocklim/profile.hpp"

namespace shocklim {

namespace {

double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::function<double(double)> random_packet(const InitConfig& init) {
  std::mt19937_64 rng(init.seed);
  std::vector<double> coef(static_cast<std::size_t>(std::max(init.modes, 1)));
  std::vector<double> phase(coef.size());
  for (std::size_t j = 0; j < coef.size(); ++j) {
    coef[j] = (2.0 * unit_uniform(rng) - 1.0) / static_cast<double>(j + 1);
    phase[j] = 2.0 * std::numbers::pi * unit_uniform(rng);
  }
  const double lo = init.center - init.width;
  const double span = 2.0 * init.width;
  auto raw = [coef, phase, lo, span](double x) {
    const double y = (x - lo) / span;
    if (y <= 0.0 || y >= 1.0) return 0.0;
    const double window = std::sin(std::numbers::pi * y);
    double s = 0.0;
    for (std::size_t j = 0; j < coef.size(); ++j) {
      s += coef[j] * std::sin(2.0 * std::numbers::pi * static_cast<double>(j + 1) * y + phase[j]);
    }
    return window * window * s;
  };
  double peak = 0.0;
  for (int k = 0; k <= 4000; ++k) peak = std::max(peak, std::abs(raw(lo + span * k / 4000.0)));
  const double scale = peak > 0.0 ? init.amplitude / peak : 0.0;
  return [raw, scale](double x) { return scale * raw(x); };
}

}  // namespace

std::function<double(double)> make_perturbation(const InitConfig& init) {
  const double a = init.amplitude;
  const double c = init.center;
  const double w = init.width;
  if (init.preset == "shock") return [](double) { return 0.0; };
  if (init.preset == "gaussian") {
    return [a, c, w](double x) {
      const double z = (x - c) / w;
      return a * std::exp(-0.5 * z * z);
    };
  }
  if (init.preset == "sine_packet") {
    const double k = init.wavenumber;
    return [a, c, w, k](double x) {
      const double z = (x - c) / w;
      return a * std::sin(k * (x - c)) * std::exp(-0.5 * z * z);
    };
  }
  if (init.preset == "random") return random_packet(init);
  throw Error(Errc::config, "unknown init preset '" + init.preset + "'");
}

std::pair<double, double> perturbation_support(const InitConfig& init) {
  if (init.preset == "shock") return {init.center, init.center};
  if (init.preset == "random") return {init.center - init.width, init.center + init.width};
  // exp(-z^2/2) < 1e-15 beyond |z| = 8.3.
  return {init.center - 8.5 * init.width, init.center + 8.5 * init.width};
}

SimState build_initial_state(const InitConfig& init, const FluxModel& flux,
                             const ShockPair& shock, const Grid& grid, double epsilon) {
  const auto p = make_perturbation(init);
  SimState s;
  s.grid = grid;
  s.epsilon = epsilon;
  s.bc_left = shock.c_left;
  s.bc_right = shock.c_right;
  if (init.base == "shock") {
    const std::array<double, 1> breaks{0.0};
    s.u = cell_averages(
        grid, [&](double x) { return (x < 0.0 ? shock.c_left : shock.c_right) + p(x); }, breaks);
  } else if (init.base == "layer") {
    const LayerProfile layer = solve_profile(flux, shock);
    s.u = layer_initial_data(layer, epsilon, grid).u;
    const std::vector<double> pert = cell_averages(grid, p);
    for (std::size_t i = 0; i < s.u.size(); ++i) s.u[i] += pert[i];
  } else {
    throw Error(Errc::config, "unknown init base '" + init.base + "'");
  }
  return s;
}

}  // namespace shocklim
