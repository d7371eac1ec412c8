#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>

#include "shocklim/model.hpp"
#include "shocklim/solver.hpp"

namespace shocklim {

/// Perturbation preset p added to the base profile: U0 = base + p.
struct InitConfig {
  std::string preset = "gaussian";  // shock | gaussian | sine_packet | random
  std::string base = "shock";       // shock (S0) | layer (S1(x/eps))
  double amplitude = 0.5;
  double width = 0.15;
  double center = -1.1;
  double wavenumber = 20.0;  // sine_packet only
  int modes = 8;             // random only
  std::uint64_t seed = 1;
};

/// Smooth perturbation p(x). The random preset draws its Fourier
/// coefficients from std::mt19937_64 seeded with `seed`, using raw 64-bit
/// outputs so the sequence does not depend on the standard library.
std::function<double(double)> make_perturbation(const InitConfig& init);

/// Interval outside which p vanishes to machine precision.
std::pair<double, double> perturbation_support(const InitConfig& init);

/// Cell averages of S0 + p (or S1(x/eps) + p). Throws Errc::config for an
/// unknown preset or base.
SimState build_initial_state(const InitConfig& init, const FluxModel& flux,
                             const ShockPair& shock, const Grid& grid, double epsilon);

}  // namespace shocklim
