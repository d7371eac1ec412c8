#include "shocklim/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "shocklim/error.hpp"
#include "shocklim/quadrature.hpp"

namespace shocklim {

// ---------------------------------------------------------------------------
// FluxModel

FluxModel FluxModel::burgers() {
  FluxModel m(FluxKind::burgers, "burgers");
  m.sonic_ = 0.0;
  return m;
}

FluxModel FluxModel::exponential() { return FluxModel(FluxKind::exponential, "exponential"); }

FluxModel FluxModel::quartic() {
  FluxModel m(FluxKind::quartic, "quartic");
  m.sonic_ = 0.0;
  return m;
}

FluxModel FluxModel::from_name(std::string_view name) {
  if (name == "burgers") return burgers();
  if (name == "exponential") return exponential();
  if (name == "quartic") return quartic();
  throw Error(Errc::config, "unknown flux '" + std::string(name) + "'");
}

FluxModel FluxModel::custom(std::string name, ScalarFn a, ScalarFn a1, ScalarFn a2,
                            std::optional<double> sonic) {
  FluxModel m(FluxKind::custom, std::move(name));
  m.a_ = std::move(a);
  m.a1_ = std::move(a1);
  m.a2_ = std::move(a2);
  if (sonic) {
    m.sonic_ = sonic;
  } else {
    // A' is increasing, so a sign change brackets the unique zero.
    double lo = -1e3, hi = 1e3;
    if (m.a1_(lo) < 0.0 && m.a1_(hi) > 0.0) {
      for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + std::abs(lo)); ++it) {
        const double mid = 0.5 * (lo + hi);
        (m.a1_(mid) < 0.0 ? lo : hi) = mid;
      }
      m.sonic_ = 0.5 * (lo + hi);
    }
  }
  return m;
}

namespace {

void check_derivative(const ScalarFn& g, const ScalarFn& dg, double u, double tol,
                      const std::string& what) {
  constexpr double h = 1e-5;
  const double fd = (g(u + h) - g(u - h)) / (2.0 * h);
  const double exact = dg(u);
  if (std::abs(fd - exact) > tol * (1.0 + std::abs(exact))) {
    throw Error(Errc::convexity_violation,
                what + " derivative inconsistent at u=" + std::to_string(u));
  }
}

}  // namespace

void FluxModel::verify(double bound_m, int samples, double tol) const {
  const ScalarFn fa = [this](double u) { return a(u); };
  const ScalarFn fa1 = [this](double u) { return a1(u); };
  const ScalarFn fa2 = [this](double u) { return a2(u); };
  for (int i = 0; i < samples; ++i) {
    const double u = -bound_m + 2.0 * bound_m * i / (samples - 1);
    if (!(a2(u) > 0.0)) {
      throw Error(Errc::convexity_violation,
                  "flux '" + name_ + "' not strictly convex at u=" + std::to_string(u));
    }
    check_derivative(fa, fa1, u, tol, "flux '" + name_ + "' first");
    check_derivative(fa1, fa2, u, tol, "flux '" + name_ + "' second");
  }
}

// ---------------------------------------------------------------------------
// EntropyModel

EntropyModel EntropyModel::quadratic() { return EntropyModel(EntropyKind::quadratic, "quadratic"); }
EntropyModel EntropyModel::quartic() { return EntropyModel(EntropyKind::quartic, "quartic"); }

EntropyModel EntropyModel::from_name(std::string_view name) {
  if (name == "quadratic") return quadratic();
  if (name == "quartic") return quartic();
  throw Error(Errc::config, "unknown entropy '" + std::string(name) + "'");
}

EntropyModel EntropyModel::custom(std::string name, ScalarFn eta, ScalarFn eta1, ScalarFn eta2) {
  EntropyModel m(EntropyKind::custom, std::move(name));
  m.eta_ = std::move(eta);
  m.eta1_ = std::move(eta1);
  m.eta2_ = std::move(eta2);
  return m;
}

void EntropyModel::verify(double bound_m, int samples, double tol) const {
  const ScalarFn e0 = [this](double u) { return eta(u); };
  const ScalarFn e1 = [this](double u) { return eta1(u); };
  const ScalarFn e2 = [this](double u) { return eta2(u); };
  for (int i = 0; i < samples; ++i) {
    const double u = -bound_m + 2.0 * bound_m * i / (samples - 1);
    if (!(eta2(u) > 0.0)) {
      throw Error(Errc::convexity_violation,
                  "entropy '" + name_ + "' not strictly convex at u=" + std::to_string(u));
    }
    check_derivative(e0, e1, u, tol, "entropy '" + name_ + "' first");
    check_derivative(e1, e2, u, tol, "entropy '" + name_ + "' second");
  }
}

// ---------------------------------------------------------------------------
// Shock algebra

double shock_speed(const FluxModel& flux, double c_left, double c_right) {
  if (std::abs(c_left - c_right) < 1e-14) {
    throw Error(Errc::equal_states, "shock speed undefined for equal states");
  }
  return (flux.a(c_left) - flux.a(c_right)) / (c_left - c_right);
}

ShockPair make_shock(const FluxModel& flux, double c_left, double c_right) {
  if (!(c_left > c_right)) {
    throw Error(Errc::non_admissible_shock, "require c_left > c_right");
  }
  return ShockPair{c_left, c_right, shock_speed(flux, c_left, c_right)};
}

double relative_entropy(const EntropyModel& entropy, double x, double y) {
  return entropy.eta(x) - entropy.eta(y) - entropy.eta1(y) * (x - y);
}

namespace {

std::optional<double> closed_form_entropy_flux(const EntropyModel& e, const FluxModel& a,
                                                double u) {
  const double u2 = u * u;
  const double u3 = u2 * u;
  const double u5 = u3 * u2;
  switch (e.kind()) {
    case EntropyKind::quadratic:
      switch (a.kind()) {
        case FluxKind::burgers: return 2.0 * u3 / 3.0;
        case FluxKind::exponential: return 2.0 * (u - 1.0) * std::exp(u) + 2.0;
        case FluxKind::quartic: return 0.4 * u5 + 2.0 * u3 / 3.0;
        case FluxKind::custom: return std::nullopt;
      }
      break;
    case EntropyKind::quartic:
      switch (a.kind()) {
        case FluxKind::burgers: return 0.8 * u5 + 2.0 * u3 / 3.0;
        case FluxKind::exponential:
          return std::exp(u) * (4.0 * u3 - 12.0 * u2 + 26.0 * u - 26.0) + 26.0;
        case FluxKind::quartic: return 4.0 * u5 * u2 / 7.0 + 1.2 * u5 + 2.0 * u3 / 3.0;
        case FluxKind::custom: return std::nullopt;
      }
      break;
    case EntropyKind::custom: break;
  }
  return std::nullopt;
}

}  // namespace

double entropy_flux(const EntropyModel& entropy, const FluxModel& flux, double u) {
  if (auto g = closed_form_entropy_flux(entropy, flux, u)) return *g;
  return quad::adaptive_simpson([&](double s) { return entropy.eta1(s) * flux.a1(s); }, 0.0, u,
                                1e-12, 30);
}

double relative_flux(const EntropyModel& entropy, const FluxModel& flux, double x, double y) {
  return entropy_flux(entropy, flux, x) - entropy_flux(entropy, flux, y) -
         entropy.eta1(y) * (flux.a(x) - flux.a(y));
}

namespace {

// With d = x - y and s = y + tau d:
//   eta(x|y) = d^2 int_0^1 (1 - tau) eta''(y + tau d) dtau
//   F(x, y)  = d^2 int_0^1 tau A'(y + tau d) K(tau) dtau,
//   K(tau)   = int_0^1 eta''(y + rho tau d) drho,
// so the ratio needs no difference of nearly equal numbers.
double normalized_flux_integral(const EntropyModel& e, const FluxModel& a, double x, double y) {
  const double d = x - y;
  const double num = quad::gauss8(
      [&](double tau) {
        const double k = quad::gauss8([&](double rho) { return e.eta2(y + rho * tau * d); }, 0.0,
                                      1.0);
        return tau * a.a1(y + tau * d) * k;
      },
      0.0, 1.0);
  const double den =
      quad::gauss8([&](double tau) { return (1.0 - tau) * e.eta2(y + tau * d); }, 0.0, 1.0);
  return num / den;
}

}  // namespace

double normalized_flux(const EntropyModel& entropy, const FluxModel& flux, double x, double y) {
  const double d = x - y;
  const double scale = 1.0 + std::abs(y);
  if (std::abs(d) <= singular_tolerance(y)) {
    // First-order Taylor continuation: f(y + d, y) = A'(y) + (2/3) A''(y) d + O(d^2).
    return flux.a1(y) + (2.0 / 3.0) * flux.a2(y) * d;
  }
  if (std::abs(d) <= 1e-2 * scale) return normalized_flux_integral(entropy, flux, x, y);
  return relative_flux(entropy, flux, x, y) / relative_entropy(entropy, x, y);
}

// ---------------------------------------------------------------------------
// Lambda certificate

LambdaSample lambda_sample(const EntropyModel& entropy, const FluxModel& flux, double x, double y,
                           double h) {
  LambdaSample s{};
  s.dx_f = (normalized_flux(entropy, flux, x + h, y) - normalized_flux(entropy, flux, x - h, y)) /
           (2.0 * h);
  s.dy_f = (normalized_flux(entropy, flux, x, y + h) - normalized_flux(entropy, flux, x, y - h)) /
           (2.0 * h);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (x == y) {
    s.ratio_lower = s.ratio_upper = s.ratio_flux = nan;
  } else {
    const double d2 = (x - y) * (x - y);
    const double rel = relative_entropy(entropy, x, y);
    s.ratio_lower = d2 / (2.0 * rel);
    s.ratio_upper = 2.0 * rel / d2;
    s.ratio_flux = std::abs(relative_flux(entropy, flux, x, y)) / d2;
  }
  return s;
}

namespace {

constexpr double kMonotoneTol = 1e-8;

struct LambdaSampleSet {
  double eta2_min = std::numeric_limits<double>::infinity();
  double eta2_max = -std::numeric_limits<double>::infinity();
  std::vector<LambdaSample> samples;
};

LambdaSampleSet collect_samples(const EntropyModel& entropy, const FluxModel& flux, double bound_m,
                                int n) {
  if (!(bound_m > 0.0)) throw Error(Errc::invalid_parameter, "bound_m must be positive");
  if (n < 64) throw Error(Errc::invalid_parameter, "n_samples must be at least 64");

  LambdaSampleSet set;
  std::vector<double> grid(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) grid[i] = -bound_m + 2.0 * bound_m * i / (n - 1);
  for (double u : grid) {
    const double e2 = entropy.eta2(u);
    if (!(e2 > 0.0)) {
      throw Error(Errc::convexity_violation, "eta'' <= 0 at u=" + std::to_string(u));
    }
    set.eta2_min = std::min(set.eta2_min, e2);
    set.eta2_max = std::max(set.eta2_max, e2);
  }

  const double h = bound_m / (10.0 * n);
  set.samples.reserve(grid.size() * grid.size());
  for (double x : grid) {
    for (double y : grid) {
      LambdaSample s = lambda_sample(entropy, flux, x, y, h);
      if (s.dx_f < -kMonotoneTol) {
        throw Error(Errc::convexity_violation, "d/dx f < 0 at (" + std::to_string(x) + ", " +
                                                   std::to_string(y) + ")");
      }
      if (!(s.dy_f > 0.0)) {
        throw Error(Errc::convexity_violation, "d/dy f <= 0 at (" + std::to_string(x) + ", " +
                                                   std::to_string(y) + ")");
      }
      set.samples.push_back(s);
    }
  }
  return set;
}

long violations(const LambdaSampleSet& set, double lambda) {
  long count = 0;
  if (1.0 / lambda > set.eta2_min) ++count;
  if (set.eta2_max > lambda) ++count;
  for (const LambdaSample& s : set.samples) {
    if (s.dx_f > lambda) ++count;
    if (s.dy_f < 1.0 / lambda) ++count;
    if (std::isnan(s.ratio_lower)) continue;
    if (s.ratio_lower > lambda) ++count;
    if (s.ratio_upper > lambda) ++count;
    if (s.ratio_flux > lambda) ++count;
  }
  return count;
}

}  // namespace

LambdaBox lambda_estimate(const EntropyModel& entropy, const FluxModel& flux, double bound_m,
                          int n_samples) {
  const LambdaSampleSet set = collect_samples(entropy, flux, bound_m, n_samples);

  // Every admissible Lambda is >= 1 since 1/Lambda <= eta'' <= Lambda.
  double lo = 1.0;
  if (violations(set, lo) == 0) return LambdaBox{bound_m, lo};
  double hi = 2.0;
  while (violations(set, hi) > 0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e12) throw Error(Errc::convexity_violation, "no finite Lambda certificate");
  }
  while (hi > 1.01 * lo) {
    const double mid = std::sqrt(lo * hi);
    (violations(set, mid) == 0 ? hi : lo) = mid;
  }
  return LambdaBox{bound_m, hi};
}

long count_lambda_violations(const EntropyModel& entropy, const FluxModel& flux, double bound_m,
                             int n_samples, double lambda) {
  return violations(collect_samples(entropy, flux, bound_m, n_samples), lambda);
}

}  // namespace shocklim
