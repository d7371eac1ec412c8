#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace shocklim {

using ScalarFn = std::function<double(double)>;

enum class FluxKind { burgers, exponential, quartic, custom };

/// Strictly convex flux A together with A' and A''. Builtin kinds evaluate
/// through a switch so the solver's inner loop stays free of indirect calls.
class FluxModel {
 public:
  static FluxModel burgers();
  static FluxModel exponential();
  static FluxModel quartic();
  /// Throws Errc::config for unknown names.
  static FluxModel from_name(std::string_view name);
  /// `sonic` is the zero of A' if the caller knows it; otherwise it is
  /// located by bisection on [-1e3, 1e3].
  static FluxModel custom(std::string name, ScalarFn a, ScalarFn a1, ScalarFn a2,
                          std::optional<double> sonic = std::nullopt);

  double a(double u) const {
    switch (kind_) {
      case FluxKind::burgers: return 0.5 * u * u;
      case FluxKind::exponential: return std::exp(u);
      case FluxKind::quartic: {
        const double u2 = u * u;
        return 0.25 * u2 * u2 + 0.5 * u2;
      }
      case FluxKind::custom: break;
    }
    return a_(u);
  }
  double a1(double u) const {
    switch (kind_) {
      case FluxKind::burgers: return u;
      case FluxKind::exponential: return std::exp(u);
      case FluxKind::quartic: return u * u * u + u;
      case FluxKind::custom: break;
    }
    return a1_(u);
  }
  double a2(double u) const {
    switch (kind_) {
      case FluxKind::burgers: return 1.0;
      case FluxKind::exponential: return std::exp(u);
      case FluxKind::quartic: return 3.0 * u * u + 1.0;
      case FluxKind::custom: break;
    }
    return a2_(u);
  }

  /// Point where A' vanishes, if any (the minimiser of A).
  std::optional<double> sonic_point() const { return sonic_; }
  FluxKind kind() const { return kind_; }
  const std::string& name() const { return name_; }

  /// Samples A'' > 0 and the A/A' finite-difference consistency on
  /// [-bound_m, bound_m]; throws Errc::convexity_violation on failure.
  void verify(double bound_m, int samples = 257, double tol = 1e-6) const;

 private:
  FluxModel(FluxKind kind, std::string name) : kind_(kind), name_(std::move(name)) {}

  FluxKind kind_;
  std::string name_;
  ScalarFn a_, a1_, a2_;
  std::optional<double> sonic_;
};

enum class EntropyKind { quadratic, quartic, custom };

/// Strictly convex entropy eta with eta' and eta''.
class EntropyModel {
 public:
  static EntropyModel quadratic();
  static EntropyModel quartic();
  static EntropyModel from_name(std::string_view name);
  static EntropyModel custom(std::string name, ScalarFn eta, ScalarFn eta1, ScalarFn eta2);

  double eta(double u) const {
    switch (kind_) {
      case EntropyKind::quadratic: return u * u;
      case EntropyKind::quartic: {
        const double u2 = u * u;
        return u2 * u2 + u2;
      }
      case EntropyKind::custom: break;
    }
    return eta_(u);
  }
  double eta1(double u) const {
    switch (kind_) {
      case EntropyKind::quadratic: return 2.0 * u;
      case EntropyKind::quartic: return 4.0 * u * u * u + 2.0 * u;
      case EntropyKind::custom: break;
    }
    return eta1_(u);
  }
  double eta2(double u) const {
    switch (kind_) {
      case EntropyKind::quadratic: return 2.0;
      case EntropyKind::quartic: return 12.0 * u * u + 2.0;
      case EntropyKind::custom: break;
    }
    return eta2_(u);
  }

  EntropyKind kind() const { return kind_; }
  const std::string& name() const { return name_; }

  void verify(double bound_m, int samples = 257, double tol = 1e-6) const;

 private:
  EntropyModel(EntropyKind kind, std::string name) : kind_(kind), name_(std::move(name)) {}

  EntropyKind kind_;
  std::string name_;
  ScalarFn eta_, eta1_, eta2_;
};

/// Target shock: C_L > C_R joined at the Rankine-Hugoniot speed.
struct ShockPair {
  double c_left;
  double c_right;
  double sigma;

  double midpoint() const { return 0.5 * (c_left + c_right); }
  double jump() const { return c_left - c_right; }
};

/// Builds the pair with sigma from shock_speed; throws
/// Errc::non_admissible_shock unless c_left > c_right.
ShockPair make_shock(const FluxModel& flux, double c_left, double c_right);

/// Rankine-Hugoniot speed (A(c_l) - A(c_r)) / (c_l - c_r).
double shock_speed(const FluxModel& flux, double c_left, double c_right);

/// eta(x) - eta(y) - eta'(y)(x - y).
double relative_entropy(const EntropyModel& entropy, double x, double y);

/// G(u) with G' = eta' A' and G(0) = 0.
double entropy_flux(const EntropyModel& entropy, const FluxModel& flux, double u);

/// F(x, y) = G(x) - G(y) - eta'(y)(A(x) - A(y)).
double relative_flux(const EntropyModel& entropy, const FluxModel& flux, double x, double y);

/// f(x, y) = F(x, y) / eta(x|y), continued by A'(y) across the diagonal.
double normalized_flux(const EntropyModel& entropy, const FluxModel& flux, double x, double y);

/// Below this separation f is replaced by its Taylor expansion about y.
inline double singular_tolerance(double y) { return 1e-9 * (1.0 + std::abs(y)); }

/// Numerical certificate for the bounds constant on [-M, M]^2.
struct LambdaBox {
  double bound_m;
  double lambda;
};

/// The seven sampled quantities whose bounds define Lambda at one grid point.
struct LambdaSample {
  double dx_f;  // d/dx f
  double dy_f;  // d/dy f
  double ratio_lower;  // (x-y)^2 / (2 eta(x|y)), NaN on the diagonal
  double ratio_upper;  // 2 eta(x|y) / (x-y)^2, NaN on the diagonal
  double ratio_flux;   // |F(x,y)| / (x-y)^2, NaN on the diagonal
};

/// Evaluates the sample quantities at (x, y) with central-difference step h.
LambdaSample lambda_sample(const EntropyModel& entropy, const FluxModel& flux, double x, double y,
                           double h);

/// Smallest Lambda (to 1% by bisection) for which every bound holds on an
/// n_samples x n_samples grid of [-M, M]^2. Throws Errc::invalid_parameter
/// for M <= 0 or n_samples < 64 and Errc::convexity_violation when eta'' <= 0
/// or d/dx f < -tol somewhere on the grid.
LambdaBox lambda_estimate(const EntropyModel& entropy, const FluxModel& flux, double bound_m,
                          int n_samples = 256);

/// Counts sampled violations of the five bounds for a given Lambda.
long count_lambda_violations(const EntropyModel& entropy, const FluxModel& flux, double bound_m,
                             int n_samples, double lambda);

}  // namespace shocklim
