#include "shocklim/quadrature.hpp"

#include <cmath>

#include "shocklim/error.hpp"

namespace shocklim {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::equal_states: return "equal-states";
    case Errc::quadrature_nonconvergence: return "quadrature-nonconvergence";
    case Errc::convexity_violation: return "convexity-violation";
    case Errc::non_admissible_shock: return "non-admissible-shock";
    case Errc::under_resolved_layer: return "under-resolved-layer";
    case Errc::instability: return "instability";
    case Errc::degenerate_state: return "degenerate-state";
    case Errc::out_of_domain: return "out-of-domain";
    case Errc::domain_too_small: return "domain-too-small";
    case Errc::invalid_parameter: return "invalid-parameter";
    case Errc::resolution_gate: return "resolution-gate";
    case Errc::boundary_contamination: return "boundary-contamination";
    case Errc::nonpositive_value: return "nonpositive-value";
    case Errc::config: return "config";
  }
  return "unknown";
}

namespace quad {
namespace {

double simpson_panel(double fa, double fm, double fb, double a, double b) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double refine(const std::function<double(double)>& f, double a, double b, double fa, double fm,
              double fb, double whole, double tol, int depth_left) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson_panel(fa, flm, fm, a, m);
  const double right = simpson_panel(fm, frm, fb, m, b);
  const double delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  if (depth_left <= 0) {
    throw Error(Errc::quadrature_nonconvergence,
                "adaptive Simpson exceeded depth limit on [" + std::to_string(a) + ", " +
                    std::to_string(b) + "]");
  }
  return refine(f, a, m, fa, flm, fm, left, 0.5 * tol, depth_left - 1) +
         refine(f, m, b, fm, frm, fb, right, 0.5 * tol, depth_left - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int max_depth) {
  if (a == b) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  return refine(f, a, b, fa, fm, fb, simpson_panel(fa, fm, fb, a, b), tol, max_depth);
}

double composite_simpson(const std::function<double(double)>& f, double a, double b, int panels) {
  if (panels < 2) panels = 2;
  if (panels % 2 != 0) ++panels;
  const double h = (b - a) / panels;
  double s = f(a) + f(b);
  for (int k = 1; k < panels; ++k) s += (k % 2 == 1 ? 4.0 : 2.0) * f(a + k * h);
  return s * h / 3.0;
}

}  // namespace quad
}  // namespace shocklim
