#pragma once

#include <array>
#include <functional>

namespace shocklim::quad {

// Nodes/weights on [-1, 1].
inline constexpr std::array<double, 3> gauss3_nodes{-0.7745966692414834, 0.0, 0.7745966692414834};
inline constexpr std::array<double, 3> gauss3_weights{5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};

inline constexpr std::array<double, 8> gauss8_nodes{
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
    0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
inline constexpr std::array<double, 8> gauss8_weights{
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
    0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};

/// Three-point Gauss-Legendre rule on [a, b]; exact for quintics.
template <class F>
double gauss3(F&& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double s = 0.0;
  for (std::size_t k = 0; k < 3; ++k) s += gauss3_weights[k] * f(c + h * gauss3_nodes[k]);
  return h * s;
}

/// Eight-point Gauss-Legendre rule on [a, b]; exact for degree 15.
template <class F>
double gauss8(F&& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double s = 0.0;
  for (std::size_t k = 0; k < 8; ++k) s += gauss8_weights[k] * f(c + h * gauss8_nodes[k]);
  return h * s;
}

/// Adaptive Simpson with Richardson correction. Throws
/// Errc::quadrature_nonconvergence when a panel still misses `tol` at
/// `max_depth` bisections.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-12, int max_depth = 30);

/// Composite Simpson on `panels` (rounded up to even) equal panels.
double composite_simpson(const std::function<double(double)>& f, double a, double b,
                         int panels);

}  // namespace shocklim::quad
