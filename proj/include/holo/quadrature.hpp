#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace holo {

inline constexpr double kQuadratureTol = 1e-11;
inline constexpr double kQuadratureAbsTol = 1e-15;

namespace detail {

// Bisect until the Kronrod error estimate meets max(rel_tol * L1, abs_tol * width). The absolute
// floor stops the refinement when the integrand is zero up to rounding.
template <class F>
double gk_adaptive(F& f, double a, double b, double rel_tol, double abs_tol, int depth) {
  double err = 0.0, l1 = 0.0;
  const double val = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 0, 0.0, &err, &l1);
  if (depth == 0 || err <= std::max(rel_tol * l1, abs_tol * (b - a))) return val;
  const double m = 0.5 * (a + b);
  return gk_adaptive(f, a, m, rel_tol, abs_tol, depth - 1) + gk_adaptive(f, m, b, rel_tol, abs_tol, depth - 1);
}

}  // namespace detail

/// Adaptive Gauss-Kronrod integral of f over [a, b], split at interior breakpoints.
template <class F>
double integrate(F&& f, double a, double b, std::span<const double> breakpoints = {},
                 double rel_tol = kQuadratureTol, double abs_tol = kQuadratureAbsTol) {
  std::vector<double> knots{a};
  for (double x : breakpoints) {
    if (x > a && x < b) knots.push_back(x);
  }
  knots.push_back(b);
  std::sort(knots.begin(), knots.end());

  auto g = [&f](double x) { return static_cast<double>(f(x)); };
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) total += detail::gk_adaptive(g, knots[i], knots[i + 1], rel_tol, abs_tol, 20);
  if (!std::isfinite(total)) throw std::domain_error("integrate: non-finite result");
  return total;
}

/// Trapezoid rule over uniformly spaced samples.
inline double trapezoid(std::span<const double> ys, double h) {
  if (ys.size() < 2) return 0.0;
  double acc = 0.5 * (ys.front() + ys.back());
  for (std::size_t i = 1; i + 1 < ys.size(); ++i) acc += ys[i];
  return acc * h;
}

}  // namespace holo
