#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "holo/algebra.hpp"
#include "holo/noise.hpp"
#include "holo/paths.hpp"
#include "holo/propagator.hpp"
#include "holo/quadrature.hpp"
#include "holo/tripod.hpp"

namespace holo {

/// Reduces an angle to (-pi, pi]; values within rounding of -pi map to +pi.
inline double reduce_angle(double a) {
  double r = std::remainder(a, kTwoPi);
  if (r <= -kPi + 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(a))) r += kTwoPi;
  return r;
}

/// Rotation of the logical plane by omega: [[cos, sin], [-sin, cos]].
struct LogicalGate {
  double omega = 0.0;
  Matrix2 matrix = Matrix2::identity();

  Matrix2c as_complex() const {
    Matrix2c m;
    for (std::size_t i = 0; i < 2; ++i) {
      for (std::size_t j = 0; j < 2; ++j) m(i, j) = matrix(i, j);
    }
    return m;
  }
};

inline LogicalGate ideal_gate(double omega) {
  const double c = std::cos(omega), s = std::sin(omega);
  return {omega, Matrix2{{c, s}, {-s, c}}};
}

struct SolidAngleReport {
  double omega_cos = 0.0;  // integral of cos(theta) dphi
  double omega_A = 0.0;    // integral of (1 - cos(theta)) dphi
  int winding = 0;
  double omega_canonical = 0.0;
};

namespace detail {
inline void require_off_poles(const ControlPath& path) {
  constexpr std::size_t probes = 4096;
  auto check = [&](double s) {
    const double th = path.theta(s);
    if (!(th > 0.0 && th < kPi)) {
      throw std::invalid_argument("solid_angle: path touches a pole at s = " + std::to_string(s) +
                                  "; use a pole-regularized representative");
    }
  };
  for (std::size_t i = 0; i <= probes; ++i) check(static_cast<double>(i) / static_cast<double>(probes));
  for (double b : path.breakpoints()) check(b);
}
}  // namespace detail

inline SolidAngleReport solid_angle(const ControlPath& path) {
  detail::require_off_poles(path);
  SolidAngleReport out;
  out.omega_cos = integrate([&](double s) { return std::cos(path.theta(s)) * path.dphi(s); }, 0.0, 1.0,
                            path.breakpoints());
  out.omega_A = integrate([&](double s) { return (1.0 - std::cos(path.theta(s))) * path.dphi(s); }, 0.0, 1.0,
                          path.breakpoints());
  out.winding = path.winding();
  out.omega_canonical = reduce_angle(out.omega_cos);
  return out;
}

/// Effective dark-plane generator i phi' cos(theta) J.x_hat(0), per unit normalized time.
inline Operator4 connection(const ControlPath& path, double s) {
  const double coeff = path.dphi(s) * std::cos(path.theta(s));
  return Complex(0.0, coeff) * j_dot(path.direction(0.0));
}

/// Solves i dG/ds = A(s) G; the A(s) commute, so G = exp(-i int A) = exp(Omega J.x_hat(0)).
inline LogicalGate gate_from_connection(const ControlPath& path) {
  const Operator4 unit = j_dot(path.direction(0.0));
  // A(s) = i c(s) J.n; recover c(s) from the operator so the gate follows the connection itself
  const auto basis = logical_basis(path);
  const Complex jn = dot(basis[0], unit * basis[1]);
  const double omega = integrate(
      [&](double s) { return (dot(basis[0], connection(path, s) * basis[1]) / (Complex(0.0, 1.0) * jn)).real(); },
      0.0, 1.0, path.breakpoints());
  return ideal_gate(omega);
}

/// exp(omega J.x_hat(0)) on C^4: rotates the logical plane, fixes i0 and x_hat(0).
inline Operator4 holonomy_operator(const ControlPath& path, double omega) {
  return embed_block(exp_j_block(path.direction(0.0), omega));
}

/// Predicted logical restriction R^-1(s*) G(s*) of a drive read out at fraction s* of its
/// period, and its distance from the full-period gate G(1).
struct NominalTimePrediction {
  std::array<CVector4, 2> restriction;
  double distance = 0.0;
};

inline NominalTimePrediction nominal_time_prediction(const ControlPath& path, double fraction) {
  const double partial = integrate([&](double s) { return std::cos(path.theta(s)) * path.dphi(s); }, 0.0, fraction);
  const double full = solid_angle(path).omega_cos;
  const Operator4 r_inv = r_rotation(path, fraction).adjoint();
  const Operator4 predicted = r_inv * holonomy_operator(path, partial);
  const Operator4 ideal = holonomy_operator(path, full);
  const auto basis = logical_basis(path);
  NominalTimePrediction out{{predicted * basis[0], predicted * basis[1]}, 0.0};
  out.distance = restriction_distance(out.restriction, {ideal * basis[0], ideal * basis[1]});
  return out;
}

/// Kernel k(s) = (x_hat x d x_hat/ds) / r, so that dOmega = int k . dx ds.
inline Vec3 first_order_kernel(const ControlPath& path, double s) {
  return (1.0 / path.r(s)) * cross(path.direction(s), path.direction_rate(s));
}

/// First-order change of Omega for a smooth perturbation dx(s) in normalized time.
inline double delta_omega_first_order(const ControlPath& path, const std::function<Vec3(double)>& dx) {
  return integrate([&](double s) { return dot(first_order_kernel(path, s), dx(s)); }, 0.0, 1.0,
                   path.breakpoints(), 1e-12);
}

/// Kernel sampled at the realization grid nodes, one array per axis.
inline std::array<std::vector<double>, 3> sampled_kernel(const ControlPath& path, const TimeGrid& grid) {
  std::array<std::vector<double>, 3> k;
  for (auto& axis : k) axis.resize(grid.points());
  for (std::size_t i = 0; i < grid.points(); ++i) {
    const Vec3 v = first_order_kernel(path, grid.time(i) / grid.t_end);
    for (int a = 0; a < 3; ++a) k[a][i] = v[a];
  }
  return k;
}

/// Trapezoid sum of kernel . dx over the grid, in normalized time.
inline double delta_omega_from_kernel(const std::array<std::vector<double>, 3>& kernel,
                                      const std::array<std::vector<double>, 3>& dx, std::size_t intervals) {
  double total = 0.0;
  for (int a = 0; a < 3; ++a) {
    const auto& k = kernel[a];
    const auto& x = dx[a];
    if (x.empty()) continue;
    double acc = 0.5 * (k.front() * x.front() + k.back() * x.back());
    for (std::size_t i = 1; i < intervals; ++i) acc += k[i] * x[i];
    total += acc;
  }
  return total / static_cast<double>(intervals);
}

/// First-order change of Omega for a sampled noise realization on [0, T].
inline double delta_omega_first_order(const ControlPath& path, const NoiseRealization& realization) {
  return delta_omega_from_kernel(sampled_kernel(path, realization.grid), realization.dx, realization.grid.intervals);
}

/// Delta^2 = sum_i tau_i sigma_i^2 int_0^T ([x_hat x d x_hat/dt]_i / r)^2 dt for constant r.
inline double delta_variance_analytic(const ControlPath& path, const NoiseSpec& spec, double period) {
  spec.validate();
  if (!path.has_constant_r()) {
    throw std::invalid_argument("delta_variance_analytic: requires constant r(s); the variance law is derived on the "
                                "unit sphere");
  }
  if (!(period > 0.0)) throw std::invalid_argument("delta_variance_analytic: period must be > 0");
  double total = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double weight = spec.tau[i] * spec.sigma[i] * spec.sigma[i];
    if (weight == 0.0) continue;
    const double integral = integrate(
        [&](double s) {
          const double k = first_order_kernel(path, s)[i];
          return k * k;
        },
        0.0, 1.0, path.breakpoints());
    // dt = T ds and d/dt = (1/T) d/ds
    total += weight * integral / period;
  }
  return total;
}

struct ThickBoundary {
  double area = 0.0;         // sigma * L
  double delta_sq = 0.0;     // corr_length * sigma * area
  double corr_length = 0.0;  // tau * L / T
};

inline ThickBoundary thick_boundary_area(const ControlPath& path, const NoiseSpec& spec, double period) {
  if (!spec.is_isotropic() || spec.sigma[0] != spec.sigma[1] || spec.sigma[1] != spec.sigma[2]) {
    throw std::invalid_argument("thick_boundary_area: needs identical noise on all axes");
  }
  const double sigma = spec.sigma[0];
  const double tau = spec.tau[0];
  const double length = arc_length(path);
  ThickBoundary out;
  out.area = sigma * length;
  out.corr_length = tau * length / period;
  out.delta_sq = out.corr_length * sigma * out.area;
  return out;
}

}  // namespace holo
