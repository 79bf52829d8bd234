#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string_view>

#include "holo/algebra.hpp"
#include "holo/paths.hpp"
#include "holo/tripod.hpp"

namespace holo {

enum class FrameKind { lab, moving };

inline std::string_view to_string(FrameKind f) { return f == FrameKind::lab ? "lab" : "moving"; }

inline FrameKind frame_kind_from_string(std::string_view s) {
  if (s == "lab") return FrameKind::lab;
  if (s == "moving") return FrameKind::moving;
  throw std::invalid_argument("unknown frame '" + std::string(s) + "' (expected lab or moving)");
}

/// epsilon = 1/T in units where the field scale is 1.
struct PropagationSettings {
  double epsilon = 0.05;
  int steps_per_unit_time = 20;
  FrameKind frame = FrameKind::lab;

  double period() const { return 1.0 / epsilon; }

  void validate() const {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw std::invalid_argument("PropagationSettings: epsilon must be > 0");
    if (steps_per_unit_time < 1) throw std::invalid_argument("PropagationSettings: steps_per_unit_time must be >= 1");
  }

  friend bool operator==(const PropagationSettings&, const PropagationSettings&) = default;
};

/// Step count over `duration` with dt <= min(1/steps_per_unit_time, 0.1/max r, tau_min/10).
inline std::size_t required_steps(const ControlPath& path, const PropagationSettings& settings, double duration,
                                  double tau_min = 0.0) {
  double dt = 1.0 / settings.steps_per_unit_time;
  dt = std::min(dt, 0.1 / path.max_r());
  if (tau_min > 0.0) dt = std::min(dt, tau_min / 10.0);
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(duration / dt - 1e-9)));
}

namespace detail {

// Midpoint-exponential composition of exp(-i H(x(t/T)) dt) over [0, t_stop].
inline Operator4 propagate_lab(const ControlPath& path, double period, double t_stop, std::size_t steps) {
  const double dt = t_stop / static_cast<double>(steps);
  Operator4 u = Operator4::identity();
  for (std::size_t k = 0; k < steps; ++k) {
    const double s = (static_cast<double>(k) + 0.5) * dt / period;
    u = step_unitary(path.position(s), dt) * u;
  }
  return u;
}

}  // namespace detail

/// U(T) in the laboratory frame.
inline Operator4 evolve_lab(const ControlPath& path, const PropagationSettings& settings, double tau_min = 0.0) {
  settings.validate();
  const double T = settings.period();
  return detail::propagate_lab(path, T, T, required_steps(path, settings, T, tau_min));
}

/// V(T) = R(T) U(T) integrated directly in the moving frame,
/// i dV/dt = (i dR/dt R^-1) V + alpha(t) H(x(0)) V, by Strang splitting:
/// the rotation part is exponentiated exactly (Rodrigues), the static part spectrally.
inline Operator4 evolve_moving(const ControlPath& path, const PropagationSettings& settings, double tau_min = 0.0) {
  settings.validate();
  const double T = settings.period();
  const std::size_t steps = required_steps(path, settings, T, tau_min);
  const double dt = T / static_cast<double>(steps);
  const Vec3 x0 = path.position(0.0);
  const double r0 = path.r(0.0);

  Operator4 v = Operator4::identity();
  for (std::size_t k = 0; k < steps; ++k) {
    const double s = (static_cast<double>(k) + 0.5) * dt / T;
    const Operator4 half = step_unitary((path.r(s) / r0) * x0, 0.5 * dt);
    const Operator4 rot = embed_block(exp_j_block(r_rotation_rate_vector(path, s), dt / T));
    v = half * (rot * (half * v));
  }
  return v;
}

/// Dark-plane block of a propagator in the {e_theta(0), e_phi(0)} basis.
struct ExtractedGate {
  Matrix2c block;
  double leakage = 0.0;
  double angle_estimate = 0.0;
  bool adiabaticity_lost = false;
};

inline std::array<CVector4, 2> logical_basis(const ControlPath& path) {
  const Frame f = frame(path.theta(0.0), path.phi(0.0));
  return {embed(f.etheta), embed(f.ephi)};
}

inline ExtractedGate extract_logical_gate(const Operator4& u, const ControlPath& path) {
  const auto basis = logical_basis(path);
  ExtractedGate g;
  for (std::size_t a = 0; a < 2; ++a) {
    for (std::size_t b = 0; b < 2; ++b) g.block(a, b) = dot(basis[a], u * basis[b]);
  }
  g.leakage = std::clamp(1.0 - 0.5 * (g.block.adjoint() * g.block).trace().real(), 0.0, 1.0);
  // nearest rotation [[c, s], [-s, c]] to Re(M)
  const double c = 0.5 * (g.block(0, 0).real() + g.block(1, 1).real());
  const double s = 0.5 * (g.block(0, 1).real() - g.block(1, 0).real());
  g.angle_estimate = std::atan2(s, c);
  g.adiabaticity_lost = g.leakage > 0.1;
  return g;
}

/// Columns U e_a(0): the propagator restricted to the logical plane (a 4 x 2 operator).
inline std::array<CVector4, 2> logical_restriction(const Operator4& u, const ControlPath& path) {
  const auto basis = logical_basis(path);
  return {u * basis[0], u * basis[1]};
}

inline double restriction_distance(const std::array<CVector4, 2>& a, const std::array<CVector4, 2>& b) {
  return std::hypot(norm(a[0] - b[0]), norm(a[1] - b[1]));
}

/// U(T0) for a drive whose true period is T = T0 + dT but which is read out at the
/// nominal time T0 = 1/epsilon.
inline Operator4 evolve_to_nominal(const ControlPath& path, const PropagationSettings& settings, double delta_t) {
  settings.validate();
  const double t0 = settings.period();
  if (!(std::abs(delta_t) < 0.5 * t0)) throw std::invalid_argument("evolve_to_nominal: |dT| must be < T0/2");
  const double T = t0 + delta_t;
  return detail::propagate_lab(path, T, t0, required_steps(path, settings, t0));
}

}  // namespace holo
