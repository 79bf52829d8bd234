#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

#include "holo/algebra.hpp"
#include "holo/paths.hpp"

namespace holo {

/// H(x) = sum_i x_i (|0><i| + |i><0|).
inline Operator4 hamiltonian(const Vec3& x) {
  Operator4 h;
  for (std::size_t i = 0; i < 3; ++i) {
    h(0, i + 1) = x[i];
    h(i + 1, 0) = x[i];
  }
  return h;
}

/// Moving frame adapted to the unit sphere at (theta, phi).
struct Frame {
  double theta = 0.0;
  double phi = 0.0;
  Vec3 e0{};  // stands in for the ground state i0, which lives outside R^3
  Vec3 er{};
  Vec3 etheta{};
  Vec3 ephi{};
};

inline Frame frame(double theta, double phi) {
  const double ct = std::cos(theta), st = std::sin(theta);
  const double cp = std::cos(phi), sp = std::sin(phi);
  return Frame{theta, phi, Vec3{}, Vec3{st * cp, st * sp, ct}, Vec3{ct * cp, ct * sp, -st}, Vec3{-sp, cp, 0.0}};
}

struct SpectralDecomp {
  double r = 0.0;
  CVector4 e_plus{};
  CVector4 e_minus{};
  std::array<CVector4, 2> dark_basis{};  // {e_theta, e_phi}
  Operator4 P_plus;
  Operator4 P_minus;
  Operator4 P_zero;
};

/// Eigen-decomposition of H(x): bright states (x_hat +- i0)/sqrt 2 at +-r, dark plane at 0.
inline SpectralDecomp spectral(const Vec3& x) {
  const double r = norm(x);
  if (!(r > 0.0)) throw std::invalid_argument("spectral: |x| = 0 has no preferred frame");
  const Vec3 n = (1.0 / r) * x;
  const double theta = std::atan2(std::hypot(n[0], n[1]), n[2]);
  const double phi = std::atan2(n[1], n[0]);
  const Frame f = frame(theta, phi);

  const double s = 1.0 / std::sqrt(2.0);
  SpectralDecomp out;
  out.r = r;
  const CVector4 nh = embed(n);
  const CVector4 i0 = basis_vector(0);
  out.e_plus = s * (nh + i0);
  out.e_minus = s * (nh - i0);
  out.dark_basis = {embed(f.etheta), embed(f.ephi)};
  out.P_plus = outer(out.e_plus, out.e_plus);
  out.P_minus = outer(out.e_minus, out.e_minus);
  out.P_zero = projector_from_vectors(out.dark_basis);
  return out;
}

struct Generators {
  Operator4 j1;
  Operator4 j2;
  Operator4 j3;

  const Operator4& operator[](std::size_t k) const {
    switch (k) {
      case 0: return j1;
      case 1: return j2;
      default: return j3;
    }
  }
};

/// J = a* x a with a_i = |0><i|: J_k has entries (J_k)_{ab} = eps_{kab} on the triplet.
inline Generators j_generators() {
  Generators g;
  g.j1(2, 3) = 1.0;
  g.j1(3, 2) = -1.0;
  g.j2(3, 1) = 1.0;
  g.j2(1, 3) = -1.0;
  g.j3(1, 2) = 1.0;
  g.j3(2, 1) = -1.0;
  return g;
}

/// J . n as a real 3x3 block; acts as v -> v x n.
inline Matrix3 j_dot_block(const Vec3& n) {
  return Matrix3{{0.0, n[2], -n[1]}, {-n[2], 0.0, n[0]}, {n[1], -n[0], 0.0}};
}

inline Operator4 j_dot(const Vec3& n) {
  Operator4 out = embed_block(j_dot_block(n));
  out(0, 0) = 0.0;
  return out;
}

/// exp(h J.n) in closed form (Rodrigues).
inline Matrix3 exp_j_block(const Vec3& n, double h) {
  const double w = norm(n);
  if (w == 0.0 || h == 0.0) return Matrix3::identity();
  const Matrix3 k = (1.0 / w) * j_dot_block(n);
  const double angle = h * w;
  return Matrix3::identity() + std::sin(angle) * k + (1.0 - std::cos(angle)) * (k * k);
}

/// Rows are (e_theta, e_phi, e_r), so D^-1 maps (i1, i2, i3) to the moving frame.
inline Matrix3 d_rotation_block(double theta, double phi) {
  const Frame f = frame(theta, phi);
  return Matrix3{{f.etheta[0], f.etheta[1], f.etheta[2]},
                 {f.ephi[0], f.ephi[1], f.ephi[2]},
                 {f.er[0], f.er[1], f.er[2]}};
}

inline Operator4 d_rotation(double theta, double phi) { return embed_block(d_rotation_block(theta, phi)); }

/// Vector w with (dD/ds) D^-1 = J . w, i.e. theta' J2 + phi' (cos theta J3 - sin theta J1).
inline Vec3 d_rotation_rate_vector(double theta, double dtheta, double dphi) {
  return {-dphi * std::sin(theta), dtheta, dphi * std::cos(theta)};
}

/// R(s) = D(0)^-1 D(s).
inline Operator4 r_rotation(const ControlPath& path, double s) {
  const Matrix3 d0 = d_rotation_block(path.theta(0.0), path.phi(0.0));
  const Matrix3 ds = d_rotation_block(path.theta(s), path.phi(s));
  return embed_block(d0.adjoint() * ds);
}

/// Vector w with (dR/ds) R^-1 = J . w.
inline Vec3 r_rotation_rate_vector(const ControlPath& path, double s) {
  const Vec3 w = d_rotation_rate_vector(path.theta(s), path.dtheta(s), path.dphi(s));
  const Frame f0 = frame(path.theta(0.0), path.phi(0.0));
  return w[0] * f0.etheta + w[1] * f0.ephi + w[2] * f0.er;
}

/// exp(-i H(x) dt) = P0 + e^{-i r dt} P+ + e^{i r dt} P-; identity for x = 0.
inline Operator4 step_unitary(const Vec3& x, double dt) {
  const double r = norm(x);
  if (r == 0.0) return Operator4::identity();
  const Vec3 n = (1.0 / r) * x;
  // P+ + P- = |0><0| + |n><n|,  P+ - P- = |0><n| + |n><0|
  const double c = std::cos(r * dt) - 1.0;
  const Complex is(0.0, -std::sin(r * dt));
  Operator4 u = Operator4::identity();
  u(0, 0) += c;
  for (std::size_t i = 0; i < 3; ++i) {
    u(0, i + 1) = is * n[i];
    u(i + 1, 0) = is * n[i];
    for (std::size_t j = 0; j < 3; ++j) u(i + 1, j + 1) += c * n[i] * n[j];
  }
  return u;
}

}  // namespace holo
