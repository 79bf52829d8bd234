#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "holo/algebra.hpp"
#include "holo/noise.hpp"
#include "holo/quadrature.hpp"

namespace holo {

/// A scalar function of normalized time s in [0, 1], with an optional analytic derivative.
struct Profile {
  std::function<double(double)> value;
  std::function<double(double)> derivative;

  static Profile constant(double c) {
    return {[c](double) { return c; }, [](double) { return 0.0; }};
  }

  double operator()(double s) const { return value(s); }

  double deriv(double s) const {
    if (derivative) return derivative(s);
    constexpr double h = 1e-5;
    if (s - h < 0.0) return (-3.0 * value(s) + 4.0 * value(s + h) - value(s + 2.0 * h)) / (2.0 * h);
    if (s + h > 1.0) return (3.0 * value(s) - 4.0 * value(s - h) + value(s - 2.0 * h)) / (2.0 * h);
    return (value(s + h) - value(s - h)) / (2.0 * h);
  }
};

/// c0 + c1 s + sum_k (a_k cos 2 pi k s + b_k sin 2 pi k s).
struct FourierSeries {
  double constant = 0.0;
  double linear = 0.0;
  std::vector<double> cos_coeffs;
  std::vector<double> sin_coeffs;

  /// Flat layout [c0, c1, a1, b1, a2, b2, ...] used by config files.
  static FourierSeries from_flat(const std::vector<double>& v) {
    if (v.empty()) throw std::invalid_argument("FourierSeries: empty coefficient list");
    FourierSeries f;
    f.constant = v[0];
    if (v.size() > 1) f.linear = v[1];
    for (std::size_t i = 2; i < v.size(); i += 2) {
      f.cos_coeffs.push_back(v[i]);
      f.sin_coeffs.push_back(i + 1 < v.size() ? v[i + 1] : 0.0);
    }
    return f;
  }

  std::vector<double> to_flat() const {
    std::vector<double> v{constant, linear};
    for (std::size_t k = 0; k < harmonics(); ++k) {
      v.push_back(a(k));
      v.push_back(b(k));
    }
    return v;
  }

  // Harmonics missing from the shorter coefficient list count as zero.
  std::size_t harmonics() const { return std::max(cos_coeffs.size(), sin_coeffs.size()); }
  double a(std::size_t k) const { return k < cos_coeffs.size() ? cos_coeffs[k] : 0.0; }
  double b(std::size_t k) const { return k < sin_coeffs.size() ? sin_coeffs[k] : 0.0; }

  double operator()(double s) const {
    double acc = constant + linear * s;
    for (std::size_t k = 0; k < harmonics(); ++k) {
      const double w = kTwoPi * static_cast<double>(k + 1);
      acc += a(k) * std::cos(w * s) + b(k) * std::sin(w * s);
    }
    return acc;
  }

  double deriv(double s) const {
    double acc = linear;
    for (std::size_t k = 0; k < harmonics(); ++k) {
      const double w = kTwoPi * static_cast<double>(k + 1);
      acc += w * (-a(k) * std::sin(w * s) + b(k) * std::cos(w * s));
    }
    return acc;
  }

  Profile profile() const {
    auto self = std::make_shared<const FourierSeries>(*this);
    return {[self](double s) { return (*self)(s); }, [self](double s) { return self->deriv(s); }};
  }
};

inline Vec3 unit_vector(double theta, double phi) {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

/// Driving curve x(s) = r(s) * unit(theta(s), phi(s)) over normalized time s in [0, 1].
/// phi is unwrapped; only the unit vector has to close, r may not.
class ControlPath {
 public:
  using Params = std::map<std::string, double>;
  using CartesianFn = std::function<Vec3(double)>;

  ControlPath(std::string family, Params params, Profile theta, Profile phi, Profile r,
              std::vector<double> breakpoints = {})
      : family_(std::move(family)),
        params_(std::move(params)),
        theta_(std::move(theta)),
        phi_(std::move(phi)),
        r_(std::move(r)),
        breakpoints_(std::move(breakpoints)) {
    validate();
  }

  const std::string& family() const { return family_; }
  const Params& params() const { return params_; }
  std::span<const double> breakpoints() const { return breakpoints_; }

  double theta(double s) const { return theta_(s); }
  double phi(double s) const { return phi_(s); }
  double r(double s) const { return r_(s); }
  double dtheta(double s) const { return theta_.deriv(s); }
  double dphi(double s) const { return phi_.deriv(s); }
  double dr(double s) const { return r_.deriv(s); }

  Vec3 direction(double s) const { return unit_vector(theta(s), phi(s)); }

  Vec3 position(double s) const {
    if (cartesian_) return cartesian_(s);
    return r(s) * direction(s);
  }

  /// d(unit vector)/ds = theta' e_theta + sin(theta) phi' e_phi.
  Vec3 direction_rate(double s) const {
    const double th = theta(s);
    const double ph = phi(s);
    const double dth = dtheta(s);
    const double dph = dphi(s) * std::sin(th);
    return {dth * std::cos(th) * std::cos(ph) - dph * std::sin(ph),
            dth * std::cos(th) * std::sin(ph) + dph * std::cos(ph), -dth * std::sin(th)};
  }

  /// dx/ds
  Vec3 velocity(double s) const { return dr(s) * direction(s) + r(s) * direction_rate(s); }

  int winding() const { return static_cast<int>(std::lround((phi(1.0) - phi(0.0)) / kTwoPi)); }

  double min_r(std::size_t probes = 1024) const {
    double m = r(0.0);
    for (std::size_t i = 1; i <= probes; ++i) m = std::min(m, r(static_cast<double>(i) / static_cast<double>(probes)));
    return m;
  }

  double max_r(std::size_t probes = 1024) const {
    double m = r(0.0);
    for (std::size_t i = 1; i <= probes; ++i) m = std::max(m, r(static_cast<double>(i) / static_cast<double>(probes)));
    return m;
  }

  /// r(s) constant to within rel_tol on a probe grid.
  bool has_constant_r(double rel_tol = 1e-12) const {
    return max_r() - min_r() <= rel_tol * max_r();
  }

  /// Fast Cartesian evaluator for paths whose profiles are derived from x(s).
  void set_cartesian(CartesianFn f) { cartesian_ = std::move(f); }

 private:
  void validate() const {
    constexpr std::size_t probes = 1024;
    for (std::size_t i = 0; i <= probes; ++i) {
      const double s = static_cast<double>(i) / static_cast<double>(probes);
      const double rv = r(s);
      if (!(rv > 0.0) || !std::isfinite(rv)) {
        throw std::invalid_argument("ControlPath(" + family_ + "): r(s) must be > 0, got " + std::to_string(rv) +
                                    " at s = " + std::to_string(s));
      }
      const double th = theta(s);
      if (!(th >= 0.0 && th <= kPi)) {
        throw std::invalid_argument("ControlPath(" + family_ + "): theta(s) must lie in [0, pi]");
      }
    }
    if (norm(direction(1.0) - direction(0.0)) > 1e-10) {
      throw std::invalid_argument("ControlPath(" + family_ + "): unit vector is not periodic");
    }
  }

  std::string family_;
  Params params_;
  Profile theta_;
  Profile phi_;
  Profile r_;
  std::vector<double> breakpoints_;
  CartesianFn cartesian_;
};

/// Circle of constant latitude theta0, traversed once eastward.
inline ControlPath latitude_loop(double theta0, double r0 = 1.0) {
  if (!(theta0 > 0.0 && theta0 < kPi)) throw std::invalid_argument("latitude_loop: theta0 must lie in (0, pi)");
  if (!(r0 > 0.0)) throw std::invalid_argument("latitude_loop: r0 must be > 0");
  return ControlPath("latitude", {{"theta0", theta0}, {"r0", r0}}, Profile::constant(theta0),
                     Profile{[](double s) { return kTwoPi * s; }, [](double) { return kTwoPi; }},
                     Profile::constant(r0));
}

/// Fixed control vector; traverses no geometry.
inline ControlPath constant_path(double theta, double phi, double r = 1.0) {
  return ControlPath("constant", {{"theta", theta}, {"phi", phi}, {"r", r}}, Profile::constant(theta),
                     Profile::constant(phi), Profile::constant(r));
}

namespace detail {
// Eased progress on [0, 1] with zero first and second derivative at both ends.
inline double ease(double u) { return u - std::sin(kTwoPi * u) / kTwoPi; }
inline double ease_rate(double u) { return 1.0 - std::cos(kTwoPi * u); }
}  // namespace detail

/// Tripod-style loop anchored near the north pole: down the phi = 0 meridian,
/// along the equator to phi = dphi, back up, and round the polar cap at theta = delta.
inline ControlPath lune_path(double dphi, double delta = 1e-3, double r0 = 1.0) {
  if (!(dphi > 0.0 && dphi < kTwoPi)) throw std::invalid_argument("lune_path: dphi must lie in (0, 2 pi)");
  if (!(delta > 0.0 && delta < kPi / 2.0)) throw std::invalid_argument("lune_path: delta must lie in (0, pi/2)");
  if (!(r0 > 0.0)) throw std::invalid_argument("lune_path: r0 must be > 0");

  const double span = kPi / 2.0 - delta;
  auto segment = [](double s) {
    const double x = std::clamp(s, 0.0, 1.0) * 4.0;
    const int k = std::min(3, static_cast<int>(x));
    return std::pair<int, double>{k, x - k};
  };
  Profile theta{[=](double s) {
                  auto [k, u] = segment(s);
                  switch (k) {
                    case 0: return delta + span * detail::ease(u);
                    case 1: return kPi / 2.0;
                    case 2: return kPi / 2.0 - span * detail::ease(u);
                    default: return delta;
                  }
                },
                [=](double s) {
                  auto [k, u] = segment(s);
                  switch (k) {
                    case 0: return 4.0 * span * detail::ease_rate(u);
                    case 2: return -4.0 * span * detail::ease_rate(u);
                    default: return 0.0;
                  }
                }};
  Profile phi{[=](double s) {
                auto [k, u] = segment(s);
                switch (k) {
                  case 0: return 0.0;
                  case 1: return dphi * detail::ease(u);
                  case 2: return dphi;
                  default: return dphi * (1.0 - detail::ease(u));
                }
              },
              [=](double s) {
                auto [k, u] = segment(s);
                switch (k) {
                  case 1: return 4.0 * dphi * detail::ease_rate(u);
                  case 3: return -4.0 * dphi * detail::ease_rate(u);
                  default: return 0.0;
                }
              }};
  return ControlPath("lune", {{"dphi", dphi}, {"delta", delta}, {"r0", r0}}, std::move(theta), std::move(phi),
                     Profile::constant(r0), {0.25, 0.5, 0.75});
}

/// Smooth test path from truncated Fourier series. theta must stay inside (0, pi);
/// phi may carry a 2 pi w linear term; r may drift (no periodicity required).
inline ControlPath fourier_path(const FourierSeries& theta, const FourierSeries& phi, const FourierSeries& r) {
  if (theta.linear != 0.0) throw std::invalid_argument("fourier_path: theta series must not have a linear term");
  const double w = phi.linear / kTwoPi;
  if (std::abs(w - std::round(w)) > 1e-12) {
    throw std::invalid_argument("fourier_path: phi linear term must be a multiple of 2 pi");
  }
  constexpr std::size_t probes = 4096;
  for (std::size_t i = 0; i <= probes; ++i) {
    const double s = static_cast<double>(i) / static_cast<double>(probes);
    const double th = theta(s);
    if (!(th > 0.0 && th < kPi)) {
      throw std::invalid_argument("fourier_path: theta(s) leaves (0, pi) at s = " + std::to_string(s));
    }
    if (!(r(s) > 0.0)) throw std::invalid_argument("fourier_path: r(s) must be > 0, fails at s = " + std::to_string(s));
  }
  ControlPath::Params params{{"theta_terms", static_cast<double>(theta.harmonics())},
                             {"phi_terms", static_cast<double>(phi.harmonics())},
                             {"r_terms", static_cast<double>(r.harmonics())}};
  return ControlPath("fourier", std::move(params), theta.profile(), phi.profile(), r.profile());
}

/// Same geometric curve traversed with a monotone time warp g, g(0) = 0, g(1) = 1.
inline ControlPath reparametrized(const ControlPath& path, Profile warp) {
  if (std::abs(warp(0.0)) > 1e-14 || std::abs(warp(1.0) - 1.0) > 1e-14) {
    throw std::invalid_argument("reparametrized: warp must fix both endpoints");
  }
  auto base = std::make_shared<const ControlPath>(path);
  auto g = std::make_shared<const Profile>(std::move(warp));
  auto chain = [base, g](double (ControlPath::*f)(double) const, double (ControlPath::*df)(double) const) {
    return Profile{[=](double s) { return ((*base).*f)((*g)(s)); },
                   [=](double s) { return ((*base).*df)((*g)(s)) * g->deriv(s); }};
  };
  auto params = path.params();
  return ControlPath(path.family() + "-warped", std::move(params), chain(&ControlPath::theta, &ControlPath::dtheta),
                     chain(&ControlPath::phi, &ControlPath::dphi), chain(&ControlPath::r, &ControlPath::dr));
}

/// Per-grid-point samples of a path.
struct PathSamples {
  std::vector<double> s;
  std::vector<Vec3> x;
  std::vector<Vec3> xdot;  // dx/ds
  std::vector<double> r;
  std::vector<double> theta;
  std::vector<double> phi;
  std::vector<double> phidot;
  std::vector<double> costheta;
};

inline PathSamples sample(const ControlPath& path, std::size_t n) {
  if (n < 4) throw std::invalid_argument("sample: need at least 4 intervals");
  PathSamples out;
  for (std::size_t i = 0; i <= n; ++i) {
    const double s = i == n ? 1.0 : static_cast<double>(i) / static_cast<double>(n);
    out.s.push_back(s);
    out.x.push_back(path.position(s));
    out.xdot.push_back(path.velocity(s));
    out.r.push_back(path.r(s));
    out.theta.push_back(path.theta(s));
    out.phi.push_back(path.phi(s));
    out.phidot.push_back(path.dphi(s));
    out.costheta.push_back(std::cos(out.theta.back()));
  }
  return out;
}

namespace detail {

struct Spherical {
  double r, theta, phi;
  double dr, dtheta, dphi;
};

// Spherical coordinates and their rates from a Cartesian point and velocity;
// phi is continued from the reference value phi_ref.
inline Spherical spherical_from_cartesian(const Vec3& p, const Vec3& v, double phi_ref) {
  const double rho2 = p[0] * p[0] + p[1] * p[1];
  const double rho = std::sqrt(rho2);
  const double r2 = rho2 + p[2] * p[2];
  const double r = std::sqrt(r2);
  Spherical out{};
  out.r = r;
  out.theta = std::atan2(rho, p[2]);
  out.phi = phi_ref + std::remainder(std::atan2(p[1], p[0]) - phi_ref, kTwoPi);
  out.dr = (p[0] * v[0] + p[1] * v[1] + p[2] * v[2]) / r;
  if (rho > 0.0) {
    const double drho = (p[0] * v[0] + p[1] * v[1]) / rho;
    out.dtheta = (p[2] * drho - rho * v[2]) / r2;
    out.dphi = (p[0] * v[1] - p[1] * v[0]) / rho2;
  }
  return out;
}

inline ControlPath perturbed_path(const ControlPath& path, std::function<Vec3(double)> dx,
                                  std::function<Vec3(double)> ddx, std::vector<double> breakpoints) {
  auto base = std::make_shared<const ControlPath>(path);
  auto eval = [base, dx, ddx](double s) {
    const Vec3 p = base->position(s) + dx(s);
    const Vec3 v = base->velocity(s) + ddx(s);
    return spherical_from_cartesian(p, v, base->phi(s));
  };
  auto params = path.params();
  ControlPath out(path.family() + "-perturbed", std::move(params),
                  Profile{[eval](double s) { return eval(s).theta; }, [eval](double s) { return eval(s).dtheta; }},
                  Profile{[eval](double s) { return eval(s).phi; }, [eval](double s) { return eval(s).dphi; }},
                  Profile{[eval](double s) { return eval(s).r; }, [eval](double s) { return eval(s).dr; }},
                  std::move(breakpoints));
  out.set_cartesian([base, dx](double s) { return base->position(s) + dx(s); });
  return out;
}

inline void check_origin_clearance(const ControlPath& path, const std::function<Vec3(double)>& dx,
                                   std::size_t probes) {
  const double floor = 0.1 * path.min_r();
  for (std::size_t i = 0; i <= probes; ++i) {
    const double s = static_cast<double>(i) / static_cast<double>(probes);
    if (norm(path.position(s) + dx(s)) < floor) {
      throw std::invalid_argument("perturb: perturbed curve comes within 0.1 min r of the origin at s = " +
                                  std::to_string(s));
    }
  }
}

}  // namespace detail

/// x'(s) = x(s) + dx(s) for a pinned noise realization on physical times [0, T].
inline ControlPath perturb(const ControlPath& path, const NoiseRealization& realization) {
  if (!realization.pinned()) throw std::invalid_argument("perturb: realization must be pinned (dx(0) = dx(T) = 0)");
  bool all_zero = true;
  for (const auto& axis : realization.dx) {
    all_zero = all_zero && std::all_of(axis.begin(), axis.end(), [](double v) { return v == 0.0; });
  }
  if (all_zero) return path;

  auto rz = std::make_shared<const NoiseRealization>(realization);
  const double T = rz->grid.t_end;
  std::function<Vec3(double)> dx = [rz, T](double s) { return rz->at_time(s * T); };
  std::function<Vec3(double)> ddx = [rz, T](double s) {
    const double dt = rz->grid.dt();
    const double u = std::clamp(s * T / dt, 0.0, static_cast<double>(rz->grid.intervals) - 1e-12);
    const auto i = static_cast<std::size_t>(u);
    return (T / dt) * (rz->at_node(i + 1) - rz->at_node(i));
  };
  detail::check_origin_clearance(path, dx, rz->grid.intervals);
  return detail::perturbed_path(path, std::move(dx), std::move(ddx), {});
}

/// x'(s) = x(s) + dx(s) for a smooth perturbation given in normalized time.
inline ControlPath perturb(const ControlPath& path, std::function<Vec3(double)> dx, std::function<Vec3(double)> ddx) {
  if (norm(dx(0.0)) != 0.0 || norm(dx(1.0)) != 0.0) {
    // endpoints may move only radially, otherwise the unit vector stops closing
    const Vec3 a = path.position(0.0) + dx(0.0);
    const Vec3 b = path.position(1.0) + dx(1.0);
    if (norm((1.0 / norm(a)) * a - (1.0 / norm(b)) * b) > 1e-10) {
      throw std::invalid_argument("perturb: perturbation breaks unit-vector periodicity");
    }
  }
  detail::check_origin_clearance(path, dx, 1024);
  auto bps = std::vector<double>(path.breakpoints().begin(), path.breakpoints().end());
  return detail::perturbed_path(path, std::move(dx), std::move(ddx), std::move(bps));
}

/// Length of the unit-sphere shadow, integral of |d x_hat / ds|.
inline double arc_length(const ControlPath& path) {
  return integrate(
      [&](double s) {
        const double dth = path.dtheta(s);
        const double dph = path.dphi(s) * std::sin(path.theta(s));
        return std::sqrt(dth * dth + dph * dph);
      },
      0.0, 1.0, path.breakpoints(), 1e-12);
}

}  // namespace holo
