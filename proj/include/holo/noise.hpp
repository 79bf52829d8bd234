#pragma once

// Correlated Gaussian parametric noise on the driving amplitudes.
//
// Each axis is a stationary Gaussian process with autocovariance
// C(dt) = sigma^2 exp(-2|dt|/tau). Its integral over the line is tau*sigma^2,
// the white-noise intensity, so quantities driven by the low-frequency part of
// the noise see the same variance as the delta-correlated idealization.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <random>
#include <vector>

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/normal_distribution.hpp>

#include "holo/algebra.hpp"

namespace holo {

enum class Pinning { none, endpoint_ramp, exact_bridge };

inline std::string_view to_string(Pinning p) {
  switch (p) {
    case Pinning::none:
      return "none";
    case Pinning::endpoint_ramp:
      return "endpoint-ramp";
    case Pinning::exact_bridge:
      return "exact-bridge";
  }
  return "?";
}

inline Pinning pinning_from_string(std::string_view s) {
  if (s == "none") return Pinning::none;
  if (s == "endpoint-ramp") return Pinning::endpoint_ramp;
  if (s == "exact-bridge") return Pinning::exact_bridge;
  throw std::invalid_argument("unknown pinning mode '" + std::string(s) + "'");
}

struct NoiseSpec {
  std::array<double, 3> sigma{0.0, 0.0, 0.0};
  std::array<double, 3> tau{1.0, 1.0, 1.0};
  Pinning pinning = Pinning::endpoint_ramp;
  std::uint64_t seed = 0;

  static NoiseSpec isotropic(double sigma, double tau, std::uint64_t seed = 0,
                             Pinning pinning = Pinning::endpoint_ramp) {
    return NoiseSpec{{sigma, sigma, sigma}, {tau, tau, tau}, pinning, seed};
  }

  void validate() const {
    for (int i = 0; i < 3; ++i) {
      if (!(sigma[i] >= 0.0) || !std::isfinite(sigma[i])) throw std::invalid_argument("NoiseSpec: sigma must be >= 0");
      if (!(tau[i] > 0.0) || !std::isfinite(tau[i])) throw std::invalid_argument("NoiseSpec: tau must be > 0");
    }
  }

  /// All axes share the same white-noise intensity tau*sigma^2.
  bool is_isotropic(double rel_tol = 1e-12) const {
    const double ref = tau[0] * sigma[0] * sigma[0];
    for (int i = 1; i < 3; ++i) {
      const double v = tau[i] * sigma[i] * sigma[i];
      if (std::abs(v - ref) > rel_tol * std::max(std::abs(ref), std::abs(v))) return false;
    }
    return true;
  }

  /// Smallest correlation time among axes that actually carry noise.
  double tau_min() const {
    double m = 0.0;
    for (int i = 0; i < 3; ++i) {
      if (sigma[i] > 0.0 && (m == 0.0 || tau[i] < m)) m = tau[i];
    }
    return m == 0.0 ? *std::min_element(tau.begin(), tau.end()) : m;
  }

  bool silent() const { return sigma[0] == 0.0 && sigma[1] == 0.0 && sigma[2] == 0.0; }

  friend bool operator==(const NoiseSpec&, const NoiseSpec&) = default;
};

/// Uniform grid of physical times 0, dt, ..., t_end.
struct TimeGrid {
  double t_end = 1.0;
  std::size_t intervals = 1;

  /// Finest uniform grid on [0, t_end] with spacing <= max_dt.
  static TimeGrid with_max_step(double t_end, double max_dt) {
    if (!(t_end > 0.0) || !(max_dt > 0.0)) throw std::invalid_argument("TimeGrid: t_end and max_dt must be > 0");
    const auto n = static_cast<std::size_t>(std::ceil(t_end / max_dt - 1e-9));
    return TimeGrid{t_end, std::max<std::size_t>(n, 1)};
  }

  double dt() const { return t_end / static_cast<double>(intervals); }
  std::size_t points() const { return intervals + 1; }
  double time(std::size_t i) const { return i == intervals ? t_end : static_cast<double>(i) * dt(); }
};

struct NoiseRealization {
  TimeGrid grid;
  std::array<std::vector<double>, 3> dx;
  NoiseSpec spec;
  std::uint64_t index = 0;

  Vec3 at_node(std::size_t i) const { return {dx[0][i], dx[1][i], dx[2][i]}; }

  /// Piecewise-linear interpolation in physical time.
  Vec3 at_time(double t) const {
    const double u = std::clamp(t / grid.dt(), 0.0, static_cast<double>(grid.intervals));
    auto i = static_cast<std::size_t>(u);
    if (i >= grid.intervals) return at_node(grid.intervals);
    const double w = u - static_cast<double>(i);
    Vec3 out;
    for (int k = 0; k < 3; ++k) out[k] = (1.0 - w) * dx[k][i] + w * dx[k][i + 1];
    return out;
  }

  bool pinned() const {
    for (int k = 0; k < 3; ++k) {
      if (dx[k].front() != 0.0 || dx[k].back() != 0.0) return false;
    }
    return true;
  }
};

namespace detail {

using NoiseEngine = boost::random::mt19937_64;

/// Independent stream for (seed, realization, axis); no state is shared between streams.
inline NoiseEngine noise_stream(std::uint64_t seed, std::uint64_t index, int axis) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                    static_cast<std::uint32_t>(axis), 0x9e3779b9u};
  return NoiseEngine(seq);
}

inline double ramp_factor(double t, double t_end, double width) {
  const double edge = std::min(t, t_end - t);
  if (edge <= 0.0) return 0.0;
  if (edge >= width) return 1.0;
  return 0.5 * (1.0 - std::cos(kPi * edge / width));
}

}  // namespace detail

/// One axis of a realization. Axis streams are independent, so skipping an axis
/// never changes the others.
inline std::vector<double> sample_axis(const NoiseSpec& spec, const TimeGrid& grid, std::uint64_t index, int axis) {
  const std::size_t n = grid.points();
  std::vector<double> x(n, 0.0);
  const double sigma = spec.sigma.at(axis);
  if (sigma == 0.0) return x;

  const double tau = spec.tau[axis];
  const double dt = grid.dt();
  const double a = std::exp(-2.0 * dt / tau);
  const double kick = sigma * std::sqrt(1.0 - a * a);

  auto engine = detail::noise_stream(spec.seed, index, axis);
  boost::random::normal_distribution<double> normal;
  x[0] = sigma * normal(engine);
  for (std::size_t i = 1; i < n; ++i) x[i] = a * x[i - 1] + kick * normal(engine);

  switch (spec.pinning) {
    case Pinning::none:
      break;
    case Pinning::endpoint_ramp: {
      const double width = 5.0 * tau;
      for (std::size_t i = 0; i < n; ++i) x[i] *= detail::ramp_factor(grid.time(i), grid.t_end, width);
      break;
    }
    case Pinning::exact_bridge: {
      // Condition the AR(1) chain on x_0 = x_N = 0:
      // x_k -> x_k - [a^k, a^(N-k)] S^-1 [x_0, x_N],  S = [[1, a^N], [a^N, 1]].
      const std::size_t last = n - 1;
      const double aN = std::pow(a, static_cast<double>(last));
      const double det = 1.0 - aN * aN;
      const double x0 = x.front();
      const double xN = x.back();
      const double c0 = (x0 - aN * xN) / det;
      const double cN = (xN - aN * x0) / det;
      for (std::size_t k = 0; k < n; ++k) {
        x[k] -= std::pow(a, static_cast<double>(k)) * c0 + std::pow(a, static_cast<double>(last - k)) * cN;
      }
      break;
    }
  }
  if (spec.pinning != Pinning::none) {
    x.front() = 0.0;
    x.back() = 0.0;
  }
  return x;
}

inline void check_resolves(const NoiseSpec& spec, const TimeGrid& grid) {
  if (spec.silent()) return;
  if (grid.dt() > spec.tau_min() / 10.0 * (1.0 + 1e-9)) {
    throw std::invalid_argument("noise grid too coarse: dt = " + std::to_string(grid.dt()) +
                                " exceeds tau_min/10 = " + std::to_string(spec.tau_min() / 10.0));
  }
}

inline NoiseRealization sample_realization(const NoiseSpec& spec, const TimeGrid& grid, std::uint64_t index) {
  spec.validate();
  check_resolves(spec, grid);
  NoiseRealization r{grid, {}, spec, index};
  for (int k = 0; k < 3; ++k) r.dx[k] = sample_axis(spec, grid, index, k);
  return r;
}

struct CovarianceEstimate {
  double lag = 0.0;
  double value = 0.0;
  double std_error = 0.0;
};

/// Lag covariances of one axis, averaged over [t_begin, t_end - lag] of each
/// realization; the error bar is the spread across realizations.
inline std::vector<CovarianceEstimate> empirical_autocovariance(std::span<const NoiseRealization> realizations,
                                                                int axis, std::span<const double> lags,
                                                                double t_begin, double t_end) {
  if (realizations.size() < 2) throw std::invalid_argument("empirical_autocovariance: need >= 2 realizations");
  const TimeGrid& grid = realizations.front().grid;
  const double dt = grid.dt();
  const auto first = static_cast<std::size_t>(std::ceil(t_begin / dt));
  const auto last = static_cast<std::size_t>(std::floor(t_end / dt));

  std::vector<CovarianceEstimate> out;
  for (double lag : lags) {
    const auto k = static_cast<std::size_t>(std::llround(lag / dt));
    if (last < first + k + 1) throw std::invalid_argument("empirical_autocovariance: window shorter than lag");
    double sum = 0.0;
    double sum_sq = 0.0;
    for (const auto& r : realizations) {
      const auto& x = r.dx.at(axis);
      double acc = 0.0;
      for (std::size_t i = first; i + k <= last; ++i) acc += x[i] * x[i + k];
      const double est = acc / static_cast<double>(last - k - first + 1);
      sum += est;
      sum_sq += est * est;
    }
    const double m = static_cast<double>(realizations.size());
    const double mean = sum / m;
    const double var = std::max(0.0, (sum_sq - m * mean * mean) / (m - 1.0));
    out.push_back({static_cast<double>(k) * dt, mean, std::sqrt(var / m)});
  }
  return out;
}

/// Cross-covariance between two axes at zero lag, same windowing as above.
inline CovarianceEstimate empirical_cross_covariance(std::span<const NoiseRealization> realizations, int axis_a,
                                                     int axis_b, double t_begin, double t_end) {
  const double dt = realizations.front().grid.dt();
  const auto first = static_cast<std::size_t>(std::ceil(t_begin / dt));
  const auto last = static_cast<std::size_t>(std::floor(t_end / dt));
  double sum = 0.0;
  double sum_sq = 0.0;
  for (const auto& r : realizations) {
    double acc = 0.0;
    for (std::size_t i = first; i <= last; ++i) acc += r.dx.at(axis_a)[i] * r.dx.at(axis_b)[i];
    const double est = acc / static_cast<double>(last - first + 1);
    sum += est;
    sum_sq += est * est;
  }
  const double m = static_cast<double>(realizations.size());
  const double mean = sum / m;
  return {0.0, mean, std::sqrt(std::max(0.0, (sum_sq - m * mean * mean) / (m - 1.0)) / m)};
}

/// tau = tau0 eps^p, sigma = sigma0 eps^q.
struct ScaledNoise {
  double tau;
  double sigma;
};

inline ScaledNoise scaling_params(double epsilon, double p, double q, double tau0, double sigma0) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw std::invalid_argument("scaling_params: epsilon must lie in (0, 1]");
  if (!(p > 0.0) || !(q > 0.0)) throw std::invalid_argument("scaling_params: exponents p, q must be > 0");
  return {tau0 * std::pow(epsilon, p), sigma0 * std::pow(epsilon, q)};
}

/// Exponent r of Delta = O(eps^r) for tau ~ eps^p, sigma ~ eps^q.
inline double predicted_exponent(double p, double q) { return p / 2.0 + q + 0.5; }

}  // namespace holo
