#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "holo/holonomy.hpp"
#include "holo/noise.hpp"
#include "holo/paths.hpp"
#include "holo/propagator.hpp"

namespace holo {

// ---------------------------------------------------------------------------
// Power-law fits

struct PowerLawFit {
  double exponent = 0.0;
  double intercept = 0.0;  // log(prefactor)
  double residual = 0.0;   // RMS in log space
  double exponent_stderr = 0.0;

  double predict(double x) const { return std::exp(intercept) * std::pow(x, exponent); }
};

/// Least squares of log y against log x.
inline PowerLawFit fit_power_law(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw std::invalid_argument("fit_power_law: xs and ys differ in length");
  if (xs.size() < 3) throw std::invalid_argument("fit_power_law: need at least 3 points");
  const auto n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0)) throw std::invalid_argument("fit_power_law: points must be strictly positive");
    mx += std::log(xs[i]);
    my += std::log(ys[i]);
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = std::log(xs[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(ys[i]) - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_power_law: xs must not all be equal");
  PowerLawFit fit;
  fit.exponent = sxy / sxx;
  fit.intercept = my - fit.exponent * mx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = std::log(ys[i]) - (fit.intercept + fit.exponent * std::log(xs[i]));
    ssr += e * e;
  }
  fit.residual = std::sqrt(ssr / n);
  fit.exponent_stderr = std::sqrt(ssr / (n - 2.0) / sxx);
  return fit;
}

/// Log-spaced grid from lo to hi inclusive with the given density.
inline std::vector<double> log_spaced(double lo, double hi, int per_decade) {
  if (!(lo > 0.0) || !(hi > lo) || per_decade < 1) throw std::invalid_argument("log_spaced: need 0 < lo < hi");
  const double decades = std::log10(hi / lo);
  const int intervals = std::max(1, static_cast<int>(std::lround(decades * per_decade)));
  std::vector<double> out;
  for (int i = 0; i <= intervals; ++i) out.push_back(lo * std::pow(10.0, decades * i / intervals));
  out.back() = hi;
  return out;
}

// ---------------------------------------------------------------------------
// Deterministic parallel map

/// Runs body(i) for i in [0, n) on up to `threads` workers (0 = hardware concurrency).
/// Each index writes only its own slot, so results never depend on scheduling.
template <class Body>
void parallel_for(std::size_t n, unsigned threads, Body&& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n && !failed; i = next++) {
        try {
          body(i);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

// ---------------------------------------------------------------------------
// Monte Carlo over noise realizations

enum class McMode { first_order, full_propagation };

inline std::string_view to_string(McMode m) { return m == McMode::first_order ? "first_order" : "full_propagation"; }

inline McMode mc_mode_from_string(std::string_view s) {
  if (s == "first_order") return McMode::first_order;
  if (s == "full_propagation") return McMode::full_propagation;
  throw std::invalid_argument("unknown mode '" + std::string(s) + "' (expected first_order or full_propagation)");
}

struct McOptions {
  unsigned threads = 0;
  int steps_per_unit_time = 20;  // full_propagation only
};

struct McResult {
  std::size_t n_realizations = 0;
  std::size_t excluded = 0;  // leakage > 0.1
  double delta_mean = 0.0;
  double delta_std = 0.0;
  double std_error = 0.0;  // delta_std / sqrt(2 n)
  double analytic_delta = std::numeric_limits<double>::quiet_NaN();
  double max_leakage = 0.0;
  McMode mode = McMode::first_order;
  std::vector<double> deltas;  // per realization, in index order
  std::vector<double> leakages;
};

/// Grid shared by noise sampling and the propagator. Both modes use the same grid, so the
/// realization with a given index is identical in first-order and full runs.
inline TimeGrid mc_grid(const ControlPath& path, const NoiseSpec& spec, double epsilon, const McOptions& opts) {
  const double T = 1.0 / epsilon;
  double dt = std::min(1.0 / opts.steps_per_unit_time, 0.1 / path.max_r());
  if (!spec.silent()) dt = std::min(dt, spec.tau_min() / 10.0);
  return TimeGrid::with_max_step(T, dt);
}

inline McResult mc_delta(const ControlPath& path, const NoiseSpec& spec, double epsilon, std::size_t n, McMode mode,
                         const McOptions& opts = {}) {
  spec.validate();
  if (!(epsilon > 0.0)) throw std::invalid_argument("mc_delta: epsilon must be > 0");
  if (n < 2) throw std::invalid_argument("mc_delta: need at least 2 realizations");
  if (spec.pinning == Pinning::none && !spec.silent()) {
    throw std::invalid_argument("mc_delta: noise must be pinned so the perturbed loop stays closed");
  }
  const double T = 1.0 / epsilon;
  const TimeGrid grid = mc_grid(path, spec, epsilon, opts);
  const double omega = solid_angle(path).omega_canonical;
  const auto kernel = sampled_kernel(path, grid);

  std::array<bool, 3> active{};
  for (int a = 0; a < 3; ++a) {
    const bool kernel_nonzero = std::any_of(kernel[a].begin(), kernel[a].end(), [](double v) { return v != 0.0; });
    active[a] = spec.sigma[a] > 0.0 && (mode == McMode::full_propagation || kernel_nonzero);
  }

  McResult res;
  res.mode = mode;
  res.deltas.assign(n, 0.0);
  res.leakages.assign(n, 0.0);

  parallel_for(n, opts.threads, [&](std::size_t i) {
    NoiseRealization rz{grid, {}, spec, i};
    for (int a = 0; a < 3; ++a) {
      rz.dx[a] = active[a] ? sample_axis(spec, grid, i, a) : std::vector<double>(grid.points(), 0.0);
    }
    if (mode == McMode::first_order) {
      res.deltas[i] = delta_omega_from_kernel(kernel, rz.dx, grid.intervals);
    } else {
      const ControlPath noisy = perturb(path, rz);
      const Operator4 u = detail::propagate_lab(noisy, T, T, grid.intervals);
      const ExtractedGate g = extract_logical_gate(u, path);
      res.deltas[i] = reduce_angle(g.angle_estimate - omega);
      res.leakages[i] = g.leakage;
    }
  });

  // Welford in index order: independent of scheduling, and exact for identical deltas
  double mean = 0.0, m2 = 0.0;
  std::size_t kept = 0;
  for (std::size_t i = 0; i < n; ++i) {
    res.max_leakage = std::max(res.max_leakage, res.leakages[i]);
    if (res.leakages[i] > 0.1) {
      ++res.excluded;
      continue;
    }
    ++kept;
    const double d = res.deltas[i] - mean;
    mean += d / static_cast<double>(kept);
    m2 += d * (res.deltas[i] - mean);
  }
  res.n_realizations = kept;
  if (kept < 2) throw std::runtime_error("mc_delta: fewer than 2 realizations kept adiabaticity");
  res.delta_mean = mean;
  res.delta_std = std::sqrt(std::max(0.0, m2) / static_cast<double>(kept - 1));
  res.std_error = res.delta_std / std::sqrt(2.0 * static_cast<double>(kept));
  if (path.has_constant_r()) res.analytic_delta = std::sqrt(delta_variance_analytic(path, spec, T));
  return res;
}

// ---------------------------------------------------------------------------
// Sweeps

struct ScalingOptions {
  double p = 0.5;
  double q = 0.5;
  double tau0 = 1.0;
  double sigma0 = 1.0;
  std::vector<double> epsilons;
  std::size_t n = 2000;
  McMode mode = McMode::first_order;
  Pinning pinning = Pinning::endpoint_ramp;
  std::uint64_t seed = 0;
  McOptions mc;
};

struct ScalingPoint {
  double epsilon = 0.0;
  double tau = 0.0;
  double sigma = 0.0;
  McResult mc;
};

struct ScalingResult {
  std::vector<ScalingPoint> points;
  PowerLawFit fit;
  double predicted_exponent = 0.0;
};

inline ScalingResult scaling_study(const ControlPath& path, const ScalingOptions& opts) {
  if (opts.epsilons.size() < 4) throw std::invalid_argument("scaling_study: need at least 4 epsilon values");
  const auto [lo, hi] = std::minmax_element(opts.epsilons.begin(), opts.epsilons.end());
  if (*hi / *lo < 10.0 * (1.0 - 1e-12)) throw std::invalid_argument("scaling_study: epsilon grid must span a decade");

  ScalingResult out;
  out.predicted_exponent = predicted_exponent(opts.p, opts.q);
  std::vector<double> xs, ys;
  for (std::size_t k = 0; k < opts.epsilons.size(); ++k) {
    const double eps = opts.epsilons[k];
    const auto [tau, sigma] = scaling_params(eps, opts.p, opts.q, opts.tau0, opts.sigma0);
    const NoiseSpec spec = NoiseSpec::isotropic(sigma, tau, opts.seed + k, opts.pinning);
    ScalingPoint pt{eps, tau, sigma, mc_delta(path, spec, eps, opts.n, opts.mode, opts.mc)};
    xs.push_back(eps);
    ys.push_back(pt.mc.delta_std);
    out.points.push_back(std::move(pt));
  }
  out.fit = fit_power_law(xs, ys);
  return out;
}

struct ConvergenceResult {
  std::vector<double> epsilons;
  std::vector<double> distances;  // ||M(eps) - G_ideal||_F
  std::vector<double> leakages;
  std::vector<double> angles;
  std::optional<PowerLawFit> fit;  // absent when the error vanishes identically
};

/// Noiseless adiabatic error of the extracted gate as eps -> 0.
inline ConvergenceResult convergence_study(const ControlPath& path, std::span<const double> epsilons,
                                           int steps_per_unit_time = 20, unsigned threads = 0) {
  if (epsilons.size() < 3) throw std::invalid_argument("convergence_study: need at least 3 epsilon values");
  const LogicalGate ideal = ideal_gate(solid_angle(path).omega_cos);
  ConvergenceResult out;
  out.epsilons.assign(epsilons.begin(), epsilons.end());
  out.distances.resize(epsilons.size());
  out.leakages.resize(epsilons.size());
  out.angles.resize(epsilons.size());
  parallel_for(epsilons.size(), threads, [&](std::size_t i) {
    const PropagationSettings settings{epsilons[i], steps_per_unit_time, FrameKind::lab};
    const ExtractedGate g = extract_logical_gate(evolve_lab(path, settings), path);
    out.distances[i] = frobenius_distance(g.block, ideal.as_complex());
    out.leakages[i] = g.leakage;
    out.angles[i] = g.angle_estimate;
  });
  if (*std::min_element(out.distances.begin(), out.distances.end()) > 1e-12) {
    out.fit = fit_power_law(out.epsilons, out.distances);
  }
  return out;
}

struct TimingResult {
  double delta_t = 0.0;
  std::vector<double> t0s;
  std::vector<double> errors;     // ||U_dT(T0)|_L - U_0(T0)|_L||_F
  std::vector<double> predicted;  // ||R^-1(T0) G(T0) - G||_F on L
  std::optional<PowerLawFit> fit;
};

/// Gate error from reading out at the nominal time T0 while the drive's true period is T0 + dT.
/// The error is measured on the logical restriction against the correctly timed run at the
/// same T0, which isolates the mismatch from the intrinsic adiabatic error.
inline TimingResult timing_study(const ControlPath& path, double delta_t, std::span<const double> t0s,
                                 int steps_per_unit_time = 20, unsigned threads = 0) {
  if (t0s.size() < 3) throw std::invalid_argument("timing_study: need at least 3 nominal times");
  const auto [lo, hi] = std::minmax_element(t0s.begin(), t0s.end());
  if (*hi / *lo < 4.0) throw std::invalid_argument("timing_study: nominal times must span at least a factor 4");
  TimingResult out;
  out.delta_t = delta_t;
  out.t0s.assign(t0s.begin(), t0s.end());
  out.errors.resize(t0s.size());
  out.predicted.resize(t0s.size());
  parallel_for(t0s.size(), threads, [&](std::size_t i) {
    const double t0 = t0s[i];
    const PropagationSettings settings{1.0 / t0, steps_per_unit_time, FrameKind::lab};
    const auto late = logical_restriction(evolve_to_nominal(path, settings, delta_t), path);
    const auto exact = logical_restriction(evolve_lab(path, settings), path);
    out.errors[i] = restriction_distance(late, exact);
    out.predicted[i] = nominal_time_prediction(path, t0 / (t0 + delta_t)).distance;
  });
  if (*std::min_element(out.errors.begin(), out.errors.end()) > 1e-12) {
    out.fit = fit_power_law(out.t0s, out.errors);
  }
  return out;
}

}  // namespace holo
