// Solid angle, propagated gate and noise spread for a few loops.

#include <cstdio>
#include <vector>

#include "holo/experiments.hpp"
#include "holo/holonomy.hpp"
#include "holo/paths.hpp"
#include "holo/propagator.hpp"

int main() {
  using namespace holo;
  const double eps = 0.02;
  const std::vector<ControlPath> loops{
      latitude_loop(kPi / 3.0),
      lune_path(kPi / 2.0, 1e-2),
      fourier_path(FourierSeries{1.2, 0.0, {0.0}, {0.3}}, FourierSeries{0.0, kTwoPi, {0.2}, {}},
                   FourierSeries{1.0, 0.5, {}, {}}),
  };

  std::printf("%-10s %12s %12s %12s %10s\n", "family", "omega_cos", "angle", "distance", "leakage");
  for (const auto& path : loops) {
    const SolidAngleReport omega = solid_angle(path);
    const ExtractedGate g = extract_logical_gate(evolve_lab(path, {eps, 40, FrameKind::lab}), path);
    const double d = frobenius_distance(g.block, ideal_gate(omega.omega_cos).as_complex());
    std::printf("%-10s %12.6f %12.6f %12.3e %10.2e\n", path.family().c_str(), omega.omega_cos, g.angle_estimate, d,
                g.leakage);
  }

  // isotropic noise on the equator loop
  const ControlPath eq = latitude_loop(kPi / 2.0);
  const NoiseSpec spec = NoiseSpec::isotropic(0.02, 0.1, 1);
  const McResult mc = mc_delta(eq, spec, eps, 2000, McMode::first_order);
  std::printf("\nequator, sigma 0.02, tau 0.1, T %.0f\n", 1.0 / eps);
  std::printf("  Monte Carlo delta %.4e +- %.1e, analytic %.4e\n", mc.delta_std, mc.std_error, mc.analytic_delta);
  return 0;
}
