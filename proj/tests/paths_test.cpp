#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "holo/noise.hpp"
#include "holo/paths.hpp"

namespace holo {
namespace {

ControlPath wobbly_path() {
  return fourier_path(FourierSeries{kPi / 2.0, 0.0, {0.0}, {0.3}}, FourierSeries{0.0, kTwoPi, {}, {}},
                      FourierSeries{1.0, 0.5, {}, {}});
}

std::vector<ControlPath> all_families() {
  return {latitude_loop(kPi / 2.0),
          latitude_loop(kPi / 3.0, 2.0),
          lune_path(kPi / 2.0),
          lune_path(1.0, 1e-2, 0.5),
          constant_path(0.4, 1.0, 3.0),
          wobbly_path(),
          fourier_path(FourierSeries{1.0, 0.0, {0.2, -0.1}, {0.1, 0.3}}, FourierSeries{0.3, -2.0 * kTwoPi, {0.4}, {}},
                       FourierSeries{2.0, 0.0, {0.5}, {0.2}})};
}

TEST(Paths, LatitudeLoopExamples) {
  const ControlPath eq = latitude_loop(kPi / 2.0);
  for (double s : {0.0, 0.1, 0.37, 0.9}) {
    EXPECT_LT(norm(eq.position(s) - Vec3{std::cos(kTwoPi * s), std::sin(kTwoPi * s), 0.0}), 1e-15);
  }
  const ControlPath sixty = latitude_loop(kPi / 3.0);
  const ControlPath wide = latitude_loop(kPi / 4.0, 2.0);
  for (double s : {0.0, 0.2, 0.55, 1.0}) {
    EXPECT_NEAR(sixty.position(s)[2], 0.5, 1e-15);
    EXPECT_NEAR(norm(wide.position(s)), 2.0, 1e-15);
  }
  EXPECT_EQ(eq.winding(), 1);
  EXPECT_THROW(latitude_loop(0.0), std::invalid_argument);
  EXPECT_THROW(latitude_loop(kPi), std::invalid_argument);
  EXPECT_THROW(latitude_loop(1.0, 0.0), std::invalid_argument);
}

TEST(Paths, LuneConstruction) {
  const ControlPath lune = lune_path(kPi / 2.0, 1e-3);
  EXPECT_NEAR(lune.theta(0.0), 1e-3, 1e-15);
  EXPECT_NEAR(lune.theta(0.25), kPi / 2.0, 1e-15);
  EXPECT_NEAR(lune.phi(0.5), kPi / 2.0, 1e-15);
  EXPECT_NEAR(lune.theta(0.75), 1e-3, 1e-15);
  EXPECT_EQ(lune.winding(), 0);
  EXPECT_THROW(lune_path(kPi / 2.0, 0.0), std::invalid_argument);
  EXPECT_THROW(lune_path(kPi / 2.0, -1e-3), std::invalid_argument);
  EXPECT_THROW(lune_path(0.0), std::invalid_argument);
  EXPECT_THROW(lune_path(kTwoPi), std::invalid_argument);
}

TEST(Paths, UnitVectorPeriodicityOnAllFamilies) {
  for (const auto& path : all_families()) {
    EXPECT_LT(norm(path.direction(1.0) - path.direction(0.0)), 1e-10) << path.family();
  }
  for (double dphi : {0.1, 1.0, 3.0, 6.0}) {
    const ControlPath lune = lune_path(dphi);
    EXPECT_LT(norm(lune.direction(1.0) - lune.direction(0.0)), 1e-10);
  }
}

TEST(Paths, FourierExamples) {
  const ControlPath ok = fourier_path(FourierSeries{kPi / 2.0, 0.0, {0.0}, {0.3}}, FourierSeries{0.0, kTwoPi, {}, {}},
                                      FourierSeries{1.0, 0.0, {}, {}});
  EXPECT_NEAR(ok.theta(0.25), kPi / 2.0 + 0.3, 1e-14);
  const ControlPath drift = wobbly_path();
  EXPECT_NEAR(drift.r(1.0) - drift.r(0.0), 0.5, 1e-14);
  EXPECT_FALSE(drift.has_constant_r());
  EXPECT_THROW(fourier_path(FourierSeries{0.1, 0.0, {0.0}, {3.2}}, FourierSeries{0.0, kTwoPi, {}, {}},
                            FourierSeries{1.0, 0.0, {}, {}}),
               std::invalid_argument);
  EXPECT_THROW(fourier_path(FourierSeries{1.0, 0.0, {}, {}}, FourierSeries{0.0, kTwoPi, {}, {}},
                            FourierSeries{0.5, 0.0, {1.0}, {}}),
               std::invalid_argument);
  EXPECT_THROW(fourier_path(FourierSeries{1.0, 0.0, {}, {}}, FourierSeries{0.0, 3.0, {}, {}},
                            FourierSeries{1.0, 0.0, {}, {}}),
               std::invalid_argument);
}

TEST(Paths, FourierFlatRoundTrip) {
  const FourierSeries f = FourierSeries::from_flat({1.0, 2.0, 0.1, 0.2, 0.3});
  EXPECT_EQ(f.constant, 1.0);
  EXPECT_EQ(f.linear, 2.0);
  ASSERT_EQ(f.cos_coeffs.size(), 2u);
  EXPECT_EQ(f.sin_coeffs[1], 0.0);
  EXPECT_EQ(FourierSeries::from_flat(f.to_flat()).to_flat(), f.to_flat());
  EXPECT_THROW(FourierSeries::from_flat({}), std::invalid_argument);
}

TEST(Paths, SampleEquatorExample) {
  const PathSamples ps = sample(latitude_loop(kPi / 2.0), 4);
  const std::vector<Vec3> expected{{1, 0, 0}, {0, 1, 0}, {-1, 0, 0}, {0, -1, 0}, {1, 0, 0}};
  ASSERT_EQ(ps.x.size(), 5u);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_LT(norm(ps.x[i] - expected[i]), 1e-15);
  EXPECT_THROW(sample(latitude_loop(1.0), 3), std::invalid_argument);
}

TEST(Paths, SampleNormMatchesR) {
  for (const auto& path : all_families()) {
    const PathSamples ps = sample(path, 64);
    for (std::size_t i = 0; i < ps.s.size(); ++i) {
      EXPECT_NEAR(norm(ps.x[i]), ps.r[i], 1e-13);
      EXPECT_NEAR(ps.costheta[i], std::cos(ps.theta[i]), 1e-15);
    }
  }
}

double max_fd_error(const ControlPath& path, std::size_t n) {
  const PathSamples ps = sample(path, n);
  const double h = 1.0 / static_cast<double>(n);
  double worst = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    const Vec3 fd = (1.0 / (2.0 * h)) * (ps.x[i + 1] - ps.x[i - 1]);
    worst = std::max(worst, norm(fd - ps.xdot[i]));
  }
  return worst;
}

TEST(Paths, SampledDerivativeConvergesQuadratically) {
  const ControlPath path = wobbly_path();
  for (std::size_t n : {32u, 64u, 128u}) {
    const double ratio = max_fd_error(path, n) / max_fd_error(path, 2 * n);
    EXPECT_NEAR(ratio, 4.0, 0.2) << n;
  }
}

TEST(Paths, NumericDerivativeFallback) {
  const ControlPath analytic = wobbly_path();
  const ControlPath numeric("numeric", {}, Profile{[&](double s) { return analytic.theta(s); }, {}},
                            Profile{[](double s) { return kTwoPi * s; }, {}}, Profile{[](double s) { return 1.0 + 0.5 * s; }, {}});
  for (double s : {0.0, 0.3, 0.71, 1.0}) {
    EXPECT_NEAR(numeric.dtheta(s), analytic.dtheta(s), 1e-7);
    EXPECT_NEAR(numeric.dr(s), 0.5, 1e-7);
  }
}

TEST(Paths, ArcLengthExamples) {
  EXPECT_NEAR(arc_length(latitude_loop(kPi / 2.0)), kTwoPi, 1e-12);
  EXPECT_NEAR(arc_length(latitude_loop(kPi / 2.0, 5.0)), kTwoPi, 1e-12);
  for (double th : {0.3, 1.0, 2.5}) {
    EXPECT_NEAR(arc_length(latitude_loop(th, 0.7)), kTwoPi * std::sin(th), 1e-10);
  }
  EXPECT_NEAR(arc_length(constant_path(1.0, 2.0)), 0.0, 1e-15);
}

TEST(Paths, ArcLengthReparametrizationInvariance) {
  const Profile cubic{[](double s) { return s * s * s; }, [](double s) { return 3.0 * s * s; }};
  const ControlPath eq = reparametrized(latitude_loop(kPi / 2.0), cubic);
  EXPECT_NEAR(eq.phi(0.5), kTwoPi / 8.0, 1e-15);
  EXPECT_NEAR(arc_length(eq), kTwoPi, 1e-8 * kTwoPi);

  const Profile warp{[](double s) { return s + 0.1 * std::sin(kTwoPi * s); },
                     [](double s) { return 1.0 + 0.1 * kTwoPi * std::cos(kTwoPi * s); }};
  for (const auto& path : {wobbly_path(), latitude_loop(0.8)}) {
    const double base = arc_length(path);
    EXPECT_NEAR(arc_length(reparametrized(path, warp)), base, 1e-8 * base);
  }
  EXPECT_THROW(reparametrized(eq, Profile{[](double s) { return 0.5 * s; }, {}}), std::invalid_argument);
}

TEST(Paths, PerturbZeroNoiseIsIdentity) {
  const ControlPath path = wobbly_path();
  const TimeGrid grid{20.0, 200};
  NoiseRealization zero{grid, {}, NoiseSpec{}, 0};
  for (auto& axis : zero.dx) axis.assign(grid.points(), 0.0);
  const ControlPath same = perturb(path, zero);
  EXPECT_EQ(same.family(), path.family());
  for (double s : {0.0, 0.25, 0.6, 1.0}) {
    EXPECT_EQ(same.theta(s), path.theta(s));
    EXPECT_EQ(same.phi(s), path.phi(s));
    EXPECT_EQ(same.r(s), path.r(s));
  }
}

TEST(Paths, RadialPerturbationKeepsDirection) {
  const ControlPath path = wobbly_path();
  const double c = 0.2;
  const ControlPath moved = perturb(
      path, [&](double s) { return c * path.direction(s); }, [&](double s) { return c * path.direction_rate(s); });
  for (double s : {0.0, 0.1, 0.45, 0.8, 1.0}) {
    EXPECT_NEAR(moved.theta(s), path.theta(s), 1e-12);
    EXPECT_NEAR(moved.phi(s), path.phi(s), 1e-12);
    EXPECT_NEAR(moved.r(s), path.r(s) + c, 1e-12);
    EXPECT_NEAR(moved.dtheta(s), path.dtheta(s), 1e-10);
    EXPECT_NEAR(moved.dphi(s), path.dphi(s), 1e-10);
    EXPECT_NEAR(moved.dr(s), path.dr(s), 1e-10);
  }
}

TEST(Paths, PerturbedPathCloses) {
  const ControlPath path = latitude_loop(1.1);
  const double T = 50.0;
  for (Pinning pin : {Pinning::endpoint_ramp, Pinning::exact_bridge}) {
    const NoiseSpec spec{{0.05, 0.05, 0.05}, {1.0, 1.0, 1.0}, pin, 7};
    for (std::uint64_t k = 0; k < 5; ++k) {
      const ControlPath p = perturb(path, sample_realization(spec, TimeGrid::with_max_step(T, 0.1), k));
      EXPECT_LT(norm(p.direction(1.0) - p.direction(0.0)), 1e-10);
      EXPECT_NEAR(p.r(0.5), norm(p.position(0.5)), 1e-12);
    }
  }
}

TEST(Paths, PerturbRejections) {
  const ControlPath path = latitude_loop(1.1);
  const NoiseSpec loose{{0.05, 0.05, 0.05}, {1.0, 1.0, 1.0}, Pinning::none, 7};
  EXPECT_THROW(perturb(path, sample_realization(loose, TimeGrid::with_max_step(20.0, 0.1), 0)), std::invalid_argument);
  // pulled through the origin
  EXPECT_THROW(perturb(
                   path, [&](double s) { return (-std::sin(kPi * s)) * path.position(s); },
                   [&](double s) { return (-kPi * std::cos(kPi * s)) * path.position(s); }),
               std::invalid_argument);
  // non-radial endpoint shift breaks closure
  EXPECT_THROW(perturb(
                   path, [](double s) { return Vec3{0.0, 0.0, 0.1 * s}; }, [](double) { return Vec3{0.0, 0.0, 0.1}; }),
               std::invalid_argument);
}

}  // namespace
}  // namespace holo
