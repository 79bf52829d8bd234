#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "holo/config.hpp"

namespace holo {
namespace {

const char* kMinimal = R"(subcommand = gate
[path]
family = latitude
theta0 = 1.0472
[propagation]
epsilon = 0.05
)";

ConfigError parse_error(const std::string& text) {
  try {
    (void)parse_config(text);
  } catch (const ConfigError& e) {
    return e;
  }
  ADD_FAILURE() << "no ConfigError for:\n" << text;
  return ConfigError(ConfigError::Kind::syntax, "", 0, "");
}

TEST(Config, MinimalConfigGetsDefaults) {
  const RunConfig c = parse_config(kMinimal);
  EXPECT_EQ(c.subcommand, Subcommand::gate);
  EXPECT_EQ(c.path.family, "latitude");
  EXPECT_EQ(c.path.params.at("theta0"), std::vector<double>{1.0472});
  EXPECT_EQ(c.path.params.at("r0"), std::vector<double>{1.0});
  EXPECT_EQ(c.propagation.epsilon, 0.05);
  EXPECT_EQ(c.propagation.steps_per_unit_time, 20);
  EXPECT_EQ(c.propagation.frame, FrameKind::lab);
  EXPECT_EQ(c.seed, 0u);
  EXPECT_TRUE(c.noise.silent());
  EXPECT_EQ(c.noise.pinning, Pinning::endpoint_ramp);
  EXPECT_EQ(c.experiment.n, 1000u);
  EXPECT_EQ(c.experiment.mode, McMode::first_order);
  EXPECT_EQ(c.output.dir, "out");
}

TEST(Config, ThetaAbovePiNamesConstraint) {
  std::string text = kMinimal;
  text.replace(text.find("1.0472"), 6, "4.0");
  const ConfigError e = parse_error(text);
  EXPECT_EQ(e.kind(), ConfigError::Kind::out_of_range);
  EXPECT_EQ(e.key(), "path.theta0");
  EXPECT_EQ(e.line(), 4);
  EXPECT_NE(std::string(e.what()).find("0 < theta0 < pi"), std::string::npos) << e.what();
}

TEST(Config, ZeroEpsilonRejected) {
  std::string text = kMinimal;
  text.replace(text.find("0.05"), 4, "0");
  const ConfigError e = parse_error(text);
  EXPECT_EQ(e.kind(), ConfigError::Kind::out_of_range);
  EXPECT_EQ(e.key(), "propagation.epsilon");
  EXPECT_EQ(e.line(), 6);
}

TEST(Config, DistinctDiagnostics) {
  const ConfigError unknown = parse_error(std::string(kMinimal) + "step = 3\n");
  EXPECT_EQ(unknown.kind(), ConfigError::Kind::unknown_key);
  EXPECT_EQ(unknown.key(), "propagation.step");
  EXPECT_EQ(unknown.line(), 7);
  EXPECT_NE(std::string(unknown.what()).find("unknown key"), std::string::npos);

  const ConfigError missing = parse_error("subcommand = gate\n[path]\nfamily = latitude\n");
  EXPECT_EQ(missing.kind(), ConfigError::Kind::missing_key);
  EXPECT_EQ(missing.key(), "path.theta0");
  EXPECT_NE(std::string(missing.what()).find("missing required key"), std::string::npos);

  const ConfigError bad = parse_error("subcommand = gate\n[path]\nfamily = latitude\ntheta0 = one\n");
  EXPECT_EQ(bad.kind(), ConfigError::Kind::bad_value);
  EXPECT_EQ(bad.line(), 4);

  const ConfigError range = parse_error("subcommand = gate\n[path]\nfamily = latitude\ntheta0 = -1\n");
  EXPECT_EQ(range.kind(), ConfigError::Kind::out_of_range);

  EXPECT_NE(std::string(unknown.what()), std::string(missing.what()));
}

TEST(Config, SyntaxErrors) {
  EXPECT_EQ(parse_error("subcommand = gate\n[path\n").kind(), ConfigError::Kind::syntax);
  EXPECT_EQ(parse_error("subcommand = gate\njust words\n").line(), 2);
  EXPECT_EQ(parse_error("subcommand = gate\n[paths]\n").kind(), ConfigError::Kind::unknown_key);
  const ConfigError dup = parse_error(std::string(kMinimal) + "epsilon = 0.1\n");
  EXPECT_EQ(dup.kind(), ConfigError::Kind::syntax);
  EXPECT_EQ(dup.line(), 7);
  EXPECT_EQ(parse_error("[path]\nfamily = latitude\ntheta0 = 1\n").key(), "subcommand");
  EXPECT_EQ(parse_error("subcommand = plot\n").kind(), ConfigError::Kind::bad_value);
  EXPECT_EQ(parse_error("subcommand = gate\n[path]\nfamily = spiral\n").key(), "path.family");
}

TEST(Config, CommentsAndWhitespace) {
  const RunConfig c = parse_config(
      "# leading comment\n\n  subcommand = holonomy  \n; another\n[path]\nfamily = lune\n"
      "dphi = 1.5  # trailing\n");
  EXPECT_EQ(c.subcommand, Subcommand::holonomy);
  EXPECT_EQ(c.path.params.at("dphi"), std::vector<double>{1.5});
  EXPECT_EQ(c.path.params.at("delta"), std::vector<double>{1e-3});
}

TEST(Config, FamilyKeysAreStrict) {
  // theta0 belongs to latitude, not lune
  const ConfigError e = parse_error("subcommand = gate\n[path]\nfamily = lune\ndphi = 1\ntheta0 = 1\n");
  EXPECT_EQ(e.kind(), ConfigError::Kind::unknown_key);
  EXPECT_EQ(e.key(), "path.theta0");
  EXPECT_EQ(e.line(), 5);
}

TEST(Config, FourierPathValidatedOnParse) {
  const std::string head = "subcommand = gate\n[path]\nfamily = fourier\nphi = 0, 6.283185307179586\n";
  const RunConfig ok = parse_config(head + "theta = 1.5707963267948966, 0, 0, 0.3\nr = 1, 0.5\n");
  EXPECT_EQ(ok.path.params.at("r"), (std::vector<double>{1.0, 0.5}));
  const ConfigError e = parse_error(head + "theta = 0.1, 0, 0, 3.2\n");
  EXPECT_EQ(e.kind(), ConfigError::Kind::out_of_range);
  EXPECT_NE(std::string(e.what()).find("leaves (0, pi)"), std::string::npos) << e.what();
}

TEST(Config, NoiseAxes) {
  const std::string head = "subcommand = noise-mc\n[path]\nfamily = latitude\ntheta0 = 1\n[noise]\n";
  const RunConfig one = parse_config(head + "sigma = 0.1\ntau = 0.2\n");
  EXPECT_EQ(one.noise.sigma, (std::array<double, 3>{0.1, 0.1, 0.1}));
  const RunConfig three = parse_config(head + "sigma = 0.1, 0, 0.3\ntau = 0.2\npinning = exact-bridge\n");
  EXPECT_EQ(three.noise.sigma, (std::array<double, 3>{0.1, 0.0, 0.3}));
  EXPECT_EQ(three.noise.pinning, Pinning::exact_bridge);
  EXPECT_EQ(parse_error(head + "sigma = 0.1, 0.2\n").kind(), ConfigError::Kind::bad_value);
  EXPECT_EQ(parse_error(head + "sigma = 0.1\ntau = 0\n").key(), "noise.tau");
  EXPECT_EQ(parse_error(head + "tau = 0.1\n").key(), "noise.sigma");
  EXPECT_EQ(parse_error(head + "sigma = 0.1\npinning = none\n").key(), "noise.pinning");
}

TEST(Config, SeedFeedsNoise) {
  const RunConfig c = parse_config("subcommand = gate\nseed = 18446744073709551615\n[path]\nfamily = latitude\ntheta0 = 1\n");
  EXPECT_EQ(c.seed, 18446744073709551615ull);
  EXPECT_EQ(c.noise.seed, c.seed);
  EXPECT_EQ(parse_error("subcommand = gate\nseed = -1\n").key(), "seed");
}

TEST(Config, EpsilonRangeExpands) {
  const RunConfig c = parse_config(
      "subcommand = scaling\n[path]\nfamily = latitude\ntheta0 = 1\n[experiment]\n"
      "epsilon_min = 1e-3\nepsilon_max = 1e-1\nper_decade = 5\n");
  ASSERT_EQ(c.experiment.epsilons.size(), 11u);
  EXPECT_DOUBLE_EQ(c.experiment.epsilons.front(), 1e-3);
  EXPECT_DOUBLE_EQ(c.experiment.epsilons.back(), 1e-1);
  const ConfigError both = parse_error(
      "subcommand = scaling\n[path]\nfamily = latitude\ntheta0 = 1\n[experiment]\nepsilons = 0.1, 0.01\n"
      "epsilon_min = 1e-3\n");
  EXPECT_EQ(both.kind(), ConfigError::Kind::bad_value);
}

TEST(Config, SubcommandRequirements) {
  const std::string head = "[path]\nfamily = latitude\ntheta0 = 1\n[experiment]\n";
  EXPECT_EQ(parse_error("subcommand = scaling\n" + head + "epsilons = 0.1, 0.05, 0.01\n").key(), "experiment.epsilons");
  EXPECT_EQ(parse_error("subcommand = scaling\n" + head + "epsilons = 0.1, 0.09, 0.08, 0.05\n").kind(),
            ConfigError::Kind::out_of_range);
  EXPECT_EQ(parse_error("subcommand = convergence\n" + head).key(), "experiment.epsilons");
  EXPECT_EQ(parse_error("subcommand = timing\n" + head + "t0s = 100, 200, 300\n").key(), "experiment.t0s");
  EXPECT_EQ(parse_error("subcommand = timing\n" + head + "delta_t = 60\n").key(), "experiment.delta_t");
  EXPECT_EQ(parse_error("subcommand = noise-mc\n" + head).key(), "noise.sigma");
  EXPECT_EQ(parse_error("subcommand = gate\n" + head + "n = 99\n").key(), "experiment.n");
  EXPECT_EQ(parse_error("subcommand = gate\n" + head + "mode = exact\n").key(), "experiment.mode");
}

TEST(Config, BuildPathPerFamily) {
  for (const char* text : {
           "subcommand = gate\n[path]\nfamily = latitude\ntheta0 = 1.2\nr0 = 2\n",
           "subcommand = gate\n[path]\nfamily = lune\ndphi = 2\n",
           "subcommand = gate\n[path]\nfamily = constant\ntheta = 0.5\nphi = 1\n",
           "subcommand = gate\n[path]\nfamily = fourier\ntheta = 1.2, 0, 0.1\nphi = 0, 6.283185307179586\n",
       }) {
    const RunConfig c = parse_config(text);
    EXPECT_EQ(build_path(c.path).family(), c.path.family);
  }
}

RunConfig random_config(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> pick(0, 5);
  RunConfig c;
  c.subcommand = static_cast<Subcommand>(pick(rng));
  c.seed = rng();
  switch (pick(rng) % 4) {
    case 0:
      c.path.family = "latitude";
      c.path.params = {{"theta0", {0.1 + 2.9 * u(rng)}}, {"r0", {0.5 + u(rng)}}};
      break;
    case 1:
      c.path.family = "lune";
      c.path.params = {{"dphi", {0.1 + 6.0 * u(rng)}}, {"delta", {1e-3 + 0.1 * u(rng)}}, {"r0", {1.0}}};
      break;
    case 2:
      c.path.family = "fourier";
      c.path.params = {{"theta", {1.5, 0.0, 0.3 * u(rng), 0.3 * u(rng)}},
                       {"phi", {u(rng), kTwoPi, 0.1 * u(rng)}},
                       {"r", {1.0, 0.5 * u(rng)}}};
      break;
    default:
      c.path.family = "constant";
      c.path.params = {{"theta", {kPi * u(rng)}}, {"phi", {u(rng)}}, {"r", {0.2 + u(rng)}}};
  }
  c.propagation = {1e-3 + u(rng), 1 + static_cast<int>(100 * u(rng)), u(rng) < 0.5 ? FrameKind::lab : FrameKind::moving};
  c.noise = NoiseSpec{{0.1 * u(rng) + 1e-3, 0.1 * u(rng), 0.1 * u(rng)},
                      {u(rng) + 1e-3, u(rng) + 1e-3, u(rng) + 1e-3},
                      u(rng) < 0.5 ? Pinning::endpoint_ramp : Pinning::exact_bridge,
                      c.seed};
  c.experiment.n = 100 + rng() % 10000;
  c.experiment.mode = u(rng) < 0.5 ? McMode::first_order : McMode::full_propagation;
  c.experiment.p = u(rng) + 1e-3;
  c.experiment.q = u(rng) + 1e-3;
  c.experiment.tau0 = u(rng) + 0.1;
  c.experiment.sigma0 = u(rng) + 0.1;
  c.experiment.epsilons = log_spaced(1e-3 + 1e-3 * u(rng), 0.1 + 0.1 * u(rng), 2 + static_cast<int>(3 * u(rng)));
  c.experiment.delta_t = u(rng) - 0.5;
  c.experiment.t0s = {100.0 + u(rng), 300.0, 800.0 * (1.0 + u(rng))};
  c.output.dir = "out/run_" + std::to_string(rng() % 1000);
  c.output.export_realizations = rng() % 5;
  return c;
}

TEST(Config, RoundTripRandomConfigs) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    const RunConfig c = random_config(rng);
    const std::string text = serialize(c);
    RunConfig back;
    ASSERT_NO_THROW(back = parse_config(text)) << text;
    EXPECT_EQ(back, c) << text;
    EXPECT_EQ(serialize(back), text);
  }
}

TEST(Config, ShippedConfigsParseAndRoundTrip) {
  const std::filesystem::path dir = std::filesystem::path(HOLO_SOURCE_DIR) / "configs";
  int count = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() != ".ini") continue;
    std::ifstream in(entry.path());
    std::stringstream ss;
    ss << in.rdbuf();
    RunConfig c;
    ASSERT_NO_THROW(c = parse_config(ss.str())) << entry.path();
    EXPECT_EQ(parse_config(serialize(c)), c) << entry.path();
    ++count;
  }
  EXPECT_GE(count, 6);
}

}  // namespace
}  // namespace holo
