#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "holo/experiments.hpp"
#include "holo/noise.hpp"
#include "holo/paths.hpp"
#include "holo/propagator.hpp"

namespace holo {

enum class Subcommand { gate, holonomy, noise_mc, scaling, timing, convergence };

inline std::string_view to_string(Subcommand c) {
  switch (c) {
    case Subcommand::gate: return "gate";
    case Subcommand::holonomy: return "holonomy";
    case Subcommand::noise_mc: return "noise-mc";
    case Subcommand::scaling: return "scaling";
    case Subcommand::timing: return "timing";
    case Subcommand::convergence: return "convergence";
  }
  return "?";
}

inline std::optional<Subcommand> subcommand_from_string(std::string_view s) {
  for (auto c : {Subcommand::gate, Subcommand::holonomy, Subcommand::noise_mc, Subcommand::scaling, Subcommand::timing,
                 Subcommand::convergence}) {
    if (to_string(c) == s) return c;
  }
  return std::nullopt;
}

/// Parse or validation failure; line is 0 when the problem is not tied to one line.
class ConfigError : public std::runtime_error {
 public:
  enum class Kind { syntax, unknown_key, missing_key, bad_value, out_of_range };

  ConfigError(Kind kind, std::string key, int line, const std::string& what)
      : std::runtime_error(format(kind, key, line, what)), kind_(kind), key_(std::move(key)), line_(line) {}

  Kind kind() const { return kind_; }
  const std::string& key() const { return key_; }
  int line() const { return line_; }

 private:
  static std::string format(Kind kind, const std::string& key, int line, const std::string& what) {
    std::string head;
    switch (kind) {
      case Kind::syntax: head = "syntax error"; break;
      case Kind::unknown_key: head = "unknown key"; break;
      case Kind::missing_key: head = "missing required key"; break;
      case Kind::bad_value: head = "bad value"; break;
      case Kind::out_of_range: head = "value out of range"; break;
    }
    std::string out = "config: " + head;
    if (!key.empty()) out += " '" + key + "'";
    if (line > 0) out += " (line " + std::to_string(line) + ")";
    if (!what.empty()) out += ": " + what;
    return out;
  }

  Kind kind_;
  std::string key_;
  int line_;
};

/// Path family plus its parameters; scalars are stored as one-element lists.
struct PathConfig {
  std::string family = "latitude";
  std::map<std::string, std::vector<double>> params;

  friend bool operator==(const PathConfig&, const PathConfig&) = default;
};

struct ExperimentConfig {
  std::size_t n = 1000;
  McMode mode = McMode::first_order;
  double p = 0.5;
  double q = 0.5;
  double tau0 = 1.0;
  double sigma0 = 1.0;
  std::vector<double> epsilons;  // scaling and convergence
  double delta_t = 1.0;
  std::vector<double> t0s{100.0, 200.0, 400.0, 800.0};

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

struct OutputConfig {
  std::string dir = "out";
  std::size_t export_realizations = 0;  // noise-mc: write the first k realizations as CSV

  friend bool operator==(const OutputConfig&, const OutputConfig&) = default;
};

struct RunConfig {
  Subcommand subcommand = Subcommand::gate;
  std::uint64_t seed = 0;
  PathConfig path;
  PropagationSettings propagation;
  NoiseSpec noise;  // noise.seed mirrors seed
  ExperimentConfig experiment;
  OutputConfig output;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

namespace detail {

struct RawEntry {
  std::string value;
  int line = 0;
};

using RawSection = std::map<std::string, RawEntry>;

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::string qualified(const std::string& section, const std::string& key) {
  return section.empty() ? key : section + "." + key;
}

inline double parse_number(std::string_view text, const std::string& key, int line) {
  text = trim(text);
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (text.empty() || ec != std::errc() || ptr != last || !std::isfinite(v)) {
    throw ConfigError(ConfigError::Kind::bad_value, key, line, "expected a finite number, got '" + std::string(text) + "'");
  }
  return v;
}

inline std::vector<double> parse_list(std::string_view text, const std::string& key, int line) {
  std::vector<double> out;
  text = trim(text);
  if (text.empty()) throw ConfigError(ConfigError::Kind::bad_value, key, line, "expected a number list");
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    out.push_back(parse_number(text.substr(start, comma - start), key, line));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

inline std::uint64_t parse_u64(std::string_view text, const std::string& key, int line) {
  text = trim(text);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError(ConfigError::Kind::bad_value, key, line,
                      "expected a non-negative integer, got '" + std::string(text) + "'");
  }
  return v;
}

inline std::string format_number(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

inline std::string format_list(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += format_number(v[i]);
  }
  return out;
}

// Consumes recognized keys from a section; anything left afterwards is unknown.
class SectionReader {
 public:
  SectionReader(std::string name, RawSection entries) : name_(std::move(name)), entries_(std::move(entries)) {}

  bool has(const std::string& key) const { return entries_.count(key) > 0; }
  int line(const std::string& key) const { return has(key) ? entries_.at(key).line : 0; }
  std::string qualified_key(const std::string& key) const { return qualified(name_, key); }

  std::optional<RawEntry> take(const std::string& key) {
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    RawEntry e = it->second;
    entries_.erase(it);
    taken_[key] = e.line;
    return e;
  }

  RawEntry require(const std::string& key, const std::string& context) {
    auto e = take(key);
    if (!e) throw ConfigError(ConfigError::Kind::missing_key, qualified_key(key), 0, context);
    return *e;
  }

  template <class T, class Parse>
  void read(const std::string& key, T& out, Parse parse) {
    if (auto e = take(key)) out = parse(e->value, qualified_key(key), e->line);
  }

  void read_number(const std::string& key, double& out) { read(key, out, parse_number); }

  int taken_line(const std::string& key) const {
    auto it = taken_.find(key);
    return it == taken_.end() ? 0 : it->second;
  }

  void reject_leftovers(const std::string& context) const {
    if (entries_.empty()) return;
    // report the earliest offending line
    auto it = std::min_element(entries_.begin(), entries_.end(),
                               [](const auto& a, const auto& b) { return a.second.line < b.second.line; });
    throw ConfigError(ConfigError::Kind::unknown_key, qualified_key(it->first), it->second.line, context);
  }

  const std::string& name() const { return name_; }

 private:
  std::string name_;
  RawSection entries_;
  std::map<std::string, int> taken_;
};

struct PathKey {
  const char* name;
  bool required;
  bool list;
  double fallback;
};

inline const std::vector<PathKey>& path_schema(const std::string& family) {
  static const std::map<std::string, std::vector<PathKey>> schema{
      {"latitude", {{"theta0", true, false, 0.0}, {"r0", false, false, 1.0}}},
      {"lune", {{"dphi", true, false, 0.0}, {"delta", false, false, 1e-3}, {"r0", false, false, 1.0}}},
      {"fourier", {{"theta", true, true, 0.0}, {"phi", true, true, 0.0}, {"r", false, true, 1.0}}},
      {"constant", {{"theta", true, false, 0.0}, {"phi", false, false, 0.0}, {"r", false, false, 1.0}}},
  };
  auto it = schema.find(family);
  if (it == schema.end()) throw std::out_of_range(family);
  return it->second;
}

inline void out_of_range(const std::string& key, int line, double value, const std::string& constraint) {
  throw ConfigError(ConfigError::Kind::out_of_range, key, line, format_number(value) + " violates " + constraint);
}

}  // namespace detail

/// Builds the control path named by a config; throws std::invalid_argument on bad parameters.
inline ControlPath build_path(const PathConfig& pc) {
  auto scalar = [&](const char* k) { return pc.params.at(k).at(0); };
  if (pc.family == "latitude") return latitude_loop(scalar("theta0"), scalar("r0"));
  if (pc.family == "lune") return lune_path(scalar("dphi"), scalar("delta"), scalar("r0"));
  if (pc.family == "constant") return constant_path(scalar("theta"), scalar("phi"), scalar("r"));
  if (pc.family == "fourier") {
    return fourier_path(FourierSeries::from_flat(pc.params.at("theta")), FourierSeries::from_flat(pc.params.at("phi")),
                        FourierSeries::from_flat(pc.params.at("r")));
  }
  throw std::invalid_argument("unknown path family '" + pc.family + "'");
}

/// INI-style document: optional top-level keys, then sections [path], [propagation],
/// [noise], [experiment], [output]. Lines starting with '#' or ';' are comments.
///
/// Top level: subcommand (gate | holonomy | noise-mc | scaling | timing | convergence), seed = 0.
/// [path] family = latitude | lune | fourier | constant, plus
///   latitude: theta0, r0 = 1
///   lune: dphi, delta = 1e-3, r0 = 1
///   fourier: theta, phi, r = 1 as flat lists [c0, c1, a1, b1, a2, b2, ...]
///   constant: theta, phi = 0, r = 1
/// [propagation] epsilon = 0.05, steps_per_unit_time = 20, frame = lab
/// [noise] sigma = 0, tau = 1 (one value or three), pinning = endpoint-ramp
/// [experiment] n = 1000, mode = first_order, p = q = 0.5, tau0 = sigma0 = 1,
///   epsilons (list) or epsilon_min, epsilon_max, per_decade = 5; delta_t = 1, t0s = 100, 200, 400, 800
/// [output] dir = out, export_realizations = 0
inline RunConfig parse_config(std::string_view text) {
  using Kind = ConfigError::Kind;
  static const std::vector<std::string> known_sections{"", "path", "propagation", "noise", "experiment", "output"};
  std::map<std::string, detail::RawSection> raw;
  for (const auto& s : known_sections) raw[s];

  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const std::string_view raw_line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    const std::string_view line = detail::trim(raw_line);
    if (line.empty() || line.front() == '#' || line.front() == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(Kind::syntax, "", line_no, "unterminated section header");
      section = std::string(detail::trim(line.substr(1, line.size() - 2)));
      if (std::find(known_sections.begin() + 1, known_sections.end(), section) == known_sections.end()) {
        throw ConfigError(Kind::unknown_key, "[" + section + "]", line_no, "unknown section");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(Kind::syntax, "", line_no, "expected 'key = value'");
    const std::string key(detail::trim(line.substr(0, eq)));
    std::string_view value = detail::trim(line.substr(eq + 1));
    if (const auto hash = value.find(" #"); hash != std::string_view::npos) value = detail::trim(value.substr(0, hash));
    if (key.empty()) throw ConfigError(Kind::syntax, "", line_no, "empty key");
    auto& sec = raw[section];
    if (sec.count(key)) {
      throw ConfigError(Kind::syntax, detail::qualified(section, key), line_no,
                        "duplicate key (first set on line " + std::to_string(sec[key].line) + ")");
    }
    sec[key] = {std::string(value), line_no};
  }

  RunConfig cfg;

  // top level
  detail::SectionReader top("", raw[""]);
  {
    const auto e = top.require("subcommand", "one of gate, holonomy, noise-mc, scaling, timing, convergence");
    const auto c = subcommand_from_string(e.value);
    if (!c) throw ConfigError(Kind::bad_value, "subcommand", e.line, "unknown subcommand '" + e.value + "'");
    cfg.subcommand = *c;
  }
  top.read("seed", cfg.seed, detail::parse_u64);
  top.reject_leftovers("allowed top-level keys: subcommand, seed");

  // [path]
  detail::SectionReader path("path", raw["path"]);
  {
    const auto fam = path.require("family", "one of latitude, lune, fourier, constant");
    cfg.path.family = fam.value;
    const std::vector<detail::PathKey>* schema = nullptr;
    try {
      schema = &detail::path_schema(fam.value);
    } catch (const std::out_of_range&) {
      throw ConfigError(Kind::bad_value, "path.family", fam.line, "unknown family '" + fam.value + "'");
    }
    for (const auto& k : *schema) {
      const std::string qk = path.qualified_key(k.name);
      auto e = k.required ? std::optional(path.require(k.name, "needed by family " + fam.value)) : path.take(k.name);
      if (!e) {
        cfg.path.params[k.name] = {k.fallback};
        continue;
      }
      cfg.path.params[k.name] =
          k.list ? detail::parse_list(e->value, qk, e->line) : std::vector{detail::parse_number(e->value, qk, e->line)};
    }
    path.reject_leftovers("not a parameter of family " + fam.value);

    auto check_scalar = [&](const char* key, auto pred, const char* constraint) {
      const double v = cfg.path.params.at(key).at(0);
      if (!pred(v)) detail::out_of_range(path.qualified_key(key), path.taken_line(key), v, constraint);
    };
    auto positive = [](double v) { return v > 0.0; };
    if (fam.value == "latitude") {
      check_scalar("theta0", [](double v) { return v > 0.0 && v < kPi; }, "0 < theta0 < pi");
      check_scalar("r0", positive, "r0 > 0");
    } else if (fam.value == "lune") {
      check_scalar("dphi", [](double v) { return v > 0.0 && v < kTwoPi; }, "0 < dphi < 2 pi");
      check_scalar("delta", [](double v) { return v > 0.0 && v < kPi / 2.0; }, "0 < delta < pi/2");
      check_scalar("r0", positive, "r0 > 0");
    } else if (fam.value == "constant") {
      check_scalar("theta", [](double v) { return v >= 0.0 && v <= kPi; }, "0 <= theta <= pi");
      check_scalar("r", positive, "r > 0");
    }
    try {
      (void)build_path(cfg.path);
    } catch (const std::invalid_argument& err) {
      throw ConfigError(Kind::out_of_range, "path", fam.line, err.what());
    }
  }

  // [propagation]
  detail::SectionReader prop("propagation", raw["propagation"]);
  prop.read_number("epsilon", cfg.propagation.epsilon);
  if (!(cfg.propagation.epsilon > 0.0)) {
    detail::out_of_range("propagation.epsilon", prop.taken_line("epsilon"), cfg.propagation.epsilon, "epsilon > 0");
  }
  if (auto e = prop.take("steps_per_unit_time")) {
    const auto v = detail::parse_u64(e->value, "propagation.steps_per_unit_time", e->line);
    if (v < 1 || v > 1000000) detail::out_of_range("propagation.steps_per_unit_time", e->line, double(v), "1..1e6");
    cfg.propagation.steps_per_unit_time = static_cast<int>(v);
  }
  if (auto e = prop.take("frame")) {
    try {
      cfg.propagation.frame = frame_kind_from_string(e->value);
    } catch (const std::invalid_argument& err) {
      throw ConfigError(Kind::bad_value, "propagation.frame", e->line, err.what());
    }
  }
  prop.reject_leftovers("allowed: epsilon, steps_per_unit_time, frame");

  // [noise]
  detail::SectionReader noise("noise", raw["noise"]);
  auto axis_values = [&](const char* key, std::array<double, 3>& out) {
    auto e = noise.take(key);
    if (!e) return;
    const auto v = detail::parse_list(e->value, noise.qualified_key(key), e->line);
    if (v.size() == 1) {
      out = {v[0], v[0], v[0]};
    } else if (v.size() == 3) {
      out = {v[0], v[1], v[2]};
    } else {
      throw ConfigError(Kind::bad_value, noise.qualified_key(key), e->line, "expected one value or three");
    }
  };
  axis_values("sigma", cfg.noise.sigma);
  axis_values("tau", cfg.noise.tau);
  for (int a = 0; a < 3; ++a) {
    if (!(cfg.noise.sigma[a] >= 0.0)) detail::out_of_range("noise.sigma", noise.taken_line("sigma"), cfg.noise.sigma[a], "sigma >= 0");
    if (!(cfg.noise.tau[a] > 0.0)) detail::out_of_range("noise.tau", noise.taken_line("tau"), cfg.noise.tau[a], "tau > 0");
  }
  if (auto e = noise.take("pinning")) {
    try {
      cfg.noise.pinning = pinning_from_string(e->value);
    } catch (const std::invalid_argument& err) {
      throw ConfigError(Kind::bad_value, "noise.pinning", e->line, err.what());
    }
  }
  noise.reject_leftovers("allowed: sigma, tau, pinning");
  cfg.noise.seed = cfg.seed;

  // [experiment]
  detail::SectionReader exp("experiment", raw["experiment"]);
  if (auto e = exp.take("n")) {
    const auto v = detail::parse_u64(e->value, "experiment.n", e->line);
    if (v < 100) detail::out_of_range("experiment.n", e->line, double(v), "n >= 100");
    cfg.experiment.n = v;
  }
  if (auto e = exp.take("mode")) {
    try {
      cfg.experiment.mode = mc_mode_from_string(e->value);
    } catch (const std::invalid_argument& err) {
      throw ConfigError(Kind::bad_value, "experiment.mode", e->line, err.what());
    }
  }
  exp.read_number("p", cfg.experiment.p);
  exp.read_number("q", cfg.experiment.q);
  exp.read_number("tau0", cfg.experiment.tau0);
  exp.read_number("sigma0", cfg.experiment.sigma0);
  for (const char* k : {"p", "q"}) {
    const double v = std::string_view(k) == "p" ? cfg.experiment.p : cfg.experiment.q;
    if (!(v > 0.0)) detail::out_of_range(exp.qualified_key(k), exp.taken_line(k), v, std::string(k) + " > 0");
  }
  for (const char* k : {"tau0", "sigma0"}) {
    const double v = std::string_view(k) == "tau0" ? cfg.experiment.tau0 : cfg.experiment.sigma0;
    if (!(v > 0.0)) detail::out_of_range(exp.qualified_key(k), exp.taken_line(k), v, std::string(k) + " > 0");
  }
  const bool has_list = exp.has("epsilons");
  const bool has_range = exp.has("epsilon_min") || exp.has("epsilon_max") || exp.has("per_decade");
  if (has_list && has_range) {
    throw ConfigError(Kind::bad_value, "experiment.epsilons", exp.line("epsilons"),
                      "give either epsilons or epsilon_min/epsilon_max/per_decade, not both");
  }
  if (has_list) {
    exp.read("epsilons", cfg.experiment.epsilons, detail::parse_list);
  } else if (has_range) {
    const auto lo = exp.require("epsilon_min", "needed with epsilon_max");
    const auto hi = exp.require("epsilon_max", "needed with epsilon_min");
    std::uint64_t per_decade = 5;
    exp.read("per_decade", per_decade, detail::parse_u64);
    const double a = detail::parse_number(lo.value, "experiment.epsilon_min", lo.line);
    const double b = detail::parse_number(hi.value, "experiment.epsilon_max", hi.line);
    if (!(a > 0.0 && b > a)) detail::out_of_range("experiment.epsilon_max", hi.line, b, "0 < epsilon_min < epsilon_max");
    if (per_decade < 1 || per_decade > 100) {
      detail::out_of_range("experiment.per_decade", exp.taken_line("per_decade"), double(per_decade), "1..100");
    }
    cfg.experiment.epsilons = log_spaced(a, b, static_cast<int>(per_decade));
  }
  for (double e : cfg.experiment.epsilons) {
    if (!(e > 0.0 && e <= 1.0)) detail::out_of_range("experiment.epsilons", exp.taken_line("epsilons"), e, "0 < epsilon <= 1");
  }
  exp.read_number("delta_t", cfg.experiment.delta_t);
  exp.read("t0s", cfg.experiment.t0s, detail::parse_list);
  for (double t : cfg.experiment.t0s) {
    if (!(t > 0.0)) detail::out_of_range("experiment.t0s", exp.taken_line("t0s"), t, "t0 > 0");
  }
  exp.reject_leftovers(
      "allowed: n, mode, p, q, tau0, sigma0, epsilons, epsilon_min, epsilon_max, per_decade, delta_t, t0s");

  // [output]
  detail::SectionReader out("output", raw["output"]);
  if (auto e = out.take("dir")) {
    if (e->value.empty()) throw ConfigError(Kind::bad_value, "output.dir", e->line, "empty directory");
    cfg.output.dir = e->value;
  }
  out.read("export_realizations", cfg.output.export_realizations, detail::parse_u64);
  out.reject_leftovers("allowed: dir, export_realizations");

  // cross-section requirements
  const auto& ex = cfg.experiment;
  if (cfg.subcommand == Subcommand::scaling) {
    if (ex.epsilons.size() < 4) {
      throw ConfigError(Kind::missing_key, "experiment.epsilons", 0, "scaling needs at least 4 epsilon values");
    }
    const auto [lo, hi] = std::minmax_element(ex.epsilons.begin(), ex.epsilons.end());
    if (*hi / *lo < 10.0 * (1.0 - 1e-12)) {
      throw ConfigError(Kind::out_of_range, "experiment.epsilons", 0, "scaling grid must span a decade");
    }
  }
  if (cfg.subcommand == Subcommand::convergence && ex.epsilons.size() < 3) {
    throw ConfigError(Kind::missing_key, "experiment.epsilons", 0, "convergence needs at least 3 epsilon values");
  }
  if (cfg.subcommand == Subcommand::timing) {
    if (ex.t0s.size() < 3) throw ConfigError(Kind::out_of_range, "experiment.t0s", 0, "timing needs at least 3 values");
    const auto [lo, hi] = std::minmax_element(ex.t0s.begin(), ex.t0s.end());
    if (*hi / *lo < 4.0) throw ConfigError(Kind::out_of_range, "experiment.t0s", 0, "t0 grid must span a factor 4");
    if (!(std::abs(ex.delta_t) < 0.5 * *lo)) {
      throw ConfigError(Kind::out_of_range, "experiment.delta_t", 0, "|delta_t| must be below half the smallest t0");
    }
  }
  if (cfg.subcommand == Subcommand::noise_mc && cfg.noise.silent()) {
    throw ConfigError(Kind::missing_key, "noise.sigma", 0, "noise-mc needs sigma > 0 on some axis");
  }
  if (cfg.subcommand == Subcommand::noise_mc && cfg.noise.pinning == Pinning::none) {
    throw ConfigError(Kind::out_of_range, "noise.pinning", 0, "Monte Carlo needs pinned noise");
  }
  return cfg;
}

/// Canonical text form; parse_config(serialize(c)) == c.
inline std::string serialize(const RunConfig& c) {
  std::ostringstream os;
  os << "subcommand = " << to_string(c.subcommand) << "\n";
  os << "seed = " << c.seed << "\n\n";

  os << "[path]\nfamily = " << c.path.family << "\n";
  for (const auto& [k, v] : c.path.params) os << k << " = " << detail::format_list(v) << "\n";

  os << "\n[propagation]\n";
  os << "epsilon = " << detail::format_number(c.propagation.epsilon) << "\n";
  os << "steps_per_unit_time = " << c.propagation.steps_per_unit_time << "\n";
  os << "frame = " << to_string(c.propagation.frame) << "\n";

  auto axes = [](const std::array<double, 3>& a) { return detail::format_list({a[0], a[1], a[2]}); };
  os << "\n[noise]\n";
  os << "sigma = " << axes(c.noise.sigma) << "\n";
  os << "tau = " << axes(c.noise.tau) << "\n";
  os << "pinning = " << to_string(c.noise.pinning) << "\n";

  const auto& e = c.experiment;
  os << "\n[experiment]\n";
  os << "n = " << e.n << "\n";
  os << "mode = " << to_string(e.mode) << "\n";
  os << "p = " << detail::format_number(e.p) << "\n";
  os << "q = " << detail::format_number(e.q) << "\n";
  os << "tau0 = " << detail::format_number(e.tau0) << "\n";
  os << "sigma0 = " << detail::format_number(e.sigma0) << "\n";
  if (!e.epsilons.empty()) os << "epsilons = " << detail::format_list(e.epsilons) << "\n";
  os << "delta_t = " << detail::format_number(e.delta_t) << "\n";
  os << "t0s = " << detail::format_list(e.t0s) << "\n";

  os << "\n[output]\n";
  os << "dir = " << c.output.dir << "\n";
  os << "export_realizations = " << c.output.export_realizations << "\n";
  return os.str();
}

}  // namespace holo
