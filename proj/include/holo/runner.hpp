#pragma once

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "holo/config.hpp"
#include "holo/experiments.hpp"
#include "holo/holonomy.hpp"
#include "holo/noise.hpp"
#include "holo/paths.hpp"
#include "holo/propagator.hpp"

namespace holo {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitNumerical = 3, kExitIo = 4 };

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Pass/fail comparison of a measured number against a tolerance.
struct Check {
  std::string name;
  double measured = 0.0;
  double target = 0.0;
  double tolerance = 0.0;
  std::string relation;  // "within", "at least" or "at most"
  bool pass = false;

  static Check within(std::string name, double measured, double target, double tol) {
    return {std::move(name), measured, target, tol, "within",
            std::abs(measured - target) <= tol};
  }
  static Check at_least(std::string name, double measured, double bound) {
    return {std::move(name), measured, bound, 0.0, "at least", measured >= bound};
  }
  static Check at_most(std::string name, double measured, double bound) {
    return {std::move(name), measured, bound, 0.0, "at most", measured <= bound};
  }
};

struct RunOptions {
  unsigned threads = 0;  // 0 = all cores
};

struct RunOutcome {
  int exit_code = kExitOk;
  std::string error;  // diagnostic for nonzero exits
  Subcommand subcommand = Subcommand::gate;
  Json summary;
  std::vector<Check> checks;
  std::vector<std::string> files;  // relative to the output directory
  std::vector<std::string> notes;  // extra report lines
};

namespace detail {

inline std::string num(double v) {
  if (std::isnan(v)) return "nan";
  return format_number(v);
}

inline std::string sig6(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline Json json_number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

inline Json matrix_json(const Matrix2c& m) {
  Json re = Json::array(), im = Json::array();
  for (std::size_t i = 0; i < 2; ++i) {
    re.push_back({m(i, 0).real(), m(i, 1).real()});
    im.push_back({m(i, 0).imag(), m(i, 1).imag()});
  }
  return Json{{"re", re}, {"im", im}};
}

inline Json fit_json(const PowerLawFit& f) {
  return Json{{"exponent", f.exponent},
              {"exponent_stderr", json_number(f.exponent_stderr)},
              {"intercept", f.intercept},
              {"residual", f.residual}};
}

inline Json check_json(const Check& c) {
  return Json{{"name", c.name},     {"measured", json_number(c.measured)}, {"relation", c.relation},
              {"target", c.target}, {"tolerance", c.tolerance},            {"pass", c.pass}};
}

inline Json inputs_json(const RunConfig& c) {
  Json path{{"family", c.path.family}};
  Json params = Json::object();
  for (const auto& k : path_schema(c.path.family)) {
    const auto& v = c.path.params.at(k.name);
    params[k.name] = k.list ? Json(v) : Json(v.at(0));
  }
  path["params"] = params;
  const auto& e = c.experiment;
  return Json{{"subcommand", to_string(c.subcommand)},
              {"seed", c.seed},
              {"path", path},
              {"propagation",
               {{"epsilon", c.propagation.epsilon},
                {"steps_per_unit_time", c.propagation.steps_per_unit_time},
                {"frame", to_string(c.propagation.frame)}}},
              {"noise",
               {{"sigma", c.noise.sigma}, {"tau", c.noise.tau}, {"pinning", to_string(c.noise.pinning)}}},
              {"experiment",
               {{"n", e.n},
                {"mode", to_string(e.mode)},
                {"p", e.p},
                {"q", e.q},
                {"tau0", e.tau0},
                {"sigma0", e.sigma0},
                {"epsilons", e.epsilons},
                {"delta_t", e.delta_t},
                {"t0s", e.t0s}}},
              {"output", {{"export_realizations", c.output.export_realizations}}}};
}

// Collects output files in memory so nothing is written when a run fails midway.
class Artifacts {
 public:
  void csv(const std::string& name, const std::vector<std::string>& header,
           const std::vector<std::vector<double>>& rows) {
    std::string out;
    for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + header[i];
    out += "\n";
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + num(row[i]);
      out += "\n";
    }
    files_.emplace_back(name, std::move(out));
  }

  // Two-column, whitespace-separated, ready for log-log plotting.
  void plot(const std::string& name, const std::string& xlabel, const std::string& ylabel,
            const std::vector<double>& xs, const std::vector<double>& ys) {
    std::string out = "# " + xlabel + " " + ylabel + "\n";
    for (std::size_t i = 0; i < xs.size(); ++i) out += num(xs[i]) + " " + num(ys[i]) + "\n";
    files_.emplace_back(name, std::move(out));
  }

  void text(const std::string& name, std::string body) { files_.emplace_back(name, std::move(body)); }

  std::vector<std::string> names() const {
    std::vector<std::string> out;
    for (const auto& f : files_) out.push_back(f.first);
    return out;
  }

  void write_all(const std::filesystem::path& dir) const {
    for (const auto& [name, body] : files_) write_file(dir / name, body);
  }

  static void write_file(const std::filesystem::path& p, const std::string& body) {
    std::ofstream os(p, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open " + p.string() + " for writing");
    os.write(body.data(), static_cast<std::streamsize>(body.size()));
    os.close();
    if (!os) throw IoError("write failed for " + p.string());
  }

 private:
  std::vector<std::pair<std::string, std::string>> files_;
};

inline void path_csv(Artifacts& art, const ControlPath& path) {
  constexpr std::size_t n = 256;
  const PathSamples ps = sample(path, n);
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i <= n; ++i) {
    rows.push_back({ps.s[i], ps.theta[i], ps.phi[i], ps.r[i], ps.x[i][0], ps.x[i][1], ps.x[i][2]});
  }
  art.csv("path.csv", {"s", "theta", "phi", "r", "x1", "x2", "x3"}, rows);
}

inline Json omega_json(const SolidAngleReport& o) {
  return Json{{"omega_cos", o.omega_cos},
              {"omega_A", o.omega_A},
              {"winding", o.winding},
              {"omega_canonical", o.omega_canonical}};
}

inline void run_gate(const RunConfig& cfg, RunOutcome& out, Artifacts& art) {
  const ControlPath path = build_path(cfg.path);
  const SolidAngleReport omega = solid_angle(path);
  const LogicalGate ideal = ideal_gate(omega.omega_cos);
  Operator4 u;
  if (cfg.propagation.frame == FrameKind::lab) {
    u = evolve_lab(path, cfg.propagation);
  } else {
    u = r_rotation(path, 1.0).adjoint() * evolve_moving(path, cfg.propagation);
  }
  const ExtractedGate g = extract_logical_gate(u, path);
  const double distance = frobenius_distance(g.block, ideal.as_complex());
  out.summary["results"] = Json{{"omega", omega_json(omega)},
                                {"period", cfg.propagation.period()},
                                {"ideal_gate", matrix_json(ideal.as_complex())},
                                {"extracted_gate", matrix_json(g.block)},
                                {"angle", g.angle_estimate},
                                {"angle_error", reduce_angle(g.angle_estimate - omega.omega_cos)},
                                {"leakage", g.leakage},
                                {"distance_to_ideal", distance},
                                {"adiabaticity_lost", g.adiabaticity_lost}};
  out.checks.push_back(Check::at_most("leakage", g.leakage, 0.1));
  path_csv(art, path);

  out.notes.push_back("omega_cos = " + sig6(omega.omega_cos) + ", omega_A = " + sig6(omega.omega_A) +
                      ", winding = " + std::to_string(omega.winding) + ", omega_canonical = " +
                      sig6(omega.omega_canonical));
  out.notes.push_back("extracted gate (real part):");
  for (std::size_t i = 0; i < 2; ++i) {
    out.notes.push_back("  [" + sig6(g.block(i, 0).real()) + ", " + sig6(g.block(i, 1).real()) + "]");
  }
  out.notes.push_back("angle = " + sig6(g.angle_estimate) + ", leakage = " + sig6(g.leakage) +
                      ", distance to ideal = " + sig6(distance));
}

inline void run_holonomy(const RunConfig& cfg, RunOutcome& out, Artifacts& art) {
  const ControlPath path = build_path(cfg.path);
  const SolidAngleReport omega = solid_angle(path);
  const LogicalGate g = gate_from_connection(path);
  const double length = arc_length(path);
  const double winding_defect = omega.omega_cos + omega.omega_A - kTwoPi * omega.winding;

  Json res{{"omega", omega_json(omega)},
           {"connection_gate", matrix_json(g.as_complex())},
           {"connection_angle", g.omega},
           {"arc_length", length},
           {"winding_defect", winding_defect}};
  const double T = cfg.propagation.period();
  if (!cfg.noise.silent() && path.has_constant_r()) {
    res["noise"] = Json{{"period", T}, {"delta_analytic", std::sqrt(delta_variance_analytic(path, cfg.noise, T))}};
    if (cfg.noise.is_isotropic() && cfg.noise.sigma[0] == cfg.noise.sigma[1] && cfg.noise.sigma[1] == cfg.noise.sigma[2]) {
      const ThickBoundary tb = thick_boundary_area(path, cfg.noise, T);
      res["noise"]["thick_boundary"] =
          Json{{"area", tb.area}, {"corr_length", tb.corr_length}, {"delta_sq", tb.delta_sq}};
    }
  }
  out.summary["results"] = res;
  out.checks.push_back(Check::within("winding identity", winding_defect, 0.0, 1e-8));

  constexpr std::size_t n = 256;
  std::vector<std::vector<double>> rows;
  double partial = 0.0;
  for (std::size_t i = 0; i <= n; ++i) {
    const double s = static_cast<double>(i) / n;
    if (i > 0) {
      const double a = static_cast<double>(i - 1) / n;
      partial += integrate([&](double t) { return std::cos(path.theta(t)) * path.dphi(t); }, a, s);
    }
    const Vec3 k = first_order_kernel(path, s);
    rows.push_back({s, partial, k[0], k[1], k[2]});
  }
  art.csv("holonomy.csv", {"s", "omega_partial", "k1", "k2", "k3"}, rows);
  path_csv(art, path);

  out.notes.push_back("omega_cos = " + sig6(omega.omega_cos) + ", omega_A = " + sig6(omega.omega_A) +
                      ", winding = " + std::to_string(omega.winding));
  out.notes.push_back("omega_canonical = " + sig6(omega.omega_canonical) + ", arc length = " + sig6(length));
  out.notes.push_back("connection gate: [[" + sig6(g.matrix(0, 0)) + ", " + sig6(g.matrix(0, 1)) + "], [" +
                      sig6(g.matrix(1, 0)) + ", " + sig6(g.matrix(1, 1)) + "]]");
}

inline Json mc_json(const McResult& r) {
  return Json{{"mode", to_string(r.mode)},
              {"n_realizations", r.n_realizations},
              {"excluded", r.excluded},
              {"delta_mean", r.delta_mean},
              {"delta_std", r.delta_std},
              {"std_error", r.std_error},
              {"analytic_delta", json_number(r.analytic_delta)},
              {"max_leakage", r.max_leakage}};
}

inline void run_noise_mc(const RunConfig& cfg, const RunOptions& opt, RunOutcome& out, Artifacts& art) {
  const ControlPath path = build_path(cfg.path);
  const double eps = cfg.propagation.epsilon;
  const McOptions mc{opt.threads, cfg.propagation.steps_per_unit_time};
  const McResult r = mc_delta(path, cfg.noise, eps, cfg.experiment.n, cfg.experiment.mode, mc);
  out.summary["results"] = mc_json(r);
  out.summary["results"]["period"] = 1.0 / eps;

  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < r.deltas.size(); ++i) {
    rows.push_back({static_cast<double>(i), r.deltas[i], r.leakages[i], r.leakages[i] > 0.1 ? 0.0 : 1.0});
  }
  art.csv("realizations.csv", {"index", "delta", "leakage", "kept"}, rows);

  if (cfg.output.export_realizations > 0) {
    const TimeGrid grid = mc_grid(path, cfg.noise, eps, mc);
    const std::size_t k = std::min<std::size_t>(cfg.output.export_realizations, cfg.experiment.n);
    for (std::size_t i = 0; i < k; ++i) {
      const NoiseRealization rz = sample_realization(cfg.noise, grid, i);
      std::vector<std::vector<double>> pts;
      for (std::size_t j = 0; j < grid.points(); ++j) pts.push_back({grid.time(j), rz.dx[0][j], rz.dx[1][j], rz.dx[2][j]});
      char name[32];
      std::snprintf(name, sizeof name, "noise_%04zu.csv", i);
      art.csv(name, {"t", "dx1", "dx2", "dx3"}, pts);
    }
  }

  if (r.mode == McMode::first_order) {
    Check mean = Check::within("delta mean", r.delta_mean, 0.0, 3.0 * r.std_error);
    out.checks.push_back(mean);
    if (std::isfinite(r.analytic_delta)) {
      out.checks.push_back(Check::within("delta vs analytic", r.delta_std, r.analytic_delta, 3.0 * r.std_error));
    }
  }
  out.notes.push_back("delta = " + sig6(r.delta_std) + " +- " + sig6(r.std_error) + " over " +
                      std::to_string(r.n_realizations) + " realizations (" + std::string(to_string(r.mode)) + ")");
  if (std::isfinite(r.analytic_delta)) out.notes.push_back("analytic delta = " + sig6(r.analytic_delta));
  if (r.excluded > 0) {
    out.notes.push_back("warning: " + std::to_string(r.excluded) + " realizations excluded for leakage > 0.1");
  }
}

inline std::string exponent_line(const std::string& label, const PowerLawFit& f, double predicted, bool pass) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%s: %.2f ± %.2f (predicted %.2f) %s", label.c_str(), f.exponent,
                f.exponent_stderr, predicted, pass ? "PASS" : "FAIL");
  return buf;
}

inline void run_scaling(const RunConfig& cfg, const RunOptions& opt, RunOutcome& out, Artifacts& art) {
  const ControlPath path = build_path(cfg.path);
  const auto& e = cfg.experiment;
  ScalingOptions so;
  so.p = e.p;
  so.q = e.q;
  so.tau0 = e.tau0;
  so.sigma0 = e.sigma0;
  so.epsilons = e.epsilons;
  so.n = e.n;
  so.mode = e.mode;
  so.pinning = cfg.noise.pinning;
  so.seed = cfg.seed;
  so.mc = {opt.threads, cfg.propagation.steps_per_unit_time};
  const ScalingResult r = scaling_study(path, so);

  std::vector<std::vector<double>> rows;
  std::vector<double> xs, ys;
  Json points = Json::array();
  for (const auto& pt : r.points) {
    rows.push_back({pt.epsilon, pt.tau, pt.sigma, pt.mc.delta_std, pt.mc.std_error, pt.mc.analytic_delta,
                    static_cast<double>(pt.mc.excluded)});
    xs.push_back(pt.epsilon);
    ys.push_back(pt.mc.delta_std);
  }
  art.csv("scaling.csv", {"epsilon", "tau", "sigma", "delta", "stderr", "analytic_delta", "excluded"}, rows);
  art.plot("scaling.dat", "epsilon", "delta", xs, ys);

  const Check c = Check::within("exponent", r.fit.exponent, r.predicted_exponent, 0.15);
  out.checks.push_back(c);
  Json fit = fit_json(r.fit);
  fit["predicted_exponent"] = r.predicted_exponent;
  fit["delta_at_1e-4"] = r.fit.predict(1e-4);
  out.summary["results"] = Json{{"points", r.points.size()}, {"fit", fit}};
  out.notes.push_back(exponent_line("exponent", r.fit, r.predicted_exponent, c.pass));
  out.notes.push_back("extrapolated delta at epsilon = 1e-4: " + sig6(r.fit.predict(1e-4)));
}

inline void run_timing(const RunConfig& cfg, const RunOptions& opt, RunOutcome& out, Artifacts& art) {
  const ControlPath path = build_path(cfg.path);
  const auto& e = cfg.experiment;
  const TimingResult r = timing_study(path, e.delta_t, e.t0s, cfg.propagation.steps_per_unit_time, opt.threads);
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < r.t0s.size(); ++i) rows.push_back({r.t0s[i], r.errors[i], r.predicted[i]});
  art.csv("timing.csv", {"t0", "error", "predicted"}, rows);
  art.plot("timing.dat", "t0", "error", r.t0s, r.errors);
  Json res{{"delta_t", r.delta_t}};
  if (r.fit) {
    const Check c = Check::within("timing slope", r.fit->exponent, -1.0, 0.2);
    out.checks.push_back(c);
    res["fit"] = fit_json(*r.fit);
    out.notes.push_back(exponent_line("slope", *r.fit, -1.0, c.pass));
  } else {
    res["fit"] = nullptr;
    out.notes.push_back("timing error vanishes on this path; no fit");
  }
  out.summary["results"] = res;
}

inline void run_convergence(const RunConfig& cfg, const RunOptions& opt, RunOutcome& out, Artifacts& art) {
  const ControlPath path = build_path(cfg.path);
  const ConvergenceResult r =
      convergence_study(path, cfg.experiment.epsilons, cfg.propagation.steps_per_unit_time, opt.threads);
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < r.epsilons.size(); ++i) {
    rows.push_back({r.epsilons[i], r.distances[i], r.leakages[i], r.angles[i]});
  }
  art.csv("convergence.csv", {"epsilon", "distance", "leakage", "angle"}, rows);
  art.plot("convergence.dat", "epsilon", "distance", r.epsilons, r.distances);
  Json res = Json::object();
  if (r.fit) {
    const Check c = Check::at_least("adiabatic slope", r.fit->exponent, 0.8);
    out.checks.push_back(c);
    res["fit"] = fit_json(*r.fit);
    char buf[120];
    std::snprintf(buf, sizeof buf, "slope: %.2f ± %.2f (at least 0.80) %s", r.fit->exponent,
                  r.fit->exponent_stderr, c.pass ? "PASS" : "FAIL");
    out.notes.push_back(buf);
  } else {
    res["fit"] = nullptr;
    out.notes.push_back("gate error vanishes at every epsilon; no fit");
  }
  out.summary["results"] = res;
}

inline std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace detail

/// Runs one configured experiment and writes summary.json, metadata.json, CSV and plot
/// files under `out_dir`. Never throws; failures come back as a nonzero exit code.
inline RunOutcome run(const RunConfig& cfg, const RunOptions& opt = {}) {
  RunOutcome out;
  out.subcommand = cfg.subcommand;
  const auto started = std::chrono::steady_clock::now();
  const std::string started_utc = detail::utc_now();
  detail::Artifacts art;
  try {
    out.summary = Json{{"schema_version", kSchemaVersion}, {"inputs", detail::inputs_json(cfg)}};
    switch (cfg.subcommand) {
      case Subcommand::gate: detail::run_gate(cfg, out, art); break;
      case Subcommand::holonomy: detail::run_holonomy(cfg, out, art); break;
      case Subcommand::noise_mc: detail::run_noise_mc(cfg, opt, out, art); break;
      case Subcommand::scaling: detail::run_scaling(cfg, opt, out, art); break;
      case Subcommand::timing: detail::run_timing(cfg, opt, out, art); break;
      case Subcommand::convergence: detail::run_convergence(cfg, opt, out, art); break;
    }
  } catch (const ConfigError& e) {
    out.exit_code = kExitConfig;
    out.error = e.what();
    return out;
  } catch (const std::invalid_argument& e) {
    out.exit_code = kExitConfig;
    out.error = e.what();
    return out;
  } catch (const std::exception& e) {
    out.exit_code = kExitNumerical;
    out.error = e.what();
    return out;
  }

  Json checks = Json::array();
  for (const auto& c : out.checks) checks.push_back(detail::check_json(c));
  out.summary["checks"] = checks;
  out.files = art.names();
  out.files.insert(out.files.begin(), {"summary.json", "metadata.json"});
  out.summary["files"] = out.files;

  for (const auto& c : out.checks) {
    if (!c.pass && out.exit_code == kExitOk) {
      out.exit_code = kExitNumerical;
      out.error = "tolerance failed: " + c.name + " = " + detail::sig6(c.measured) + ", needs " + c.relation + " " +
                  detail::sig6(c.target) + (c.relation == "within" ? " ± " + detail::sig6(c.tolerance) : "");
    }
  }

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  const Json meta{{"schema_version", kSchemaVersion},
                  {"started_utc", started_utc},
                  {"finished_utc", detail::utc_now()},
                  {"wall_seconds", wall},
                  {"threads", opt.threads},
                  {"output_dir", cfg.output.dir},
                  {"exit_code", out.exit_code}};
  try {
    const std::filesystem::path dir(cfg.output.dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
    art.write_all(dir);
    detail::Artifacts::write_file(dir / "summary.json", out.summary.dump(2) + "\n");
    detail::Artifacts::write_file(dir / "metadata.json", meta.dump(2) + "\n");
  } catch (const IoError& e) {
    out.exit_code = kExitIo;
    out.error = e.what();
  }
  return out;
}

/// Human-readable summary; the JSON written by run() is the authoritative record.
inline std::string emit_report(const RunOutcome& r) {
  std::ostringstream os;
  os << to_string(r.subcommand) << "\n";
  for (const auto& line : r.notes) os << line << "\n";
  for (const auto& c : r.checks) {
    os << "check " << c.name << ": " << detail::sig6(c.measured) << " " << c.relation << " " << detail::sig6(c.target);
    if (c.relation == "within") os << " ± " << detail::sig6(c.tolerance);
    os << " " << (c.pass ? "PASS" : "FAIL") << "\n";
  }
  if (r.exit_code != kExitOk) os << "error: " << r.error << " (exit " << r.exit_code << ")\n";
  return os.str();
}

/// Parallelism cap from the THREADS environment variable; 0 (all cores) when unset.
inline unsigned threads_from_env() {
  const char* v = std::getenv("THREADS");
  if (!v || !*v) return 0;
  const std::string_view s(v);
  unsigned n = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ConfigError(ConfigError::Kind::bad_value, "THREADS", 0, "expected a non-negative integer, got '" + std::string(s) + "'");
  }
  return n;
}

}  // namespace holo
