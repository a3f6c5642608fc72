#pragma once

// Command-line front end. `run` is kept separate from main() so the test
// suite can drive it in-process.

#include "hamred/hamred.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace hamred::cli {

using json = nlohmann::ordered_json;

enum ExitCode : int { ok = 0, checks_failed = 1, invalid_config = 2, numerical_failure = 3 };

namespace detail {

inline std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + csv::format_real(v[i]);
  return s;
}

/// JSON config values become flags unless the same flag is already on
/// the command line.
inline std::vector<std::string> merge_config(const std::vector<std::string>& args) {
  std::optional<std::string> path;
  std::vector<std::string> rest;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      require(i + 1 < args.size(), "--config needs a path");
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (!path) return rest;
  std::ifstream in(*path);
  require(static_cast<bool>(in), "cannot open config file '" + *path + "'");
  json cfg;
  try {
    cfg = json::parse(in);
  } catch (const json::exception& e) {
    throw ContractViolation("config file '" + *path + "' is not valid JSON: " + e.what());
  }
  require(cfg.is_object(), "config file must hold a JSON object");

  std::vector<std::string> out;
  std::size_t insert_at = 0;
  if (cfg.contains("command")) {
    require(cfg["command"].is_string(), "config 'command' must be a string");
    const bool has_sub = !rest.empty() && rest[0].rfind("-", 0) != 0;
    if (!has_sub) rest.insert(rest.begin(), cfg["command"].get<std::string>());
  }
  if (!rest.empty() && rest[0].rfind("-", 0) != 0) {
    out.push_back(rest[0]);
    insert_at = 1;
  }
  auto present = [&](const std::string& flag) {
    for (const auto& a : rest)
      if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
    return false;
  };
  for (const auto& [key, val] : cfg.items()) {
    if (key == "command") continue;
    const std::string flag = "--" + key;
    if (present(flag)) continue;
    if (val.is_boolean()) {
      if (val.get<bool>()) out.push_back(flag);
    } else if (val.is_array()) {
      std::vector<double> v;
      for (const auto& x : val) {
        require(x.is_number(), "config '" + key + "' must be an array of numbers");
        v.push_back(x.get<double>());
      }
      out.push_back(flag);
      out.push_back(join(v));
    } else if (val.is_number()) {
      out.push_back(flag);
      out.push_back(val.is_number_integer() ? std::to_string(val.get<long long>()) : csv::format_real(val.get<double>()));
    } else if (val.is_string()) {
      out.push_back(flag);
      out.push_back(val.get<std::string>());
    } else {
      throw ContractViolation("config '" + key + "' has an unsupported type");
    }
  }
  out.insert(out.end(), rest.begin() + static_cast<std::ptrdiff_t>(insert_at), rest.end());
  return out;
}

inline Vec3 vec3(const std::vector<double>& v, const std::string& what) {
  require(v.size() == 3, what + " needs exactly 3 comma-separated numbers");
  return {v[0], v[1], v[2]};
}

/// Writes to the file, or to `fallback` when the path is empty or "-".
inline void emit(const std::string& path, const std::string& text, std::ostream& fallback) {
  if (path.empty() || path == "-") {
    fallback << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  require(static_cast<bool>(f), "cannot write '" + path + "'");
  f << text;
}

inline std::string trajectory_csv(const Trajectory& tr) {
  std::ostringstream os;
  csv::write_trajectory(os, tr);
  return os.str();
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

inline json real(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

}  // namespace detail

struct Options {
  // shared
  std::string out, report;
  double t_end = 10.0, step = 1e-2;
  std::string method = "implicit_midpoint";
  double newton_tol = 1e-12;
  int newton_max_iter = 50;
  std::size_t record_every = 1;
  std::uint64_t seed = 12345;
  // rigid body
  std::vector<double> inertia{3.0, 2.0, 1.0};
  std::vector<double> m0{0.2, 1.0, 0.3};
  std::vector<double> hammer_m0{1e-3, 1.0, 1e-3};  // just off the intermediate axis
  bool full = false;
  // central force
  std::string hamiltonian = "kepler";
  std::vector<double> w0{1.0, 0.0, 1.0};
  double delta = 1e-6;
  // portrait
  std::string chart = "hyperboloid";
  double casimir = 0.6, radius = 1.0;
  std::string levels = "auto";
  int grid = 512, level_count = 12;
  double quantile = 0.5;
  std::optional<double> emphasize;
  std::vector<double> region;
  std::string csv_out;
  // nbody
  int n = 3, k = 2;
  std::vector<double> masses;
  std::string potential = "harmonic";
  bool remove_com = false;
  // verify
  std::string suite = "all";

  IntegratorConfig integrator() const {
    IntegratorConfig c;
    c.method = parse_method(method);
    c.step = step;
    c.newton_tol = newton_tol;
    c.newton_max_iter = newton_max_iter;
    c.validate();
    return c;
  }
};

namespace commands {

inline int simulate_rigid(const Options& o, std::ostream& out) {
  const auto I = rigid::make_inertia(o.inertia.at(0), o.inertia.at(1), o.inertia.at(2));
  const auto cfg = o.integrator();
  const Vec3 m0 = detail::vec3(o.m0, "--m0");
  const IntegrateOptions io{.record_every = o.record_every};
  if (o.full) {
    rigid::FullRigidState s;
    s.m = m0;
    const auto tr = rigid::integrate_full(I, s, o.t_end, cfg, io);
    detail::emit(o.out, detail::trajectory_csv(tr.flatten()), out);
  } else {
    const auto sys = rigid::rigid_body_structure(I);
    detail::emit(o.out, detail::trajectory_csv(integrate(sys.structure, sys.H, Vector(m0), o.t_end, cfg, io)), out);
  }
  return ExitCode::ok;
}

inline int hammer(const Options& o, std::ostream& out) {
  const auto I = rigid::make_inertia(o.inertia.at(0), o.inertia.at(1), o.inertia.at(2));
  rigid::FullRigidState s;
  s.m = detail::vec3(o.hammer_m0, "--m0");
  rigid::FullTrajectory tr;
  const auto r = rigid::hammer_throw(I, s, o.t_end, o.integrator(), &tr);
  json j;
  j["transit"] = r.transit;
  j["first_sign_change"] = r.first_sign_change ? json(*r.first_sign_change) : json(nullptr);
  j["extremum_start"] = r.extremum_start ? json(*r.extremum_start) : json(nullptr);
  j["extremum_end"] = r.extremum_end ? json(*r.extremum_end) : json(nullptr);
  j["m_start"] = {r.m_start[0], r.m_start[1], r.m_start[2]};
  j["m_end"] = {r.m_end[0], r.m_end[1], r.m_end[2]};
  j["twist_angle"] = r.twist_angle ? json(*r.twist_angle) : json(nullptr);
  j["geometric_phase"] = r.geometric_phase ? json(*r.geometric_phase) : json(nullptr);
  j["spatial_momentum_drift"] = tr.max_spatial_momentum_drift();
  for (const auto& a : r.axes)
    j["axes"].push_back({{"axis", a.axis + 1},
                         {"behaviour", std::string(rigid::to_string(a.behaviour))},
                         {"max_relative_deviation", a.max_relative_deviation}});
  if (!r.note.empty()) j["note"] = r.note;
  if (!o.csv_out.empty()) {
    std::ofstream f(o.csv_out);
    require(static_cast<bool>(f), "cannot write '" + o.csv_out + "'");
    Trajectory flat = tr.flatten();
    if (o.record_every > 1) {
      Trajectory thin;
      thin.state_names = flat.state_names;
      for (const auto& a : flat.audits) thin.audits.push_back({a.name, {}});
      for (std::size_t i = 0; i < flat.size(); i += o.record_every) {
        thin.times.push_back(flat.times[i]);
        thin.states.push_back(flat.states[i]);
        for (std::size_t a = 0; a < flat.audits.size(); ++a) thin.audits[a].values.push_back(flat.audits[a].values[i]);
      }
      flat = std::move(thin);
    }
    csv::write_trajectory(f, flat);
  }
  detail::emit(o.out, detail::dump(j), out);
  return ExitCode::ok;
}

inline int simulate_reduced(const Options& o, std::ostream& out) {
  const auto H = central::builtin_hamiltonian(o.hamiltonian);
  const auto sys = central::reduced_structure();
  const Vec3 w0 = detail::vec3(o.w0, "--w0");
  require(central::in_cone(w0), "--w0 must lie in the orbit-space cone (w1, w3 >= 0, w1 w3 >= w2^2)");
  const auto tr = integrate(sys.structure, H, Vector(w0), o.t_end, o.integrator(), {.record_every = o.record_every});
  detail::emit(o.out, detail::trajectory_csv(tr), out);
  return ExitCode::ok;
}

inline int reconstruct(const Options& o, std::ostream& out) {
  const auto H = central::builtin_hamiltonian(o.hamiltonian);
  const auto sys = central::reduced_structure();
  const Vec3 w0 = detail::vec3(o.w0, "--w0");
  require(central::in_cone(w0), "--w0 must lie in the orbit-space cone (w1, w3 >= 0, w1 w3 >= w2^2)");
  const auto frame = central::align_initial_frame(w0);
  const auto tr = integrate(sys.structure, H, Vector(w0), o.t_end, o.integrator());
  const auto rec = central::reconstruct_orbit(H, tr, frame.mu.norm());

  Trajectory flat = rec.flatten();
  if (o.record_every > 1) {
    Trajectory thin;
    thin.state_names = flat.state_names;
    for (std::size_t i = 0; i < flat.size(); ++i)
      if (i % o.record_every == 0 || i + 1 == flat.size()) {
        thin.times.push_back(flat.times[i]);
        thin.states.push_back(flat.states[i]);
      }
    flat = std::move(thin);
  }
  detail::emit(o.out, detail::trajectory_csv(flat), out);

  if (!o.report.empty()) {
    double mu = 0.0;
    for (const auto& s : rec.full_states) mu = std::max(mu, (s.q.cross(s.p) - frame.mu).norm());
    const auto rp = central::detect_relative_periodic(H, tr, frame.mu.norm(), {.delta = o.delta});
    json j;
    j["hamiltonian"] = o.hamiltonian;
    j["mu"] = {frame.mu[0], frame.mu[1], frame.mu[2]};
    j["mu_drift"] = mu;
    j["return"] = rp.kind == central::ReturnKind::periodic      ? "periodic"
                  : rp.kind == central::ReturnKind::fixed_point ? "relative_equilibrium"
                                                                : "none";
    j["stalled_near_equilibrium"] = rp.stalled;
    j["period"] = rp.period ? json(*rp.period) : json(nullptr);
    j["phase"] = rp.phase ? json(*rp.phase) : json(nullptr);
    if (rp.kind == central::ReturnKind::fixed_point)
      j["relative_equilibrium_period"] = central::relative_equilibrium_period(H, w0, frame.mu.norm());
    j["theta_final"] = rec.theta.back();
    detail::emit(o.report, detail::dump(j), out);
  }
  return ExitCode::ok;
}

inline std::vector<double> parse_levels(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(csv::parse_real(cell));
  return out;
}

inline int portrait_cmd(const Options& o, std::ostream& out) {
  using namespace hamred::portrait;
  const bool rigid_body = o.hamiltonian == "rigid" || o.hamiltonian == "rigid_body";
  const ChartKind kind = rigid_body ? ChartKind::sphere : parse_chart_kind(o.chart);
  require(!(rigid_body && kind != ChartKind::sphere), "the rigid body is charted on the sphere");
  SmoothFunction H = rigid_body ? rigid::kinetic_energy(rigid::make_inertia(o.inertia.at(0), o.inertia.at(1), o.inertia.at(2)))
                                : central::builtin_hamiltonian(o.hamiltonian);
  require(kind != ChartKind::sphere || rigid_body, "the sphere chart is for --hamiltonian rigid");
  Region region = default_region(o.hamiltonian);
  if (!o.region.empty()) {
    require(o.region.size() == 6, "--region needs w1min,w1max,w2min,w2max,w3min,w3max");
    region = {o.region[0], o.region[1], o.region[2], o.region[3], o.region[4], o.region[5]};
  }
  const LeafChart chart = make_chart(kind, kind == ChartKind::sphere ? o.radius : o.casimir, region);
  require(o.grid >= 2, "--grid must be at least 2");

  ContourOptions copt;
  copt.nx = copt.ny = o.grid;
  copt.emphasize = o.emphasize;
  if (!copt.emphasize && o.hamiltonian == "kepler") copt.emphasize = 0.0;  // escape energy
  if (!copt.emphasize && o.hamiltonian == "homoclinic") copt.emphasize = 2.0 * o.casimir;

  std::vector<double> levels = o.levels == "auto" ? auto_levels(sample(chart, H, copt.nx, copt.ny), o.level_count, o.quantile)
                                                  : parse_levels(o.levels);
  const ContourSet cs = extract_contours(chart, H, levels, copt);
  SvgStyle style;
  style.title = o.hamiltonian + " on " + std::string(to_string(kind)) + " " + csv::format_real(chart.param);
  detail::emit(o.out, emit_svg(cs, style), out);
  if (!o.csv_out.empty()) detail::emit(o.csv_out, emit_csv(cs), out);
  if (!o.report.empty()) {
    json j;
    j["chart"] = std::string(to_string(kind));
    j["param"] = chart.param;
    j["grid"] = o.grid;
    j["cell_diameter"] = cs.cell_diameter;
    for (const auto& l : cs.levels)
      j["levels"].push_back({{"value", l.value}, {"polylines", l.polylines.size()}, {"degenerate", l.degenerate},
                             {"emphasized", l.emphasized}});
    for (const auto& m : cs.markers)
      j["markers"].push_back({{"tag", m.tag}, {"w", {m.w[0], m.w[1], m.w[2]}}, {"H", m.H}});
    j["max_leaf_error"] = max_leaf_error(cs);
    j["max_level_error"] = max_level_error(cs, H);
    detail::emit(o.report, detail::dump(j), out);
  }
  return ExitCode::ok;
}

inline int nbody_reduce(const Options& o, std::ostream& out) {
  require(o.n >= 1 && o.k >= 1, "--n and --k must be positive");
  std::vector<double> masses = o.masses.empty() ? std::vector<double>(o.k, 1.0) : o.masses;
  require(static_cast<int>(masses.size()) == o.k, "--masses needs one value per body");
  const auto H = sp2k::collective_pairwise_hamiltonian(masses, sp2k::pair_potential(o.potential));
  auto state = sp2k::random_state(o.n, o.k, o.seed);
  if (o.remove_com) state = sp2k::remove_center_of_mass(state, masses);
  const auto X0 = sp2k::momentum_map_phi(state);
  const auto sys = sp2k::sp2k_structure(o.k, o.n);
  const auto cfg = o.integrator();
  const auto tr = integrate(sys.structure, H, X0.coordinates(), o.t_end, cfg, {.record_every = o.record_every});

  std::ostringstream os;
  std::vector<std::string> header{"t"};
  for (int r = 0; r < 2 * o.k; ++r)
    for (int c = 0; c < 2 * o.k; ++c) header.push_back("X" + std::to_string(r + 1) + "_" + std::to_string(c + 1));
  for (const auto& a : tr.audits) header.push_back(a.name);
  csv::write_header(os, header);
  for (std::size_t i = 0; i < tr.size(); ++i) {
    std::vector<double> row{tr.times[i]};
    const Matrix X = sp2k::Sp2kDualPoint::from_coordinates(tr.states[i], o.k).assemble();
    for (int r = 0; r < 2 * o.k; ++r)
      for (int c = 0; c < 2 * o.k; ++c) row.push_back(X(r, c));
    for (const auto& a : tr.audits) row.push_back(a.values[i]);
    csv::write_row(os, row);
  }
  detail::emit(o.out, os.str(), out);

  if (!o.report.empty()) {
    // the canonical flow of H o phi pushed through phi must land on the same X
    const auto lift = sp2k::collective_lift(H, o.n, o.k);
    const auto P = canonical_structure(o.n * o.k);
    IntegratorConfig rk = cfg;
    rk.method = Method::rk4;
    const auto ctr = integrate(P, lift, state.packed(), o.t_end, rk, {.record_every = 1u << 30});
    const Vector cend = sp2k::momentum_map_phi(sp2k::ManyBodyState::unpack(ctr.back(), o.n, o.k)).coordinates();
    const Vector rend = integrate(sys.structure, H, X0.coordinates(), o.t_end, rk, {.record_every = 1u << 30}).back();
    const auto audit = sp2k::phi_rank_audit(o.n, o.k, o.seed);
    json j;
    j["n"] = o.n;
    j["k"] = o.k;
    j["potential"] = o.potential;
    j["masses"] = masses;
    j["lie_poisson_dimension"] = sp2k::coordinate_count(o.k);
    j["phi_jacobian_rank"] = audit.jacobian_rank;
    j["image_dimension"] = audit.image_dimension;
    j["leaf_dimension"] = audit.leaf_dimension;
    j["numeric_leaf_dimension"] = audit.numeric_leaf_dimension;
    j["gram_rank"] = numerical_rank(X0.gram());
    for (const auto& a : tr.audits) j["drift"][a.name] = tr.max_drift(a.name);
    j["canonical_consistency"] = (cend - rend).norm() / std::max(1.0, rend.norm());  // both rk4, same step
    detail::emit(o.report, detail::dump(j), out);
  }
  return ExitCode::ok;
}

inline int verify(const Options& o, std::ostream& out) {
  const auto rep = verify::run_suite(o.suite, o.seed);
  std::size_t width = 10;
  for (const auto& c : rep.checks) width = std::max(width, c.name.size());
  out << "suite      " << std::string(width - 5, ' ') << "check  status  value           bound\n";
  char buf[256];
  for (const auto& c : rep.checks) {
    std::snprintf(buf, sizeof buf, "%-10s %-*s  %-6s  %-14.6g  %s %.3g\n", c.suite.c_str(), static_cast<int>(width),
                  c.name.c_str(), c.passed ? "PASS" : "FAIL", c.value, c.comparison.c_str(), c.tolerance);
    out << buf;
  }
  out << rep.checks.size() - rep.failures() << "/" << rep.checks.size() << " checks passed\n";
  if (!o.report.empty()) {
    json j;
    j["suite"] = o.suite;
    j["seed"] = o.seed;
    j["passed"] = rep.all_passed();
    for (const auto& c : rep.checks)
      j["checks"].push_back({{"suite", c.suite}, {"name", c.name}, {"passed", c.passed}, {"value", detail::real(c.value)},
                             {"comparison", c.comparison}, {"bound", c.tolerance}, {"detail", c.detail}});
    detail::emit(o.report, detail::dump(j), out);
  }
  return rep.all_passed() ? ExitCode::ok : ExitCode::checks_failed;
}

}  // namespace commands

inline int run(std::vector<std::string> args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  Options o;
  CLI::App app{"Hamiltonian reduction toolkit: rigid body, central force, sp(2k) reduction, phase portraits"};
  app.set_help_flag("--help", "print this help");  // -h is taken by the step size
  app.require_subcommand(1);
  app.set_version_flag("--version", "0.1.0");
  app.add_option("--config", "JSON file with option values; flags on the command line win");

  auto add_integrator = [&](CLI::App* s) {
    s->add_option("--t", o.t_end, "final time")->check(CLI::PositiveNumber);
    s->add_option("--h", o.step, "time step")->check(CLI::PositiveNumber);
    s->add_option("--method", o.method, "rk4 or implicit_midpoint");
    s->add_option("--newton-tol", o.newton_tol)->check(CLI::PositiveNumber);
    s->add_option("--newton-max-iter", o.newton_max_iter)->check(CLI::PositiveNumber);
    s->add_option("--record-every", o.record_every, "keep every N-th step")->check(CLI::PositiveNumber);
  };
  auto add_vec = [](CLI::App* s, const std::string& name, std::vector<double>& v, const std::string& help) {
    return s->add_option(name, v, help)->delimiter(',');
  };

  auto* rigid_cmd = app.add_subcommand("simulate-rigid", "Euler equations, or the full attitude motion with --full");
  add_integrator(rigid_cmd);
  add_vec(rigid_cmd, "--inertia", o.inertia, "I1,I2,I3 with I1 >= I2 >= I3 > 0");
  add_vec(rigid_cmd, "--m0", o.m0, "initial body angular momentum");
  rigid_cmd->add_flag("--full", o.full, "integrate attitude and momentum");
  rigid_cmd->add_option("--out", o.out, "CSV path (default stdout)");

  auto* hammer_cmd = app.add_subcommand("hammer", "intermediate-axis flip with twist and phase report");
  add_integrator(hammer_cmd);
  add_vec(hammer_cmd, "--inertia", o.inertia, "I1,I2,I3");
  add_vec(hammer_cmd, "--m0", o.hammer_m0, "initial body angular momentum (default 0.001,1,0.001; t=100, h=0.001)");
  hammer_cmd->add_option("--out", o.out, "JSON report path (default stdout)");
  hammer_cmd->add_option("--csv", o.csv_out, "attitude/momentum frames as CSV");

  auto* red_cmd = app.add_subcommand("simulate-reduced", "reduced central-force flow in (w1, w2, w3)");
  add_integrator(red_cmd);
  red_cmd->add_option("--hamiltonian", o.hamiltonian, "kepler, homoclinic, homoclinic_linear, cosine");
  add_vec(red_cmd, "--w0", o.w0, "initial w1,w2,w3");
  red_cmd->add_option("--out", o.out, "CSV path (default stdout)");

  auto* rec_cmd = app.add_subcommand("reconstruct", "reduced flow lifted back to (q, p)");
  add_integrator(rec_cmd);
  rec_cmd->add_option("--hamiltonian", o.hamiltonian);
  add_vec(rec_cmd, "--w0", o.w0, "initial w1,w2,w3 (strictly inside the cone)");
  rec_cmd->add_option("--delta", o.delta, "relative return tolerance for period detection")->check(CLI::PositiveNumber);
  rec_cmd->add_option("--out", o.out, "CSV path (default stdout)");
  rec_cmd->add_option("--report", o.report, "JSON with mu audit, period and phase");

  auto* por_cmd = app.add_subcommand("portrait", "level sets of H on a symplectic leaf");
  por_cmd->add_option("--hamiltonian", o.hamiltonian, "kepler, homoclinic, homoclinic_linear, cosine, rigid");
  por_cmd->add_option("--chart", o.chart, "hyperboloid, cone, plane, sphere");
  por_cmd->add_option("--casimir", o.casimir, "leaf value C");
  por_cmd->add_option("--radius", o.radius, "sphere radius |m|")->check(CLI::PositiveNumber);
  add_vec(por_cmd, "--inertia", o.inertia, "I1,I2,I3 (rigid body)");
  por_cmd->add_option("--levels", o.levels, "'auto' or comma-separated H values");
  por_cmd->add_option("--level-count", o.level_count, "number of auto levels")->check(CLI::PositiveNumber);
  por_cmd->add_option("--quantile", o.quantile, "upper quantile for auto levels")->check(CLI::Range(0.0, 1.0));
  por_cmd->add_option("--grid", o.grid, "grid points per side");
  por_cmd->add_option("--emphasize", o.emphasize, "level drawn in bold");
  add_vec(por_cmd, "--region", o.region, "w1min,w1max,w2min,w2max,w3min,w3max");
  por_cmd->add_option("--out", o.out, "SVG path (default stdout)");
  por_cmd->add_option("--csv", o.csv_out, "vertex CSV path");
  por_cmd->add_option("--report", o.report, "JSON summary path");

  auto* nb_cmd = app.add_subcommand("nbody-reduce", "k bodies in R^n as a Lie-Poisson system on sp(2k)*");
  add_integrator(nb_cmd);
  nb_cmd->add_option("--n", o.n, "space dimension")->check(CLI::PositiveNumber);
  nb_cmd->add_option("--k", o.k, "number of bodies")->check(CLI::PositiveNumber);
  add_vec(nb_cmd, "--masses", o.masses, "one mass per body (default all 1)");
  nb_cmd->add_option("--potential", o.potential, "harmonic, linear, gravity");
  nb_cmd->add_option("--seed", o.seed, "seed of the Gaussian initial state");
  nb_cmd->add_flag("--remove-com", o.remove_com, "centre the initial state");
  nb_cmd->add_option("--out", o.out, "CSV path (default stdout)");
  nb_cmd->add_option("--report", o.report, "JSON audit path");

  auto* ver_cmd = app.add_subcommand("verify", "run the invariant/audit suite");
  ver_cmd->add_option("--suite", o.suite, "structure, dynamics, reduction, portrait, all");
  ver_cmd->add_option("--seed", o.seed, "seed for randomized checks");
  ver_cmd->add_option("--report", o.report, "JSON report path");

  try {
    args = detail::merge_config(args);
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return ExitCode::ok;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return ExitCode::ok;
  } catch (const CLI::CallForVersion& e) {
    out << e.what() << "\n";
    return ExitCode::ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return ExitCode::invalid_config;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return ExitCode::invalid_config;
  }

  try {
    if (*rigid_cmd) return commands::simulate_rigid(o, out);
    if (*hammer_cmd) {
      // the flip needs a long horizon to show up
      if (hammer_cmd->count("--t") == 0) o.t_end = 100.0;
      if (hammer_cmd->count("--h") == 0) o.step = 1e-3;
      return commands::hammer(o, out);
    }
    if (*red_cmd) return commands::simulate_reduced(o, out);
    if (*rec_cmd) return commands::reconstruct(o, out);
    if (*por_cmd) return commands::portrait_cmd(o, out);
    if (*nb_cmd) return commands::nbody_reduce(o, out);
    if (*ver_cmd) return commands::verify(o, out);
  } catch (const SolverDivergence& e) {
    err << "numerical failure: " << e.what() << " (t=" << e.time() << ", iterations=" << e.iterations() << ")\n";
    return ExitCode::numerical_failure;
  } catch (const DegenerateData& e) {
    err << "numerical failure: " << e.what() << "\n";
    return ExitCode::numerical_failure;
  } catch (const SingularChart& e) {
    err << "numerical failure: " << e.what() << "\n";
    return ExitCode::numerical_failure;
  } catch (const std::invalid_argument& e) {  // ContractViolation, UnknownName
    err << "invalid configuration: " << e.what() << "\n";
    return ExitCode::invalid_config;
  } catch (const std::out_of_range& e) {
    err << "invalid configuration: " << e.what() << "\n";
    return ExitCode::invalid_config;
  }
  return ExitCode::invalid_config;
}

inline int run(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return run(std::vector<std::string>(argv + 1, argv + argc), out, err);
}

}  // namespace hamred::cli
