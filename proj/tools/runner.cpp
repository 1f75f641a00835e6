#include "runner.hpp"

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <limits>
#include <sstream>

#include "wwgm/analytic_oracle.hpp"
#include "wwgm/contraction_lab.hpp"
#include "wwgm/errors.hpp"

namespace wwgm::cli {

using nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Header plus rows of numbers, written round-trip exact.
class Table {
 public:
  explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  void add(const std::vector<double>& row) {
    if (row.size() != columns_.size()) throw std::logic_error("Table: row width mismatch");
    rows_.push_back(row);
  }

  std::string str() const {
    std::string out;
    for (std::size_t c = 0; c < columns_.size(); ++c) out += (c ? "," : "") + columns_[c];
    out += '\n';
    for (const auto& row : rows_) {
      for (std::size_t c = 0; c < row.size(); ++c) out += (c ? "," : "") + fmt(row[c]);
      out += '\n';
    }
    return out;
  }

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<double>> rows_;
};

std::vector<std::string> axis_names(const std::string& prefix, int n) {
  std::vector<std::string> out;
  for (const char* v : {"p", "x"})
    for (int i = 0; i < n; ++i) out.push_back(prefix + v + (n == 1 ? "" : std::to_string(i + 1)));
  return out;
}

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

/// Collects artifacts of one run in the output directory.
class Artifacts {
 public:
  explicit Artifacts(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

  void write(const std::string& name, const std::string& content) {
    write_atomic(dir_ / name, content);
    files_.push_back(name);
  }

  void write_field(const std::string& stem, const PhaseFunction& f) {
    std::ostringstream bin(std::ios::binary), csv;
    write_binary(bin, f);
    wwgm::write_csv(csv, f);
    write(stem + ".bin", bin.str());
    write(stem + ".csv", csv.str());
  }

  const std::vector<std::string>& files() const { return files_; }

 private:
  fs::path dir_;
  std::vector<std::string> files_;
};

CoherentLabel origin(int n) { return {std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)}; }

std::vector<CoherentLabel> labels_or(const ExperimentConfig& c, std::vector<CoherentLabel> fallback) {
  return c.labels.empty() ? fallback : c.labels;
}

std::vector<ObservableSpec> observables_or(const ExperimentConfig& c, const std::vector<std::string>& fallback) {
  if (!c.observables.empty()) return c.observables;
  std::vector<ObservableSpec> out;
  for (const auto& m : fallback) out.push_back({m, std::nullopt});
  return out;
}

std::string observable_name(const ObservableSpec& o) {
  if (!o.gaussian) return o.monomial;
  return "gaussian";
}

ordered_json label_json(const CoherentLabel& a) { return {{"p", a.p}, {"x", a.x}}; }

void require_unit_k(const ExperimentConfig& c, const std::string& what) {
  if (c.k != 1.0) throw ValidationError(what + " runs at k = 1; k applies to bracket pictures, star-check, sweeps and coset flows");
}

/// Peak of a Wigner density, in label coordinates (the density is centred at twice the label).
std::vector<double> density_peak_label(const PhaseFunction& rho) {
  auto peak = locate_peak(rho).refined;
  for (auto& v : peak) v *= 0.5;
  return peak;
}

// ---------------------------------------------------------------------------

ordered_json run_coherent(const ExperimentConfig& c, Artifacts& out) {
  require_unit_k(c, "coherent");
  const PhaseGrid grid = c.make_grid();
  const StarMethod method = c.make_star_method();
  ordered_json states = ordered_json::array();
  const auto labels = labels_or(c, {origin(grid.dim())});
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto& a = labels[i];
    check_label_margin(a, grid);
    const PhaseFunction phi = coherent_state(a, grid);
    const PhaseFunction rho = wigner(phi, method);
    const std::string suffix = labels.size() == 1 ? "" : "_" + std::to_string(i);
    out.write_field("state" + suffix, phi);
    out.write_field("wigner" + suffix, rho);
    const Peak peak = locate_peak(rho);
    states.push_back({{"label", label_json(a)},
                      {"norm", norm(phi)},
                      {"wigner_trace", trace_pair(PhaseFunction::constant(grid, 1.0), rho).real()},
                      {"wigner_max_imag", rho.max_imag()},
                      {"wigner_peak_grid_point", peak.grid_point},
                      {"wigner_peak_label", density_peak_label(rho)}});
  }
  return {{"states", states}};
}

ordered_json run_star_check(const ExperimentConfig& c, Artifacts& out) {
  const PhaseGrid grid = c.make_grid();
  const StarMethod method = c.make_star_method();
  const ContractionParam kp(c.k);
  const auto specs = observables_or(c, {"x", "p", "x^2"});
  std::vector<PhaseFunction> obs;
  for (const auto& s : specs) obs.push_back(make_observable(s, grid));
  const std::size_t m = obs.size();

  Table table({"check", "left", "middle", "right", "value", "expected", "abs_error"});
  ordered_json checks = ordered_json::array();
  auto record = [&](const std::string& check, int code, int l, int mid, int r, double value, double expected,
                    double err) {
    table.add({static_cast<double>(code), static_cast<double>(l), static_cast<double>(mid), static_cast<double>(r),
               value, expected, err});
    ordered_json entry{{"check", check}, {"left", observable_name(specs[l])}};
    if (mid >= 0) entry["middle"] = observable_name(specs[mid]);
    if (r >= 0) entry["right"] = observable_name(specs[r]);
    entry["value"] = value;
    entry["expected"] = std::isnan(expected) ? ordered_json(nullptr) : ordered_json(expected);
    entry["abs_error"] = std::isnan(err) ? ordered_json(nullptr) : ordered_json(err);
    checks.push_back(entry);
  };

  const PhaseFunction one = PhaseFunction::constant(grid, 1.0);
  double worst = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double left = max_abs_diff(star(one, obs[i], method, kp), obs[i]);
    const double right = max_abs_diff(star(obs[i], one, method, kp), obs[i]);
    const double e = std::max(left, right);
    worst = std::max(worst, e);
    record("identity", 0, static_cast<int>(i), -1, -1, e, 0.0, e);
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      const PhaseFunction comm = moyal_bracket(obs[i], obs[j], method, kp);
      double expected = kNaN, err = kNaN;
      if (obs[i].is_polynomial() && obs[j].is_polynomial()) {
        const Polynomial& a = obs[i].polynomial();
        const Polynomial& b = obs[j].polynomial();
        const PhaseFunction exact = PhaseFunction::from_polynomial(grid, star(a, b, kp) - star(b, a, kp));
        expected = exact.sup_norm();
        err = max_abs_diff(comm, exact);
        worst = std::max(worst, err);
      }
      record("commutator", 1, static_cast<int>(i), static_cast<int>(j), -1, comm.sup_norm(), expected, err);
    }
  }
  std::vector<std::array<std::size_t, 3>> triples;
  if (m >= 3) {
    triples = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}};
  } else if (m == 2) {
    triples = {{0, 1, 0}, {1, 0, 1}};
  } else {
    triples = {{0, 0, 0}};
  }
  for (const auto& [a, b, d] : triples) {
    const PhaseFunction lhs = star(star(obs[a], obs[b], method, kp), obs[d], method, kp);
    const PhaseFunction rhs = star(obs[a], star(obs[b], obs[d], method, kp), method, kp);
    const double scale = std::max(1.0, lhs.sup_norm());
    const double e = max_abs_diff(lhs, rhs) / scale;
    worst = std::max(worst, e);
    record("associativity", 2, static_cast<int>(a), static_cast<int>(b), static_cast<int>(d), e, 0.0, e);
  }
  out.write("star_check.csv", table.str());
  return {{"method", c.star_method},
          {"k", c.k},
          {"check_codes", {{"identity", 0}, {"commutator", 1}, {"associativity", 2}}},
          {"worst_abs_error", worst},
          {"checks", checks}};
}

ordered_json run_evolve(const ExperimentConfig& c, Artifacts& out) {
  const PhaseGrid grid = c.make_grid();
  const HamiltonianGenerator g = c.make_hamiltonian();
  const EvolutionConfig cfg{c.dt, c.steps, c.save_every};
  cfg.validate();
  const ContractionParam kp(c.k);
  const int n = grid.dim();
  const CoherentLabel a = labels_or(c, {origin(n)}).front();
  const PhaseFunction generator = g.on(grid);
  const PhaseFunction one = PhaseFunction::constant(grid, 1.0);

  Trajectory traj;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  const auto peak_columns = concat({}, axis_names("peak_", n));
  const bool state_picture = c.picture == "schrodinger";
  const bool density_picture = c.picture == "liouville" || c.picture == "classical_liouville";

  if (state_picture) {
    require_unit_k(c, "schrodinger evolution");
    check_label_margin(a, grid);
    traj = schrodinger_evolve(coherent_state(a, grid), g, cfg);
    columns = concat({"t", "norm", "energy"}, peak_columns);
    for (std::size_t s = 0; s < traj.states.size(); ++s) {
      const auto& phi = traj.states[s];
      std::vector<double> row{traj.times[s], norm(phi), inner(phi, star(generator, phi)).real()};
      for (double v : locate_peak(phi).refined) row.push_back(v);
      rows.push_back(row);
    }
  } else if (density_picture) {
    check_label_margin(a, grid);
    const PhaseFunction rho0 = wigner(coherent_state(a, grid));
    const bool classical = c.picture == "classical_liouville";
    if (classical && c.k != 1.0) throw ValidationError("classical_liouville has no contraction parameter; use k = 1");
    traj = classical ? classical_liouville_evolve(rho0, g, cfg) : liouville_evolve(rho0, g, cfg, kp);
    columns = concat({"t", "trace", "energy"}, peak_columns);
    for (std::size_t s = 0; s < traj.states.size(); ++s) {
      const auto& rho = traj.states[s];
      std::vector<double> row{traj.times[s], trace_pair(one, rho).real(), trace_pair(generator, rho).real()};
      for (double v : density_peak_label(rho)) row.push_back(v);
      rows.push_back(row);
    }
  } else {
    const auto specs = observables_or(c, {"x"});
    const PhaseFunction alpha = make_observable(specs.front(), grid);
    check_label_margin(a, grid);
    const PhaseFunction rho0 = wigner(coherent_state(a, grid));
    const bool classical = c.picture == "classical_heisenberg";
    if (classical && c.k != 1.0) throw ValidationError("classical_heisenberg has no contraction parameter; use k = 1");
    traj = classical ? classical_heisenberg_evolve(alpha, g, cfg) : heisenberg_evolve(alpha, g, cfg, kp);
    columns = {"t", "sup_norm", "expectation"};
    for (std::size_t s = 0; s < traj.states.size(); ++s)
      rows.push_back({traj.times[s], traj.states[s].sup_norm(), trace_pair(traj.states[s], rho0).real()});
  }

  Table table(columns);
  for (const auto& r : rows) table.add(r);
  out.write("trajectory.csv", table.str());
  out.write_field("final_state", traj.final_state());

  ordered_json final_row;
  for (std::size_t i = 0; i < columns.size(); ++i) final_row[columns[i]] = rows.back()[i];
  return {{"picture", c.picture},
          {"hamiltonian", g.name},
          {"generator", g.expression.to_string()},
          {"k", c.k},
          {"label", label_json(a)},
          {"invariant_initial", traj.invariant_initial},
          {"invariant_drift", traj.invariant_drift},
          {"max_step_drift", traj.max_step_drift},
          {"final", final_row}};
}

ordered_json run_sweep(const ExperimentConfig& c, Artifacts& out) {
  SweepSpec spec{c.k_values, c.make_grid()};
  spec.validate();
  const int n = spec.grid.dim();
  SweepResult result;
  if (c.sweep == "overlap") {
    CoherentLabel b = origin(n);
    b.x[0] = 1.0;
    const auto labels = labels_or(c, {origin(n), b});
    if (labels.size() < 2) throw ValidationError("overlap sweep needs two labels");
    result = overlap_decay_sweep(labels[0], labels[1], spec);
  } else if (c.sweep == "left_operator") {
    result = left_operator_sweep(labels_or(c, {origin(n)}).front(), spec);
  } else if (c.sweep == "commutativization" || c.sweep == "bracket") {
    const bool bracket = c.sweep == "bracket";
    const auto specs = observables_or(c, bracket ? std::vector<std::string>{"x^3", "p^3"}
                                                 : std::vector<std::string>{"x", "p"});
    if (specs.size() < 2 || specs[0].gaussian || specs[1].gaussian)
      throw ValidationError(c.sweep + " sweep needs two monomial observables");
    const Polynomial alpha = parse_monomial(n, specs[0].monomial);
    const Polynomial beta = parse_monomial(n, specs[1].monomial);
    result = bracket ? bracket_convergence(alpha, beta, spec) : product_commutativization(alpha, beta, spec);
  } else {
    CosetPoint point{std::vector<double>(n, 0.5), std::vector<double>(n, 1.5), 0.0};
    if (!c.coset.points.empty()) point = c.coset.points.front();
    result = theta_decoupling_scan(c.make_coset_params(), point, spec);
  }
  std::ostringstream csv;
  write_csv(csv, result);
  out.write("sweep_" + c.sweep + ".csv", csv.str());
  return ordered_json::parse(summary_json(result));
}

ordered_json run_coset(const ExperimentConfig& c, Artifacts& out) {
  const int n = c.grid.n;
  const CosetAlgebraParams params = c.make_coset_params();
  std::vector<CosetPoint> points = c.coset.points;
  if (points.empty()) points.push_back({std::vector<double>(n, 0.5), std::vector<double>(n, 1.5), 0.0});

  const auto coords = axis_names("", n);
  std::vector<std::string> xs(coords.begin() + n, coords.end());
  std::vector<std::string> dxs;
  for (const auto& v : xs) dxs.push_back("d" + v);

  Table phase(concat(concat({"point", "k"}, coords), concat(concat({"theta"}, axis_names("d", n)), {"dtheta"})));
  Table config(concat(concat({"point"}, xs), concat(concat({"theta"}, dxs), {"dtheta"})));
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& pt = points[i];
    if (static_cast<int>(pt.p.size()) != n || static_cast<int>(pt.x.size()) != n)
      throw ValidationError("coset point dimension does not match grid.n");
    for (double k : c.k_values) {
      const CosetPoint d = phase_space_coset_flow(params, pt, ContractionParam(k));
      std::vector<double> row{static_cast<double>(i), k};
      row.insert(row.end(), pt.p.begin(), pt.p.end());
      row.insert(row.end(), pt.x.begin(), pt.x.end());
      row.push_back(pt.theta);
      row.insert(row.end(), d.p.begin(), d.p.end());
      row.insert(row.end(), d.x.begin(), d.x.end());
      row.push_back(d.theta);
      phase.add(row);
    }
    const ConfigPoint d = config_coset_flow(params, ConfigPoint{pt.x, pt.theta});
    std::vector<double> row{static_cast<double>(i)};
    row.insert(row.end(), pt.x.begin(), pt.x.end());
    row.push_back(pt.theta);
    row.insert(row.end(), d.x.begin(), d.x.end());
    row.push_back(d.theta);
    config.add(row);
  }
  out.write("coset_phase_space.csv", phase.str());
  out.write("coset_config.csv", config.str());
  return {{"points", points.size()}, {"k_values", c.k_values}};
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

void write_atomic(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write " + tmp.string());
    os.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!os) throw std::runtime_error("write failed: " + tmp.string());
  }
  fs::rename(tmp, path);
}

RunReport run(const ExperimentConfig& config, const fs::path& out_dir) {
  Artifacts out(out_dir);
  ordered_json summary;
  if (config.experiment == "coherent") {
    summary = run_coherent(config, out);
  } else if (config.experiment == "star-check") {
    summary = run_star_check(config, out);
  } else if (config.experiment == "evolve") {
    summary = run_evolve(config, out);
  } else if (config.experiment == "sweep-k") {
    summary = run_sweep(config, out);
  } else if (config.experiment == "coset") {
    summary = run_coset(config, out);
  } else {
    throw ValidationError("unknown experiment '" + config.experiment + "'");
  }
  out.write(config.experiment + ".json", summary.dump(2) + "\n");
  out.write("config.json", config_to_json(config).dump(2) + "\n");

  ordered_json manifest{{"tool", "wwgm"},
                        {"experiment", config.experiment},
                        {"created_utc", utc_timestamp()},
                        {"units", {{"hbar", kHbar}, {"commutator", "[X, P] = 2i"}}},
                        {"csv_columns", "p..., x... are phase-space coordinates in units with hbar = 2; "
                                        "peak_* columns are coherent-state labels (half the expectation values)"},
                        {"files", out.files()}};
  write_atomic(out_dir / "manifest.json", manifest.dump(2) + "\n");
  return {out.files(), summary};
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ValidationError*>(&e)) return 2;
  if (dynamic_cast<const AccuracyError*>(&e)) return 3;
  return 1;
}

std::string error_record(const std::exception& e) {
  const int code = exit_code_for(e);
  const char* kind = code == 2 ? "validation" : code == 3 ? "accuracy" : "internal";
  return ordered_json{{"error", kind}, {"message", e.what()}, {"exit_code", code}}.dump();
}

}  // namespace wwgm::cli
