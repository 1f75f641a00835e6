#include "experiment_config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>

#include "wwgm/errors.hpp"

namespace wwgm::cli {

using nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(const std::string& msg) { throw ValidationError("config: " + msg); }

void reject_unknown(const ordered_json& j, const std::string& where, const std::set<std::string>& known) {
  if (!j.is_object()) fail(where + " must be an object");
  for (const auto& [key, value] : j.items())
    if (!known.count(key)) fail("unknown key '" + key + "' in " + where);
}

double get_number(const ordered_json& j, const std::string& key) {
  if (!j.is_number()) fail("'" + key + "' must be a number");
  return j.get<double>();
}

int get_int(const ordered_json& j, const std::string& key) {
  if (!j.is_number_integer()) fail("'" + key + "' must be an integer");
  return j.get<int>();
}

std::string get_string(const ordered_json& j, const std::string& key) {
  if (!j.is_string()) fail("'" + key + "' must be a string");
  return j.get<std::string>();
}

/// Accepts a number (n = 1 shorthand) or an array of numbers.
std::vector<double> get_vector(const ordered_json& j, const std::string& key) {
  if (j.is_number()) return {j.get<double>()};
  if (!j.is_array()) fail("'" + key + "' must be a number or an array of numbers");
  std::vector<double> out;
  for (const auto& v : j) out.push_back(get_number(v, key));
  return out;
}

std::string check_catalog(const std::string& value, const std::vector<std::string>& catalog,
                          const std::string& key) {
  if (std::find(catalog.begin(), catalog.end(), value) == catalog.end()) {
    std::string names;
    for (const auto& c : catalog) names += (names.empty() ? "" : ", ") + c;
    fail("'" + key + "' = '" + value + "' is not one of: " + names);
  }
  return value;
}

void check_dim(const std::vector<double>& v, int n, const std::string& key) {
  if (static_cast<int>(v.size()) != n)
    fail("'" + key + "' has " + std::to_string(v.size()) + " components, grid has n = " + std::to_string(n));
}

bool same_label(const CoherentLabel& a, const CoherentLabel& b) { return a.p == b.p && a.x == b.x; }

bool same_point(const CosetPoint& a, const CosetPoint& b) {
  return a.p == b.p && a.x == b.x && a.theta == b.theta;
}

ordered_json label_json(const CoherentLabel& a) { return {{"p", a.p}, {"x", a.x}}; }

}  // namespace

bool CosetSpec::operator==(const CosetSpec& o) const {
  return omega == o.omega && p_bar == o.p_bar && x_bar == o.x_bar && theta_bar == o.theta_bar &&
         std::equal(points.begin(), points.end(), o.points.begin(), o.points.end(), same_point);
}

bool ExperimentConfig::operator==(const ExperimentConfig& o) const {
  return experiment == o.experiment && grid == o.grid &&
         std::equal(labels.begin(), labels.end(), o.labels.begin(), o.labels.end(), same_label) &&
         observables == o.observables && hamiltonian == o.hamiltonian && mass == o.mass && dt == o.dt &&
         steps == o.steps && save_every == o.save_every && picture == o.picture && k == o.k &&
         k_values == o.k_values && sweep == o.sweep && star_method == o.star_method &&
         star_order == o.star_order && coset == o.coset && output_dir == o.output_dir;
}

PhaseGrid ExperimentConfig::make_grid() const { return PhaseGrid(grid.n, grid.N, grid.L); }

HamiltonianGenerator ExperimentConfig::make_hamiltonian() const {
  const int n = grid.n;
  if (hamiltonian == "zero") return HamiltonianGenerator::zero(n);
  if (hamiltonian == "harmonic") return HamiltonianGenerator::harmonic(n);
  if (hamiltonian == "free") return HamiltonianGenerator::free_particle(n, mass);
  if (hamiltonian == "classical_harmonic") return HamiltonianGenerator::classical_harmonic(n);
  if (hamiltonian == "cubic") return HamiltonianGenerator::cubic(n);
  fail("unknown hamiltonian '" + hamiltonian + "'");
}

StarMethod ExperimentConfig::make_star_method() const {
  return star_method == "series" ? StarMethod::series(star_order) : StarMethod::spectral();
}

CosetAlgebraParams ExperimentConfig::make_coset_params() const {
  return CosetAlgebraParams(coset.omega, coset.p_bar, coset.x_bar, coset.theta_bar);
}

ExperimentConfig config_from_json(const ordered_json& j) {
  reject_unknown(j, "config",
                 {"experiment", "grid", "labels", "observables", "hamiltonian", "mass", "dt", "steps", "save_every",
                  "picture", "k", "k_values", "sweep", "star", "coset", "output_dir"});
  ExperimentConfig c;
  if (j.contains("experiment")) c.experiment = check_catalog(get_string(j["experiment"], "experiment"),
                                                             kExperiments, "experiment");
  // k-sweeps resolve widths down to 1/8 and default to the finer grid.
  if (c.experiment == "sweep-k") c.grid.N = 1024;
  if (j.contains("grid")) {
    const auto& g = j["grid"];
    reject_unknown(g, "grid", {"n", "N", "L"});
    if (g.contains("n")) c.grid.n = get_int(g["n"], "grid.n");
    if (g.contains("N")) c.grid.N = get_int(g["N"], "grid.N");
    if (g.contains("L")) c.grid.L = get_number(g["L"], "grid.L");
  }
  if (c.grid.n < 1 || c.grid.n > 3) fail("grid.n must be 1, 2 or 3");
  const int n = c.grid.n;

  if (j.contains("labels")) {
    if (!j["labels"].is_array()) fail("'labels' must be an array");
    for (const auto& l : j["labels"]) {
      reject_unknown(l, "label", {"p", "x"});
      if (!l.contains("p") || !l.contains("x")) fail("every label needs 'p' and 'x'");
      CoherentLabel a{get_vector(l["p"], "label.p"), get_vector(l["x"], "label.x")};
      check_dim(a.p, n, "label.p");
      check_dim(a.x, n, "label.x");
      c.labels.push_back(std::move(a));
    }
  }
  if (j.contains("observables")) {
    if (!j["observables"].is_array()) fail("'observables' must be an array");
    for (const auto& o : j["observables"]) {
      ObservableSpec spec;
      if (o.is_string()) {
        spec.monomial = o.get<std::string>();
        parse_monomial(n, spec.monomial);
      } else {
        reject_unknown(o, "observable", {"gaussian"});
        if (!o.contains("gaussian")) fail("an observable is a monomial string or {\"gaussian\": {...}}");
        const auto& g = o["gaussian"];
        reject_unknown(g, "gaussian", {"p", "x", "width"});
        GaussianSpec gs;
        gs.p = g.contains("p") ? get_vector(g["p"], "gaussian.p") : std::vector<double>(n, 0.0);
        gs.x = g.contains("x") ? get_vector(g["x"], "gaussian.x") : std::vector<double>(n, 0.0);
        if (g.contains("width")) gs.width = get_number(g["width"], "gaussian.width");
        check_dim(gs.p, n, "gaussian.p");
        check_dim(gs.x, n, "gaussian.x");
        if (!(gs.width > 0.0)) fail("gaussian.width must be positive");
        spec.gaussian = std::move(gs);
      }
      c.observables.push_back(std::move(spec));
    }
  }
  if (j.contains("hamiltonian"))
    c.hamiltonian = check_catalog(get_string(j["hamiltonian"], "hamiltonian"), kHamiltonians, "hamiltonian");
  if (j.contains("mass")) c.mass = get_number(j["mass"], "mass");
  if (!(c.mass > 0.0)) fail("mass must be positive");
  if (j.contains("dt")) c.dt = get_number(j["dt"], "dt");
  if (j.contains("steps")) c.steps = get_int(j["steps"], "steps");
  if (j.contains("save_every")) c.save_every = get_int(j["save_every"], "save_every");
  if (j.contains("picture")) c.picture = check_catalog(get_string(j["picture"], "picture"), kPictures, "picture");
  if (j.contains("k")) c.k = get_number(j["k"], "k");
  if (!(c.k > 0.0)) fail("k must be positive");
  if (j.contains("k_values")) {
    if (!j["k_values"].is_array()) fail("'k_values' must be an array");
    c.k_values = get_vector(j["k_values"], "k_values");
  }
  if (j.contains("sweep")) c.sweep = check_catalog(get_string(j["sweep"], "sweep"), kSweeps, "sweep");
  if (j.contains("star")) {
    const auto& s = j["star"];
    reject_unknown(s, "star", {"method", "order"});
    if (s.contains("method"))
      c.star_method = check_catalog(get_string(s["method"], "star.method"), {"series", "spectral"}, "star.method");
    if (s.contains("order")) c.star_order = get_int(s["order"], "star.order");
    if (c.star_order < 1) fail("star.order must be at least 1");
  }
  if (j.contains("coset")) {
    const auto& s = j["coset"];
    reject_unknown(s, "coset", {"omega", "p_bar", "x_bar", "theta_bar", "points"});
    c.coset.omega.assign(static_cast<std::size_t>(n * n), 0.0);
    c.coset.p_bar.assign(n, 1.0);
    c.coset.x_bar.assign(n, 1.0);
    if (s.contains("omega")) c.coset.omega = get_vector(s["omega"], "coset.omega");
    if (s.contains("p_bar")) c.coset.p_bar = get_vector(s["p_bar"], "coset.p_bar");
    if (s.contains("x_bar")) c.coset.x_bar = get_vector(s["x_bar"], "coset.x_bar");
    if (s.contains("theta_bar")) c.coset.theta_bar = get_number(s["theta_bar"], "coset.theta_bar");
    check_dim(c.coset.omega, n * n, "coset.omega");
    check_dim(c.coset.p_bar, n, "coset.p_bar");
    check_dim(c.coset.x_bar, n, "coset.x_bar");
    if (s.contains("points")) {
      if (!s["points"].is_array()) fail("'coset.points' must be an array");
      for (const auto& p : s["points"]) {
        reject_unknown(p, "coset point", {"p", "x", "theta"});
        CosetPoint pt;
        pt.p = p.contains("p") ? get_vector(p["p"], "point.p") : std::vector<double>(n, 0.0);
        pt.x = p.contains("x") ? get_vector(p["x"], "point.x") : std::vector<double>(n, 0.0);
        if (p.contains("theta")) pt.theta = get_number(p["theta"], "point.theta");
        check_dim(pt.p, n, "point.p");
        check_dim(pt.x, n, "point.x");
        c.coset.points.push_back(std::move(pt));
      }
    }
  } else {
    c.coset.omega.assign(static_cast<std::size_t>(n * n), 0.0);
    c.coset.p_bar.assign(n, 1.0);
    c.coset.x_bar.assign(n, 1.0);
  }
  if (j.contains("output_dir")) c.output_dir = get_string(j["output_dir"], "output_dir");
  return c;
}

ordered_json config_to_json(const ExperimentConfig& c) {
  ordered_json j;
  j["experiment"] = c.experiment;
  j["grid"] = {{"n", c.grid.n}, {"N", c.grid.N}, {"L", c.grid.L}};
  j["labels"] = ordered_json::array();
  for (const auto& a : c.labels) j["labels"].push_back(label_json(a));
  j["observables"] = ordered_json::array();
  for (const auto& o : c.observables) {
    if (o.gaussian)
      j["observables"].push_back(
          {{"gaussian", {{"p", o.gaussian->p}, {"x", o.gaussian->x}, {"width", o.gaussian->width}}}});
    else
      j["observables"].push_back(o.monomial);
  }
  j["hamiltonian"] = c.hamiltonian;
  j["mass"] = c.mass;
  j["dt"] = c.dt;
  j["steps"] = c.steps;
  j["save_every"] = c.save_every;
  j["picture"] = c.picture;
  j["k"] = c.k;
  j["k_values"] = c.k_values;
  j["sweep"] = c.sweep;
  j["star"] = {{"method", c.star_method}, {"order", c.star_order}};
  ordered_json points = ordered_json::array();
  for (const auto& p : c.coset.points) points.push_back({{"p", p.p}, {"x", p.x}, {"theta", p.theta}});
  j["coset"] = {{"omega", c.coset.omega},
                {"p_bar", c.coset.p_bar},
                {"x_bar", c.coset.x_bar},
                {"theta_bar", c.coset.theta_bar},
                {"points", points}};
  j["output_dir"] = c.output_dir;
  return j;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open '" + path + "'");
  ordered_json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    fail(std::string("malformed JSON in '") + path + "': " + e.what());
  }
  return config_from_json(j);
}

void apply_override(ordered_json& j, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) fail("override '" + assignment + "' is not key=value");
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  if (key == "grid" || key == "labels" || key == "observables" || key == "star" || key == "coset" ||
      key == "k_values")
    fail("override '" + key + "' is not a top-level scalar field");
  ordered_json value;
  try {
    value = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error&) {
    value = text;
  }
  if (value.is_structured()) fail("override '" + key + "' must be a scalar");
  j[key] = value;
}

Polynomial parse_monomial(int n, const std::string& text) {
  Exponents e{};
  bool any = false;
  std::size_t i = 0;
  auto bad = [&](const std::string& why) { fail("observable '" + text + "': " + why); };
  while (i < text.size()) {
    const char ch = text[i];
    if (std::isspace(static_cast<unsigned char>(ch)) || ch == '*') {
      ++i;
      continue;
    }
    if (ch == '1' && (i + 1 == text.size() || !std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
      any = true;
      ++i;
      continue;
    }
    if (ch != 'p' && ch != 'x') bad(std::string("unexpected '") + ch + "'");
    ++i;
    int component = 1;
    if (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) component = text[i++] - '0';
    if (component < 1 || component > n) bad("component out of range for n = " + std::to_string(n));
    int power = 1;
    if (i < text.size() && text[i] == '^') {
      ++i;
      if (i >= text.size() || !std::isdigit(static_cast<unsigned char>(text[i]))) bad("missing exponent");
      power = 0;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
        power = power * 10 + (text[i++] - '0');
        if (power > 4) bad("degree above 4");
      }
    }
    e[ch == 'p' ? component - 1 : n + component - 1] += power;
    any = true;
  }
  if (!any) bad("empty monomial");
  int degree = 0;
  for (int v : e) degree += v;
  if (degree > 4) bad("degree above 4");
  return Polynomial::monomial(n, e);
}

PhaseFunction make_observable(const ObservableSpec& spec, const PhaseGrid& grid) {
  if (!spec.gaussian) return PhaseFunction::from_polynomial(grid, parse_monomial(grid.dim(), spec.monomial));
  const auto& g = *spec.gaussian;
  const int n = grid.dim();
  if (static_cast<int>(g.p.size()) != n || static_cast<int>(g.x.size()) != n)
    fail("gaussian centre does not match grid dimension");
  std::vector<double> centre(g.p);
  centre.insert(centre.end(), g.x.begin(), g.x.end());
  std::vector<Complex> values(grid.size());
  std::vector<double> z(grid.axes());
  for (std::size_t f = 0; f < grid.size(); ++f) {
    grid.point(f, z.data());
    double r2 = 0.0;
    for (int a = 0; a < grid.axes(); ++a) r2 += (z[a] - centre[a]) * (z[a] - centre[a]);
    values[f] = std::exp(-r2 / (2.0 * g.width * g.width));
  }
  PhaseFunction out = PhaseFunctionAccess::make(grid, std::move(values), Role::observable);
  if (out.boundary_max() > kBoundaryTolerance * out.sup_norm())
    fail("gaussian observable is not decayed at the box edge");
  return out;
}

}  // namespace wwgm::cli
