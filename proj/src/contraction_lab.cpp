#include "wwgm/contraction_lab.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>

#include "wwgm/analytic_oracle.hpp"
#include "wwgm/errors.hpp"
#include "wwgm/star_algebra.hpp"

namespace wwgm {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double rel_err(double numeric, double closed) {
  if (std::isnan(closed)) return kNaN;
  const double diff = std::abs(numeric - closed);
  return closed == 0.0 ? diff : diff / std::abs(closed);
}

double grid_sup(const PhaseGrid& grid, const Polynomial& poly) {
  double m = 0.0;
  for (const auto& v : sample(grid, poly)) m = std::max(m, std::abs(v));
  return m;
}

double grid_sup(const PhaseGrid& grid, const oracle::ExactPolynomial& poly) {
  Polynomial rounded(poly.dim());
  for (const auto& [e, c] : poly.terms()) rounded.add_term(e, c.to_complex());
  return grid_sup(grid, rounded);
}

// Fits log(column) against log k (or k²), skipping rows where the column is zero.
void add_fit(SweepResult& r, const std::string& column, bool against_k2 = false) {
  const auto ks = r.column("k");
  const auto ys = r.column(column);
  std::vector<double> fx, fy;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    if (!(ys[i] > 0.0) || !std::isfinite(ys[i])) continue;
    fx.push_back(against_k2 ? ks[i] * ks[i] : std::log(ks[i]));
    fy.push_back(std::log(ys[i]));
  }
  if (fx.size() < 2) return;
  SlopeFit fit = fit_line(fx, fy);
  fit.column = column;
  fit.abscissa = against_k2 ? "k^2" : "log k";
  r.fits.push_back(fit);
}

bool unit_monomial(const Polynomial& p, Exponents& e) {
  if (p.terms().size() != 1) return false;
  const auto& [exps, coef] = *p.terms().begin();
  if (coef != Complex(1.0, 0.0)) return false;
  e = exps;
  return true;
}

bool integer_k(double k) { return k >= 1.0 && k == std::floor(k) && k < 1e6; }

Polynomial poisson(const Polynomial& a, const Polynomial& b) {
  const int n = a.dim();
  Polynomial out(n);
  for (int i = 0; i < n; ++i) {
    out += a.derivative(n + i) * b.derivative(i);
    out -= a.derivative(i) * b.derivative(n + i);
  }
  return out;
}

oracle::ExactPolynomial to_exact_negated(const Polynomial& p) {
  // Integer-valued coefficients only (Poisson brackets of unit monomials).
  oracle::ExactPolynomial out(p.dim());
  for (const auto& [e, c] : p.terms()) {
    out.add(e, oracle::GaussianRational(oracle::Rational(static_cast<long long>(-c.real())),
                                        oracle::Rational(static_cast<long long>(-c.imag()))));
  }
  return out;
}

void check_polynomials(const Polynomial& a, const Polynomial& b, const SweepSpec& spec, const char* what) {
  spec.validate();
  if (a.dim() != spec.grid.dim() || b.dim() != spec.grid.dim()) {
    throw ValidationError(std::string(what) + ": observable dimension does not match the grid");
  }
}

}  // namespace

void SweepSpec::validate() const {
  if (static_cast<int>(k_values.size()) < kMinSweepPoints) {
    throw ValidationError("SweepSpec: at least 4 k-values are required for slope fits");
  }
  for (std::size_t i = 0; i < k_values.size(); ++i) {
    if (!(k_values[i] > 0.0 && std::isfinite(k_values[i]))) throw ValidationError("SweepSpec: k-values must be > 0");
    if (i > 0 && !(k_values[i] > k_values[i - 1])) throw ValidationError("SweepSpec: k-values must be ascending");
  }
  if (k_values.back() / k_values.front() < kMinSweepSpan) {
    throw ValidationError("SweepSpec: k-values must span a factor of at least 8");
  }
}

SlopeFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ValidationError("fit_line: need at least 2 points");
  const double m = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw ValidationError("fit_line: abscissae are all equal");
  SlopeFit f;
  f.points = static_cast<int>(x.size());
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  if (x.size() > 2) {
    double ssr = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = y[i] - (f.slope * x[i] + f.intercept);
      ssr += r * r;
    }
    f.residual_stderr = std::sqrt(ssr / (m - 2.0));
    f.slope_stderr = f.residual_stderr / std::sqrt(sxx);
  }
  return f;
}

std::vector<double> SweepResult::column(const std::string& name) const {
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c] != name) continue;
    std::vector<double> out;
    for (const auto& row : rows) out.push_back(row[c]);
    return out;
  }
  throw ValidationError("SweepResult: no column named " + name);
}

double SweepResult::max_rel_err() const {
  double m = 0.0;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c].rfind("rel_err", 0) != 0) continue;
    for (const auto& row : rows) {
      if (!std::isnan(row[c])) m = std::max(m, row[c]);
    }
  }
  return m;
}

void write_csv(std::ostream& os, const SweepResult& result) {
  for (std::size_t c = 0; c < result.columns.size(); ++c) os << (c ? "," : "") << result.columns[c];
  os << '\n';
  char buf[64];
  for (const auto& row : result.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (std::isnan(row[c])) {
        std::snprintf(buf, sizeof buf, "nan");
      } else {
        std::snprintf(buf, sizeof buf, "%.17g", row[c]);
      }
      os << (c ? "," : "") << buf;
    }
    os << '\n';
  }
}

std::string summary_json(const SweepResult& result) {
  nlohmann::ordered_json j;
  j["sweep"] = result.name;
  j["columns"] = result.columns;
  j["k_values"] = result.column("k");
  j["max_rel_err"] = result.max_rel_err();
  j["fits"] = nlohmann::ordered_json::array();
  for (const auto& f : result.fits) {
    j["fits"].push_back({{"column", f.column},
                         {"abscissa", f.abscissa},
                         {"slope", f.slope},
                         {"intercept", f.intercept},
                         {"slope_stderr", f.slope_stderr},
                         {"residual_stderr", f.residual_stderr},
                         {"points", f.points}});
  }
  return j.dump(2);
}

void check_resolution(const PhaseGrid& grid, const ContractionParam& kp) {
  const double per_width = grid.points() / (kp.k() * 2.0 * grid.half_width());
  if (per_width < kMinPointsPerWidth) {
    std::ostringstream os;
    os << "resolution guard: a contracted state of width 1/k = " << 1.0 / kp.k() << " gets " << per_width
       << " grid points (need >= " << kMinPointsPerWidth << "); raise N or lower k";
    throw ValidationError(os.str());
  }
}

PhaseFunction contracted_coherent_state(const CoherentLabel& a, const PhaseGrid& grid, const ContractionParam& kp) {
  check_resolution(grid, kp);
  check_label_margin(a, grid, kp.k());
  const int n = grid.dim();
  const double k2 = kp.k2();
  std::vector<Complex> v(grid.size());
  double z[6];
  for (std::size_t f = 0; f < grid.size(); ++f) {
    grid.point(f, z);
    double phase = 0.0, r2 = 0.0;
    for (int i = 0; i < n; ++i) {
      phase += a.p[i] * z[n + i] - a.x[i] * z[i];
      r2 += (z[i] - a.p[i]) * (z[i] - a.p[i]) + (z[n + i] - a.x[i]) * (z[n + i] - a.x[i]);
    }
    v[f] = std::polar(std::exp(-0.5 * k2 * r2), k2 * phase);
  }
  return PhaseFunction(grid, std::move(v), Role::wavefunction);
}

Complex contracted_inner(const PhaseFunction& phi, const PhaseFunction& psi, const ContractionParam& kp) {
  return inner(phi, psi) * std::pow(kp.k2(), phi.grid().dim());
}

Complex contracted_overlap(const CoherentLabel& a, const CoherentLabel& b, const ContractionParam& kp) {
  if (a.p.size() != a.x.size() || b.p.size() != b.x.size() || a.dim() != b.dim()) {
    throw ValidationError("contracted_overlap: label dimensions differ");
  }
  double phase = 0.0, d2 = 0.0;
  for (int i = 0; i < a.dim(); ++i) {
    phase += b.x[i] * a.p[i] - b.p[i] * a.x[i];
    d2 += (b.x[i] - a.x[i]) * (b.x[i] - a.x[i]) + (b.p[i] - a.p[i]) * (b.p[i] - a.p[i]);
  }
  return std::polar(std::exp(-0.5 * kp.k2() * d2), kp.k2() * phase);
}

Complex contracted_overlap_numeric(const CoherentLabel& a, const CoherentLabel& b, const PhaseGrid& grid,
                                   const ContractionParam& kp) {
  return contracted_inner(contracted_coherent_state(b, grid, kp), contracted_coherent_state(a, grid, kp), kp);
}

SweepResult overlap_decay_sweep(const CoherentLabel& a, const CoherentLabel& b, const SweepSpec& spec) {
  spec.validate();
  SweepResult r;
  r.name = "overlap";
  r.columns = {"k", "numeric", "closed_form", "rel_err", "phase_err"};
  for (double k : spec.k_values) {
    const ContractionParam kp(k);
    const Complex numeric = contracted_overlap_numeric(a, b, spec.grid, kp);
    const Complex closed = oracle::contracted_overlap(a, b, k).value;
    const double err = std::abs(numeric - closed) / std::abs(closed);
    r.rows.push_back({k, std::abs(numeric), std::abs(closed), err, std::abs(std::arg(numeric / closed))});
  }
  add_fit(r, "numeric", true);
  if (r.max_rel_err() > kOverlapTolerance) {
    std::ostringstream os;
    os << "overlap_decay_sweep: numeric and closed-form overlaps differ by " << r.max_rel_err()
       << " relative (> " << kOverlapTolerance << ")";
    throw AccuracyError(os.str());
  }
  return r;
}

LeftOperatorReport left_operator_limit(const ContractionParam& kp, const PhaseFunction& probe, int i) {
  const auto& grid = probe.grid();
  if (i < 0 || i >= grid.dim()) throw ValidationError("left_operator_limit: component out of range");
  check_resolution(grid, kp);
  const double scale = 1.0 / kp.k2();
  const double base = norm(probe);
  if (!(base > 0.0)) throw ValidationError("left_operator_limit: probe has zero norm");
  LeftOperatorReport r;
  r.residual_x = scale * norm(partial_p(probe, i)) / base;
  r.residual_p = scale * norm(partial_x(probe, i)) / base;
  return r;
}

SweepResult left_operator_sweep(const CoherentLabel& label, const SweepSpec& spec) {
  spec.validate();
  SweepResult r;
  r.name = "left_operator";
  r.columns = {"k", "numeric", "closed_form", "rel_err", "numeric_p", "closed_form_p", "rel_err_p"};
  for (double k : spec.k_values) {
    const ContractionParam kp(k);
    const auto probe = contracted_coherent_state(label, spec.grid, kp);
    const auto rep = left_operator_limit(kp, probe);
    const double spread = 1.0 / (2.0 * kp.k2());
    const double cx = std::sqrt(label.x[0] * label.x[0] + spread);
    const double cp = std::sqrt(label.p[0] * label.p[0] + spread);
    r.rows.push_back({k, rep.residual_x, cx, rel_err(rep.residual_x, cx), rep.residual_p, cp,
                      rel_err(rep.residual_p, cp)});
  }
  add_fit(r, "numeric");
  add_fit(r, "numeric_p");
  return r;
}

SweepResult product_commutativization(const Polynomial& alpha, const Polynomial& beta, const SweepSpec& spec) {
  check_polynomials(alpha, beta, spec, "product_commutativization");
  const auto& grid = spec.grid;
  Exponents ea{}, eb{};
  const bool monomials = unit_monomial(alpha, ea) && unit_monomial(beta, eb);
  const Polynomial pointwise_product = alpha * beta;
  SweepResult r;
  r.name = "commutativization";
  r.columns = {"k", "numeric", "closed_form", "rel_err", "commutator", "closed_form_commutator",
               "rel_err_commutator"};
  for (double k : spec.k_values) {
    const ContractionParam kp(k);
    const Polynomial ab = star(alpha, beta, kp);
    const Polynomial ba = star(beta, alpha, kp);
    const double dev = grid_sup(grid, ab - pointwise_product);
    const double comm = grid_sup(grid, ab - ba);
    double dev_closed = kNaN, comm_closed = kNaN;
    if (monomials && integer_k(k)) {
      const int ki = static_cast<int>(k);
      const int n = grid.dim();
      auto exact_ab = oracle::polynomial_star(n, ea, eb, ki).value;
      const auto exact_ba = oracle::polynomial_star(n, eb, ea, ki).value;
      auto diff = exact_ab;
      for (const auto& [e, c] : exact_ba.terms()) diff.add(e, c * oracle::GaussianRational(-1));
      Exponents sum{};
      for (int v = 0; v < 6; ++v) sum[v] = ea[v] + eb[v];
      exact_ab.add(sum, oracle::GaussianRational(-1));
      dev_closed = grid_sup(grid, exact_ab);
      comm_closed = grid_sup(grid, diff);
    }
    r.rows.push_back({k, dev, dev_closed, rel_err(dev, dev_closed), comm, comm_closed, rel_err(comm, comm_closed)});
  }
  add_fit(r, "numeric");
  add_fit(r, "commutator");
  return r;
}

SweepResult bracket_convergence(const Polynomial& alpha, const Polynomial& beta, const SweepSpec& spec) {
  check_polynomials(alpha, beta, spec, "bracket_convergence");
  const auto& grid = spec.grid;
  Exponents ea{}, eb{};
  const bool monomials = unit_monomial(alpha, ea) && unit_monomial(beta, eb);
  const Polynomial pb = poisson(alpha, beta);
  SweepResult r;
  r.name = "bracket";
  r.columns = {"k", "numeric", "closed_form", "rel_err"};
  for (double k : spec.k_values) {
    const ContractionParam kp(k);
    const Polynomial scaled = (star(alpha, beta, kp) - star(beta, alpha, kp)) * Complex(0.0, -kp.k2() / 2.0);
    const double err = grid_sup(grid, scaled - pb);
    double closed = kNaN;
    if (monomials && integer_k(k)) {
      const int ki = static_cast<int>(k);
      const int n = grid.dim();
      const auto ab = oracle::polynomial_star(n, ea, eb, ki).value;
      const auto ba = oracle::polynomial_star(n, eb, ea, ki).value;
      // (k²/2i)(ab − ba) − PB, exactly
      const oracle::GaussianRational factor(0, oracle::Rational(-ki * ki, 2));
      auto e = to_exact_negated(pb);
      for (const auto& [x, c] : ab.terms()) e.add(x, c * factor);
      for (const auto& [x, c] : ba.terms()) e.add(x, c * factor * oracle::GaussianRational(-1));
      closed = grid_sup(grid, e);
    }
    r.rows.push_back({k, err, closed, rel_err(err, closed)});
  }
  add_fit(r, "numeric");
  return r;
}

SweepResult theta_decoupling_scan(const CosetAlgebraParams& params, const CosetPoint& point, const SweepSpec& spec) {
  spec.validate();
  const int n = params.dim();
  if (static_cast<int>(point.p.size()) != n || static_cast<int>(point.x.size()) != n) {
    throw ValidationError("theta_decoupling_scan: point dimension does not match the parameters");
  }
  double coupling = 0.0;
  for (int i = 0; i < n; ++i) coupling += params.p_bar[i] * point.x[i] - params.x_bar[i] * point.p[i];
  SweepResult r;
  r.name = "theta";
  r.columns = {"k", "numeric", "closed_form", "rel_err"};
  for (double k : spec.k_values) {
    const ContractionParam kp(k);
    const auto flow = phase_space_coset_flow(params, point, kp);
    const double numeric = std::abs(flow.theta - params.theta_bar);
    const double closed = std::abs(coupling) / kp.k2();
    r.rows.push_back({k, numeric, closed, rel_err(numeric, closed)});
  }
  add_fit(r, "numeric");
  return r;
}

}  // namespace wwgm
