#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "wwgm/heisenberg_group.hpp"
#include "wwgm/phase_function.hpp"
#include "wwgm/phase_space.hpp"
#include "wwgm/polynomial.hpp"

namespace wwgm {

/// Contraction parameters swept by every diagnostic, and the grid they run on.
struct SweepSpec {
  std::vector<double> k_values{1.0, 2.0, 4.0, 8.0};
  PhaseGrid grid{1, 1024, 8.0};

  /// At least 4 ascending k > 0 with k_max / k_min >= 8.
  void validate() const;
};

inline constexpr int kMinSweepPoints = 4;
inline constexpr double kMinSweepSpan = 8.0;
/// A contracted state of width 1/k needs this many samples per width.
inline constexpr double kMinPointsPerWidth = 8.0;
/// Largest relative disagreement accepted between numeric and closed-form overlaps.
inline constexpr double kOverlapTolerance = 1e-6;

/// Least-squares line through (abscissa, log column).
struct SlopeFit {
  std::string column;
  /// "log k" or "k^2".
  std::string abscissa;
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  double residual_stderr = 0.0;
  int points = 0;
};

/// Fits y = slope * x + intercept; throws ValidationError with fewer than 2 points.
SlopeFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

struct SweepResult {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<SlopeFit> fits;

  std::vector<double> column(const std::string& name) const;
  /// Largest value in every column whose name starts with "rel_err".
  double max_rel_err() const;
};

/// Header row plus one row per k; values printed round-trip exact, NaN as "nan".
void write_csv(std::ostream& os, const SweepResult& result);
/// {"sweep", "columns", "max_rel_err", "fits": [...]}.
std::string summary_json(const SweepResult& result);

/// Throws ValidationError unless N (1/k) / (2L) >= 8.
void check_resolution(const PhaseGrid& grid, const ContractionParam& kp);

/// φ^c_a(p, x) = exp(ik²(p_a·x − x_a·p)) exp(−k²|z − a|²/2) in contracted coordinates.
PhaseFunction contracted_coherent_state(const CoherentLabel& a, const PhaseGrid& grid, const ContractionParam& kp);

/// k^{2n} inner(φ, ψ): the inner product in contracted coordinates.
Complex contracted_inner(const PhaseFunction& phi, const PhaseFunction& psi, const ContractionParam& kp);

/// Closed form exp[ik²(x_b·p_a − p_b·x_a)] exp[−(k²/2)|a − b|²].
Complex contracted_overlap(const CoherentLabel& a, const CoherentLabel& b, const ContractionParam& kp);

/// contracted_inner of the two contracted states on the grid.
Complex contracted_overlap_numeric(const CoherentLabel& a, const CoherentLabel& b, const PhaseGrid& grid,
                                   const ContractionParam& kp);

/// Columns k, numeric, closed_form, rel_err (magnitudes); fit of log|overlap| against k².
/// Throws AccuracyError if the two paths disagree by more than 1e-6 relative.
SweepResult overlap_decay_sweep(const CoherentLabel& a, const CoherentLabel& b, const SweepSpec& spec);

struct LeftOperatorReport {
  /// ‖(X^{cL}_i − x^c_i)φ‖/‖φ‖ with X^{cL}_i = x^c_i + (i/k²)∂_{p^c_i}.
  double residual_x = 0.0;
  /// ‖(P^{cL}_i − p^c_i)φ‖/‖φ‖ with P^{cL}_i = p^c_i − (i/k²)∂_{x^c_i}.
  double residual_p = 0.0;
};

LeftOperatorReport left_operator_limit(const ContractionParam& kp, const PhaseFunction& probe, int i = 0);

/// Contracted coherent probes at `label`; closed forms sqrt(x_a² + 1/(2k²)) and
/// sqrt(p_a² + 1/(2k²)), which decay as 1/k for a probe at the origin.
SweepResult left_operator_sweep(const CoherentLabel& label, const SweepSpec& spec);

/// Columns k, numeric (sup|α⋆β − αβ|), closed_form, rel_err, commutator
/// (sup|α⋆β − β⋆α|), closed_form_commutator, rel_err_commutator. Closed forms
/// come from the exact oracle for unit monomials and integer k (NaN otherwise).
SweepResult product_commutativization(const Polynomial& alpha, const Polynomial& beta, const SweepSpec& spec);

/// Columns k, numeric (sup|(k²/2i){α,β}_{⋆k} − {α,β}_PB|), closed_form, rel_err.
SweepResult bracket_convergence(const Polynomial& alpha, const Polynomial& beta, const SweepSpec& spec);

/// Columns k, numeric |dθ − θ̄|, closed_form |p̄·x − x̄·p|/k², rel_err.
SweepResult theta_decoupling_scan(const CosetAlgebraParams& params, const CosetPoint& point, const SweepSpec& spec);

}  // namespace wwgm
