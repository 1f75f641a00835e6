#pragma once

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

#include "wwgm/dynamics.hpp"
#include "wwgm/heisenberg_group.hpp"
#include "wwgm/phase_function.hpp"
#include "wwgm/phase_space.hpp"
#include "wwgm/polynomial.hpp"
#include "wwgm/star_algebra.hpp"

namespace wwgm::cli {

/// Isotropic Gaussian exp(−|z − c|²/(2 w²)) centred at c = (p, x).
struct GaussianSpec {
  std::vector<double> p;
  std::vector<double> x;
  double width = 1.0;

  bool operator==(const GaussianSpec&) const = default;
};

/// Catalog observable: a monomial string such as "x^2 p" (degree <= 4) or a Gaussian.
struct ObservableSpec {
  std::string monomial;
  std::optional<GaussianSpec> gaussian;

  bool operator==(const ObservableSpec&) const = default;
};

struct GridSpec {
  int n = 1;
  int N = 256;
  double L = 8.0;

  bool operator==(const GridSpec&) const = default;
};

struct CosetSpec {
  std::vector<double> omega{0.0};
  std::vector<double> p_bar{1.0};
  std::vector<double> x_bar{1.0};
  double theta_bar = 0.0;
  std::vector<CosetPoint> points;

  bool operator==(const CosetSpec& o) const;
};

/// One experiment, read from and written to a JSON document.
struct ExperimentConfig {
  std::string experiment = "coherent";
  GridSpec grid;
  std::vector<CoherentLabel> labels;
  std::vector<ObservableSpec> observables;
  std::string hamiltonian = "harmonic";
  double mass = 1.0;
  double dt = 1e-3;
  int steps = 100;
  int save_every = 100;
  std::string picture = "schrodinger";
  double k = 1.0;
  std::vector<double> k_values{1.0, 2.0, 4.0, 8.0};
  std::string sweep = "overlap";
  std::string star_method = "spectral";
  int star_order = 8;
  CosetSpec coset;
  std::string output_dir = "wwgm_out";

  bool operator==(const ExperimentConfig& o) const;

  PhaseGrid make_grid() const;
  HamiltonianGenerator make_hamiltonian() const;
  StarMethod make_star_method() const;
  CosetAlgebraParams make_coset_params() const;
};

inline const std::vector<std::string> kExperiments{"coherent", "star-check", "evolve", "sweep-k", "coset"};
inline const std::vector<std::string> kPictures{"schrodinger", "heisenberg", "liouville", "classical_liouville",
                                                "classical_heisenberg"};
inline const std::vector<std::string> kSweeps{"overlap", "left_operator", "commutativization", "bracket", "theta"};
inline const std::vector<std::string> kHamiltonians{"zero", "harmonic", "free", "classical_harmonic", "cubic"};

/// Strict parse: unknown keys, wrong types and out-of-catalog names throw ValidationError.
ExperimentConfig config_from_json(const nlohmann::ordered_json& j);
/// Canonical form listing every field; config_from_json(config_to_json(c)) == c.
nlohmann::ordered_json config_to_json(const ExperimentConfig& c);
ExperimentConfig load_config(const std::string& path);

/// Applies `key=value` to a top-level scalar field; value is parsed as JSON,
/// falling back to a plain string.
void apply_override(nlohmann::ordered_json& j, const std::string& assignment);

/// Parses catalog monomials: space- or '*'-separated factors p, x, p1, x2^3, ... or "1".
Polynomial parse_monomial(int n, const std::string& text);

/// Evaluates a catalog observable on the grid (Gaussians are boundary-decayed fields).
PhaseFunction make_observable(const ObservableSpec& spec, const PhaseGrid& grid);

}  // namespace wwgm::cli
