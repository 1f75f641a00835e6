#include <doctest.h>
#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "runner.hpp"
#include "wwgm/errors.hpp"

using namespace wwgm;
using namespace wwgm::cli;
using nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / ("wwgm_cli_test_" + std::to_string(::getpid()))) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Rows of a CSV file as numbers, with the header returned separately.
std::vector<std::vector<double>> read_csv(const fs::path& p, std::vector<std::string>* header = nullptr) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  if (header) {
    std::stringstream hs(line);
    for (std::string cell; std::getline(hs, cell, ',');) header->push_back(cell);
  }
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::stringstream ls(line);
    std::vector<double> row;
    for (std::string cell; std::getline(ls, cell, ',');) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

ExperimentConfig parse(const std::string& text) { return config_from_json(ordered_json::parse(text)); }

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("config round trip") {
    const ExperimentConfig c = parse(R"({
      "experiment": "evolve", "grid": {"n": 2, "N": 32, "L": 7.5},
      "labels": [{"p": [0.1, -0.2], "x": [0.3, 0.1]}],
      "observables": ["x2^2 p1", {"gaussian": {"p": [0, 0.5], "x": [1, 0], "width": 0.75}}],
      "hamiltonian": "free", "mass": 2.5, "dt": 0.0001234567890123, "steps": 17, "save_every": 3,
      "picture": "liouville", "k": 3.0, "k_values": [1, 3, 9, 27], "sweep": "bracket",
      "star": {"method": "series", "order": 6},
      "coset": {"omega": [0, 0.5, -0.5, 0], "p_bar": [1, 2], "x_bar": [0, 1], "theta_bar": 0.1,
                "points": [{"p": [1, 1], "x": [2, 2], "theta": 0.3}]},
      "output_dir": "somewhere"})");
    const ordered_json j = config_to_json(c);
    const ExperimentConfig back = config_from_json(j);
    CHECK(back == c);
    CHECK(config_to_json(back).dump() == j.dump());
    CHECK(config_from_json(ordered_json::parse(j.dump())) == c);

    const ExperimentConfig defaults = parse("{}");
    CHECK(config_from_json(config_to_json(defaults)) == defaults);
  }

  TEST_CASE("unknown keys and bad values are rejected") {
    CHECK_THROWS_AS(parse(R"({"colour": 1})"), ValidationError);
    CHECK_THROWS_AS(parse(R"({"grid": {"n": 1, "M": 3}})"), ValidationError);
    CHECK_THROWS_AS(parse(R"({"star": {"method": "series", "depth": 3}})"), ValidationError);
    CHECK_THROWS_AS(parse(R"({"hamiltonian": "anharmonic"})"), ValidationError);
    CHECK_THROWS_AS(parse(R"({"steps": 1.5})"), ValidationError);
    CHECK_THROWS_AS(parse(R"({"labels": [{"p": [0, 0], "x": [0, 0]}]})"), ValidationError);
    CHECK_THROWS_AS(parse(R"({"observables": ["x^5"]})"), ValidationError);
    CHECK_THROWS_AS(parse(R"({"k": -1})"), ValidationError);
  }

  TEST_CASE("sweeps default to the fine grid") {
    CHECK(parse(R"({"experiment": "sweep-k"})").grid.N == 1024);
    CHECK(parse(R"({"experiment": "coherent"})").grid.N == 256);
  }

  TEST_CASE("overrides") {
    ordered_json j = ordered_json::object();
    apply_override(j, "dt=0.5");
    apply_override(j, "hamiltonian=free");
    apply_override(j, "steps=12");
    const ExperimentConfig c = config_from_json(j);
    CHECK(c.dt == 0.5);
    CHECK(c.hamiltonian == "free");
    CHECK(c.steps == 12);
    CHECK_THROWS_AS(apply_override(j, "grid={\"N\": 3}"), ValidationError);
    CHECK_THROWS_AS(apply_override(j, "novalue"), ValidationError);
  }

  TEST_CASE("monomial catalog") {
    const Polynomial m = parse_monomial(1, "x^2 p");
    CHECK(m.coefficient({1, 2}) == Complex(1.0));
    CHECK(m.terms().size() == 1);
    CHECK(parse_monomial(2, "p2*x1").coefficient({0, 1, 1, 0}) == Complex(1.0));
    CHECK(parse_monomial(1, "1").coefficient({0, 0}) == Complex(1.0));
    CHECK(parse_monomial(1, "x x p p").degree() == 4);
    CHECK_THROWS_AS(parse_monomial(1, "x p^4"), ValidationError);
    CHECK_THROWS_AS(parse_monomial(1, "q"), ValidationError);
    CHECK_THROWS_AS(parse_monomial(1, "x2"), ValidationError);
    CHECK_THROWS_AS(parse_monomial(1, ""), ValidationError);
  }

  TEST_CASE("gaussian observables") {
    const PhaseGrid g(1, 64, 8.0);
    const PhaseFunction f = make_observable({"", GaussianSpec{{0.5}, {-0.5}, 1.0}}, g);
    CHECK(f.sup_norm() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_FALSE(f.is_polynomial());
    CHECK_THROWS_AS(make_observable({"", GaussianSpec{{0.0}, {0.0}, 4.0}}, g), ValidationError);
  }

  TEST_CASE("coherent run: Wigner peak row and byte-identical reruns") {
    TempDir tmp;
    const ExperimentConfig c = parse(R"({"experiment": "coherent", "grid": {"n": 1, "N": 64, "L": 8}})");
    const RunReport first = run(c, tmp.path / "a");
    run(c, tmp.path / "b");
    for (const auto& f : first.files) CHECK(slurp(tmp.path / "a" / f) == slurp(tmp.path / "b" / f));
    CHECK(fs::exists(tmp.path / "a" / "manifest.json"));
    CHECK(fs::exists(tmp.path / "a" / "state.bin"));

    std::vector<std::string> header;
    const auto rows = read_csv(tmp.path / "a" / "wigner.csv", &header);
    CHECK(header == std::vector<std::string>{"p", "x", "re", "im"});
    std::size_t best = 0;
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (rows[i][2] > rows[best][2]) best = i;
    CHECK(rows[best][0] == 0.0);
    CHECK(rows[best][1] == 0.0);
    for (const auto& entry : fs::directory_iterator(tmp.path / "a"))
      CHECK(entry.path().string().find(".tmp.") == std::string::npos);
  }

  TEST_CASE("sweep-k overlap with defaults") {
    TempDir tmp;
    run(parse(R"({"experiment": "sweep-k"})"), tmp.path);
    std::vector<std::string> header;
    const auto rows = read_csv(tmp.path / "sweep_overlap.csv", &header);
    const auto col = std::find(header.begin(), header.end(), "rel_err") - header.begin();
    REQUIRE(col < static_cast<long>(header.size()));
    CHECK(rows.size() == 4);
    for (const auto& r : rows) CHECK(r[col] <= 1e-6);
  }

  TEST_CASE("evolve: harmonic quarter period") {
    TempDir tmp;
    ExperimentConfig c = parse(R"({"experiment": "evolve", "grid": {"n": 1, "N": 128, "L": 8},
      "labels": [{"p": 0, "x": 1}], "hamiltonian": "harmonic", "picture": "schrodinger", "steps": 785})");
    c.dt = (kPi / 4) / 785;
    c.save_every = 785;
    const RunReport r = run(c, tmp.path);
    std::vector<std::string> header;
    const auto rows = read_csv(tmp.path / "trajectory.csv", &header);
    CHECK(header == std::vector<std::string>{"t", "norm", "energy", "peak_p", "peak_x"});
    REQUIRE(rows.size() == 2);
    CHECK(std::abs(rows.back()[3] + 1.0) < 1e-4);
    CHECK(std::abs(rows.back()[4]) < 1e-4);
    CHECK(rows.back()[2] == doctest::Approx(6.0).epsilon(1e-8));
    CHECK(r.summary["invariant_drift"].get<double>() < 1e-6);
  }

  TEST_CASE("star-check and coset reports") {
    TempDir tmp;
    const RunReport s = run(parse(R"({"experiment": "star-check", "grid": {"n": 1, "N": 32, "L": 8}})"), tmp.path);
    CHECK(s.summary["worst_abs_error"].get<double>() < 1e-12);

    const RunReport cs = run(parse(R"({"experiment": "coset", "k_values": [1, 10],
      "coset": {"p_bar": 1, "x_bar": 0, "points": [{"p": 0, "x": 2}]}})"), tmp.path);
    CHECK(cs.summary["points"] == 1);
    const auto rows = read_csv(tmp.path / "coset_phase_space.csv");
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].back() == 2.0);
    CHECK(rows[1].back() == doctest::Approx(0.02).epsilon(1e-15));
  }

  TEST_CASE("errors map to exit codes") {
    const ValidationError v("bad input");
    const AccuracyError a("drift");
    const std::runtime_error other("boom");
    CHECK(exit_code_for(v) == 2);
    CHECK(exit_code_for(a) == 3);
    CHECK(exit_code_for(other) == 1);
    const ordered_json rec = ordered_json::parse(error_record(a));
    CHECK(rec["error"] == "accuracy");
    CHECK(rec["exit_code"] == 3);
    CHECK(rec["message"] == "drift");

    TempDir tmp;
    CHECK_THROWS_AS(run(parse(R"({"experiment": "coherent", "grid": {"n": 1, "N": 64, "L": 8},
      "labels": [{"p": 0, "x": 3}]})"), tmp.path), ValidationError);
  }
}
