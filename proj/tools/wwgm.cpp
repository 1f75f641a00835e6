#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "runner.hpp"
#include "wwgm/errors.hpp"

using nlohmann::ordered_json;

namespace {

struct Options {
  std::string config;
  std::string out;
  std::optional<double> k;
  std::optional<int> grid_n;
  std::vector<std::string> overrides;
};

ordered_json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw wwgm::ValidationError("config: cannot open '" + path + "'");
  try {
    return ordered_json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw wwgm::ValidationError("config: malformed JSON in '" + path + "': " + e.what());
  }
}

int execute(const std::string& subcommand, const Options& opt) {
  ordered_json j = opt.config.empty() ? ordered_json::object() : read_json(opt.config);
  if (!j.is_object()) throw wwgm::ValidationError("config: top level must be an object");
  for (const auto& assignment : opt.overrides) wwgm::cli::apply_override(j, assignment);
  j["experiment"] = subcommand;
  if (opt.k) j["k"] = *opt.k;
  if (opt.grid_n) {
    if (!j.contains("grid")) j["grid"] = ordered_json::object();
    if (!j["grid"].is_object()) throw wwgm::ValidationError("config: 'grid' must be an object");
    j["grid"]["N"] = *opt.grid_n;
  }
  const wwgm::cli::ExperimentConfig config = wwgm::cli::config_from_json(j);
  const std::string out = opt.out.empty() ? config.output_dir : opt.out;
  const auto report = wwgm::cli::run(config, out);
  std::cout << report.summary.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phase-space quantum mechanics experiments (units with hbar = 2)"};
  app.require_subcommand(1);
  Options opt;
  const std::vector<std::pair<std::string, std::string>> commands{
      {"coherent", "Coherent state and Wigner density dumps"},
      {"star-check", "Star-product identity, commutator and associativity report"},
      {"evolve", "Time evolution in any picture, trajectory CSV"},
      {"sweep-k", "Contraction sweep over k"},
      {"coset", "Coset flow tables"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", opt.config, "JSON experiment config");
    sub->add_option("--out", opt.out, "Output directory (overrides output_dir)");
    sub->add_option("--k", opt.k, "Contraction parameter k");
    sub->add_option("--grid-n", opt.grid_n, "Grid points per axis");
    sub->add_option("--set", opt.overrides, "Override a top-level scalar field: key=value");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    return execute(app.get_subcommands().front()->get_name(), opt);
  } catch (const std::exception& e) {
    std::cerr << wwgm::cli::error_record(e) << "\n";
    return wwgm::cli::exit_code_for(e);
  }
}
