#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include <jamison/cli.hpp>

namespace {

struct options {
  std::string p = "2";
  std::string config;
  std::string timestamp;
};

}  // namespace

int main(int argc, char** argv) {
  jamison::run_config cfg;
  options o;
  CLI::App app{"Jamison sequences, shift constructions and star-norm experiments"};
  app.require_subcommand(1);
  std::string out_dir = ".";
  app.add_option("--out-dir", out_dir, "Directory for report.json and CSV tables");
  app.add_option("--seed", cfg.seed, "Random seed");
  app.add_option("--timestamp", o.timestamp, "Fixed report timestamp");

  auto* analyze = app.add_subcommand("analyze", "Separation constants and Jamison verdict");
  analyze->add_option("--sequence", cfg.sequence_path, "Sequence JSON")->required();
  analyze->add_option("--horizons", cfg.horizons, "Comma separated horizons")->delimiter(',')->check(CLI::PositiveNumber);
  analyze->add_option("--resolution", cfg.resolution, "Grid resolution in turns");
  analyze->add_option("--refine", cfg.refine_steps, "Refinement steps");

  auto* construct = app.add_subcommand("construct", "Build a certified shift construction");
  construct->add_option("--sequence", cfg.sequence_path, "Sequence JSON")->required();
  construct->add_option("--levels", cfg.levels, "Levels L");
  construct->add_option("--fibers", cfg.fibers, "Fibers I");
  construct->add_option("--weights", cfg.weights, "linear or a weights JSON file");
  construct->add_option("--horizon", cfg.horizon, "Horizon K");
  construct->add_option("--search-budget", cfg.search_budget, "Search retries per level");
  construct->add_option("--out", cfg.out_path, "Construction output file");

  auto* verify = app.add_subcommand("verify", "Partial power bound and eigenvector estimates");
  verify->add_option("--construction", cfg.construction_path, "Construction JSON")->required();
  verify->add_option("--p", o.p, "Norm: 1, 2 or inf");
  verify->add_option("--powers", cfg.powers, "Number of sequence powers");
  verify->add_option("--levels", cfg.levels, "Levels used");
  verify->add_option("--fibers", cfg.fibers, "Fibers used");

  auto* semigroup = app.add_subcommand("semigroup", "Lift to a matrix semigroup");
  semigroup->add_option("--construction", cfg.construction_path, "Construction JSON")->required();
  semigroup->add_option("--real-sequence", cfg.real_sequence_path, "Real times t_k (default 1, n_k + 1/2 for k >= 1)");
  semigroup->add_option("--powers", cfg.powers, "Number of sequence terms");
  semigroup->add_option("--levels", cfg.levels, "Levels used");
  semigroup->add_option("--fibers", cfg.fibers, "Fibers used");

  auto* star = app.add_subcommand("starnorm", "Star-norm experiments");
  star->add_option("--sequence", cfg.sequence_path, "Sequence JSON")->required();
  star->add_option("--mode", cfg.mode, "bound, pairs or field");
  star->add_option("--J", cfg.J, "Largest product index j");
  star->add_option("--K", cfg.K, "Tuple horizon");
  star->add_option("--beam-width", cfg.beam_width, "Beam width");
  star->add_option("--samples", cfg.samples, "Sample count");
  star->add_option("--depth", cfg.depth, "Digit depth for field mode");
  star->add_option("--config", o.config, "JSON with J, K, beam_width");

  auto* report = app.add_subcommand("report", "Summarize a saved construction");
  report->add_option("--construction", cfg.construction_path, "Construction JSON")->required();
  report->add_option("--fibers", cfg.fibers, "Fibers used");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    cfg.out_dir = out_dir;
    auto* sub = app.get_subcommands().front();
    cfg.command = jamison::parse_command(sub->get_name());
    cfg.p = jamison::parse_norm_kind(o.p);
    if (!o.timestamp.empty()) cfg.timestamp = o.timestamp;
    if (!o.config.empty()) jamison::apply_star_config(cfg, jamison::read_json_file(o.config));
  } catch (const jamison::error& e) {
    std::cerr << "jamison: " << e.what() << '\n';
    return 1;
  }

  const auto result = jamison::run(cfg);
  std::cout << result.report.dump(2) << '\n';
  return result.exit_code;
}
