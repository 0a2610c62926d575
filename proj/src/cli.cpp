#include "hgr/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hgr/compare.hpp"
#include "hgr/config.hpp"
#include "hgr/trainer.hpp"

namespace hgr {
namespace {

int cmd_train(const std::string& config_path,
              const std::vector<std::string>& overrides, std::ostream& out) {
  TrainConfig config;
  if (!config_path.empty()) apply_config_file(config, config_path);
  apply_env_overrides(config);
  apply_overrides(config, overrides);
  // Everything is checked before any filesystem effect: a bad config must
  // not leave an output directory behind.
  validate(config);

  std::filesystem::create_directories(config.out_dir);
  write_manifest(config.out_dir + "/manifest.json", config);
  const std::string metrics = run_training(config);
  out << "metrics: " << metrics << "\n";
  for (const std::uint64_t seed : config.seeds)
    out << "checkpoint: " << checkpoint_path(config.out_dir, seed) << "\n";
  return 0;
}

int cmd_eval(const std::string& checkpoint, const std::string& env_id,
             std::size_t episodes, std::uint64_t seed, std::ostream& out) {
  std::ifstream in(checkpoint, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read checkpoint: " + checkpoint);
  const AgentNetworks nets = load_agent(in);
  const auto env = make_env(env_id);
  const EvalResult res = evaluate(nets, *env, episodes, seed);
  out << std::fixed << std::setprecision(4) << res.success_rate << "\n";
  return 0;
}

int cmd_compare(const std::vector<std::string>& metrics_paths,
                const std::string& curve_path, std::ostream& out) {
  std::vector<StrategyCurve> curves;
  curves.reserve(metrics_paths.size());
  for (const std::string& path : metrics_paths)
    curves.push_back(load_curve(path));
  out << comparison_table(curves);
  write_curve_svg(curve_path, curves);
  out << "curves: " << curve_path << "\n";
  return 0;
}

} // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out,
             std::ostream& err) {
  CLI::App app{"Hindsight goal ranking toolkit"};
  app.require_subcommand(1);

  auto* train = app.add_subcommand(
      "train", "Train one agent per seed and write metrics + checkpoints");
  std::string config_path;
  std::vector<std::string> overrides;
  train->add_option("--config", config_path,
                    "flat key=value config file (defaults apply without it)");
  train->add_option("--set", overrides,
                    "override one key, e.g. --set alpha=0 (repeatable)");

  auto* eval = app.add_subcommand("eval", "Evaluate a saved agent checkpoint");
  std::string checkpoint, eval_env = "point-reach";
  std::size_t episodes = 100;
  std::uint64_t eval_seed = 0;
  eval->add_option("--checkpoint", checkpoint, "agent checkpoint file")
      ->required();
  eval->add_option("--env", eval_env, "environment id");
  eval->add_option("--episodes", episodes, "evaluation episodes");
  eval->add_option("--seed", eval_seed, "evaluation seed");

  auto* compare = app.add_subcommand(
      "compare", "Tabulate interactions-to-threshold and plot curves");
  std::vector<std::string> metrics_paths;
  std::string curve_path = "compare.svg";
  compare->add_option("metrics", metrics_paths, "trainer metrics CSV files")
      ->required();
  compare->add_option("--out", curve_path, "output SVG path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (train->parsed()) return cmd_train(config_path, overrides, out);
    if (eval->parsed())
      return cmd_eval(checkpoint, eval_env, episodes, eval_seed, out);
    return cmd_compare(metrics_paths, curve_path, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

} // namespace hgr
