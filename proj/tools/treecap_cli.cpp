// Command-line front end: one subcommand per experiment, plus `list`.
// Exit code 0 means every inequality asserted by the experiment passed.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "treecap/experiments.hpp"

namespace {

struct Common {
  std::string config_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
  long depth = 0;
  bool depth_set = false;
  std::string out_path;
  std::string format = "json";
};

int run(const std::string& name, const Common& common) {
  treecap::ExperimentConfig config;
  config.name = name;
  if (!common.config_path.empty()) {
    std::ifstream in(common.config_path);
    if (!in) {
      std::cerr << "cannot open config: " << common.config_path << "\n";
      return 2;
    }
    nlohmann::json j = nlohmann::json::parse(in);
    if (!j.contains("experiment")) j["experiment"] = name;
    config = treecap::ExperimentConfig::from_json(j);
    if (config.name != name) {
      std::cerr << "config is for experiment '" << config.name
                << "', not '" << name << "'\n";
      return 2;
    }
  }
  if (common.seed_set) config.master_seed = common.seed;
  if (common.depth_set) config.options["depth"] = common.depth;

  treecap::ExperimentReport report = treecap::run_experiment(config);
  if (!common.out_path.empty()) {
    treecap::write_report(report, common.format, common.out_path);
  }

  std::cout << report.name << ": " << (report.all_pass ? "PASS" : "FAIL")
            << "  " << report.aggregate.dump() << "\n";
  return report.all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"treecap - finite-depth potential theory on random trees"};
  app.require_subcommand(1);

  Common common;
  auto add_common = [&common](CLI::App* cmd) {
    cmd->add_option("--config", common.config_path,
                    "JSON config file ({experiment, seed, options})");
    cmd->add_option("--seed", common.seed, "master seed")
        ->each([&common](const std::string&) { common.seed_set = true; });
    cmd->add_option("--depth", common.depth, "tree height override")
        ->each([&common](const std::string&) { common.depth_set = true; });
    cmd->add_option("--out", common.out_path, "report output path");
    cmd->add_option("--format", common.format, "report format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
  };

  for (const auto& name : treecap::experiment_names()) {
    auto* cmd = app.add_subcommand(name, "run the " + name + " experiment");
    add_common(cmd);
  }
  app.add_subcommand("list", "list available experiments");

  CLI11_PARSE(app, argc, argv);

  auto* chosen = app.get_subcommands().front();
  if (chosen->get_name() == "list") {
    for (const auto& name : treecap::experiment_names()) {
      std::cout << name << "\n";
    }
    return 0;
  }
  try {
    return run(chosen->get_name(), common);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
