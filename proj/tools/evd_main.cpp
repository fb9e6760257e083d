#include "evd/harness.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

namespace fs = std::filesystem;

struct GlobalOptions {
  std::optional<std::uint64_t> seed;
  std::string out_dir = "out";
  std::string formats = "json,csv";
  bool bits = false;
};

std::vector<std::string> split_formats(const std::string& formats) {
  std::vector<std::string> out;
  std::stringstream ss(formats);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  if (out.empty()) throw evd::ConfigError("config error at --format: empty");
  for (const std::string& f : out) {
    if (f != "json" && f != "csv") {
      throw evd::ConfigError("config error at --format: unknown format '" + f +
                             "' (known: json, csv)");
    }
  }
  return out;
}

int run_one(const fs::path& config_path, const GlobalOptions& options,
            const std::vector<std::string>& allowed_checks) {
  evd::ExperimentConfig config = evd::ExperimentConfig::load_file(config_path);
  if (!allowed_checks.empty() &&
      std::find(allowed_checks.begin(), allowed_checks.end(), config.check) ==
          allowed_checks.end()) {
    std::string names;
    for (const std::string& name : allowed_checks) {
      if (!names.empty()) names += ", ";
      names += name;
    }
    throw evd::ConfigError("config error at $.check: '" + config.check +
                           "' is not handled by this subcommand (expected one "
                           "of: " + names + ")");
  }
  if (options.seed) config.master_seed = *options.seed;

  const evd::CheckReport report = evd::run(config);
  const auto written =
      evd::emit(report, split_formats(options.formats), options.out_dir,
                config_path.stem().string(), options.bits);

  std::printf("[%s] %s (%s, %.1f ms)\n",
              evd::status_name(report.status).c_str(), report.check.c_str(),
              config_path.filename().string().c_str(), report.wall_time_ms);
  for (const auto& path : written) {
    std::printf("  wrote %s\n", path.string().c_str());
  }
  return evd::exit_code(report.status);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"e-value / Bayes-risk duality verification harness"};
  app.require_subcommand(1);

  GlobalOptions options;
  app.add_option("--seed", options.seed,
                 "Master seed overriding the config's 'seed' field");
  app.add_option("--out", options.out_dir, "Output directory for reports")
      ->capture_default_str();
  app.add_option("--format", options.formats,
                 "Comma-separated report formats (json,csv)")
      ->capture_default_str();
  app.add_flag("--bits", options.bits,
               "Convert log-scale report fields from nats to bits");

  std::vector<std::pair<CLI::App*, std::string>> check_subcommands;
  std::string config_path;
  for (const auto& [name, checks] : evd::subcommand_checks()) {
    std::string checks_text;
    for (const std::string& check : checks) {
      if (!checks_text.empty()) checks_text += ", ";
      checks_text += check;
    }
    CLI::App* sub = app.add_subcommand(name, "Run a config (checks: " +
                                                 checks_text + ")");
    sub->fallthrough();
    sub->add_option("--config", config_path, "Path to a JSON check config")
        ->required();
    check_subcommands.emplace_back(sub, name);
  }
  CLI::App* suite = app.add_subcommand(
      "suite", "Run every *.json config in a directory (any check)");
  suite->fallthrough();
  std::string suite_dir;
  suite->add_option("dir", suite_dir, "Directory of JSON configs")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (suite->parsed()) {
      std::vector<fs::path> configs;
      if (!fs::is_directory(suite_dir)) {
        throw evd::ConfigError("config error: '" + suite_dir +
                               "' is not a directory");
      }
      for (const auto& entry : fs::directory_iterator(suite_dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json") {
          configs.push_back(entry.path());
        }
      }
      std::sort(configs.begin(), configs.end());
      if (configs.empty()) {
        throw evd::ConfigError("config error: no *.json configs in '" +
                               suite_dir + "'");
      }
      int worst = 0;
      for (const fs::path& path : configs) {
        worst = std::max(worst, run_one(path, options, {}));
      }
      return worst;
    }
    for (const auto& [sub, name] : check_subcommands) {
      if (sub->parsed()) {
        return run_one(config_path, options,
                       evd::subcommand_checks().at(name));
      }
    }
  } catch (const evd::ConfigError& e) {
    std::cerr << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
