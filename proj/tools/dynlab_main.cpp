// dynlab CLI: configuration-driven experiments with machine-readable
// reports.
//
//   dynlab run --config cfg.json [--out DIR] [--format json|csv|svg ...]
//   dynlab run --preset NAME    [--out DIR] [--format ...]
//   dynlab catalog
//
// Exit codes: 0 success, 2 config validation error (a JSON error object
// naming the offending fields is printed), 3 numerical non-convergence
// flagged anywhere in the run.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "dynlab/experiments.hpp"
#include "dynlab/json_io.hpp"

namespace {

namespace fs = std::filesystem;
using dynlab::experiments::RunResult;
using nlohmann::json;

int write_outputs(const RunResult& result, const fs::path& out_dir,
                  const std::vector<std::string>& formats) {
  fs::create_directories(out_dir);
  for (const std::string& f : formats) {
    if (f == "json") {
      std::ofstream os(out_dir / (result.name + ".json"));
      os << result.report.dump(2) << "\n";
    } else if (f == "csv") {
      if (!result.csv) {
        std::cerr << "note: experiment produced no CSV output\n";
        continue;
      }
      std::ofstream os(out_dir / (result.name + ".csv"));
      os << *result.csv;
    } else if (f == "svg") {
      if (!result.svg) {
        std::cerr << "note: experiment produced no SVG output\n";
        continue;
      }
      std::ofstream os(out_dir / (result.name + ".svg"));
      os << *result.svg;
    }
  }
  return result.non_convergence ? 3 : 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite-window experiments in linear dynamics"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "execute one experiment config");
  std::string config_path, preset_name, out_dir = ".";
  std::vector<std::string> formats;
  auto* opt_config = run->add_option("--config", config_path, "path to a config JSON file");
  auto* opt_preset = run->add_option("--preset", preset_name, "name of a shipped preset");
  opt_config->excludes(opt_preset);
  run->add_option("--out", out_dir, "output directory")->capture_default_str();
  run->add_option("--format", formats, "output formats (json, csv, svg)")
      ->check(CLI::IsMember({"json", "csv", "svg"}));

  auto* catalog = app.add_subcommand("catalog", "list generators, weights, tests and presets");

  CLI11_PARSE(app, argc, argv);

  if (catalog->parsed()) {
    std::cout << dynlab::experiments::catalog_text();
    return 0;
  }

  json config;
  std::string name;
  if (!preset_name.empty()) {
    const auto& all = dynlab::experiments::presets();
    auto it = all.find(preset_name);
    if (it == all.end()) {
      json err{{"error", "unknown preset"}, {"preset", preset_name}};
      std::cerr << err.dump(2) << "\n";
      return 2;
    }
    config = it->second;
    name = preset_name;
  } else if (!config_path.empty()) {
    std::ifstream is(config_path);
    if (!is) {
      json err{{"error", "cannot open config"}, {"path", config_path}};
      std::cerr << err.dump(2) << "\n";
      return 2;
    }
    try {
      is >> config;
    } catch (const json::parse_error& e) {
      json err{{"error", "malformed JSON"}, {"what", e.what()}};
      std::cerr << err.dump(2) << "\n";
      return 2;
    }
    name = fs::path(config_path).stem().string();
  } else {
    json err{{"error", "run needs --config or --preset"}};
    std::cerr << err.dump(2) << "\n";
    return 2;
  }

  RunResult result;
  try {
    result = dynlab::experiments::run_experiment(config, name);
  } catch (const dynlab::io::ValidationError& e) {
    json err{{"error", "validation"}, {"what", e.what()}, {"fields", e.fields()}};
    std::cerr << err.dump(2) << "\n";
    return 2;
  } catch (const std::exception& e) {
    json err{{"error", "runtime"}, {"what", e.what()}};
    std::cerr << err.dump(2) << "\n";
    return 1;
  }

  std::vector<std::string> want = formats.empty() ? result.output.formats : formats;
  fs::path dir = out_dir != "." ? fs::path(out_dir) : fs::path(result.output.dir);
  int code = write_outputs(result, dir, want);
  std::cout << "wrote " << result.name << " report to " << dir.string() << "\n";
  return code;
}
