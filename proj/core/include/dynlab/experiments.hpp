#pragma once
// Configuration-driven experiment runner behind the CLI. One experiment
// kind per module family:
//   families - window-set family checks
//   shift    - weight criterion sets, tuple verdicts, return sets
//   sobolev  - norm and bound-chain reports for piecewise functions
//   qk       - diagonal separation experiments on the dyadic tower set
//   rhc      - progression density pipeline on observed return sets
//
// Configs validate strictly (unknown fields are rejected) and runs are
// deterministic: every random choice is seeded from the config, and
// reports carry no timestamps, so re-running a config reproduces the
// report byte for byte.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace dynlab::experiments {

struct OutputPrefs {
  std::vector<std::string> formats; // subset of {json, csv, svg}; default {json}
  std::string dir = ".";
};

struct RunResult {
  std::string name;
  nlohmann::json report;
  std::optional<std::string> csv;
  std::optional<std::string> svg;
  OutputPrefs output;
  bool non_convergence = false;
};

// Validates and executes one experiment; throws io::ValidationError on any
// schema violation.
RunResult run_experiment(const nlohmann::json& config, const std::string& default_name);

const std::map<std::string, nlohmann::json>& presets();

// Stable, sorted listing of kinds, generators, weight families, tests and
// presets.
std::string catalog_text();

// Minimal single-polyline SVG chart, deterministic output.
std::string line_chart_svg(const std::vector<double>& xs, const std::vector<double>& ys,
                           const std::string& title);

} // namespace dynlab::experiments
