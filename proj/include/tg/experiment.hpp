#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

namespace tg {

/// A batch experiment: a kind, a flat key=value parameter map, and the
/// common output/seed/tolerance settings. Identical configs (including the
/// seed) produce byte-identical CSV output.
struct ExperimentConfig {
  std::string kind;
  std::map<std::string, std::string> params;
  std::string out_path = "experiment.csv";
  std::uint64_t seed = 1;
  double tol = 1e-8;
};

/// Loads a flat key=value config file ('#' comments, blank lines ignored).
/// The reserved keys kind/out/seed/tol populate the corresponding fields.
ExperimentConfig load_config_file(const std::string& path);

/// Applies one key=value override (same reserved keys as the file format).
void apply_override(ExperimentConfig& cfg, std::string_view key, std::string_view value);

struct ReportSummary {
  std::string kind;
  std::string out_path;
  int rows = 0;
  std::string headline_label;
  double headline = 0.0;
  std::string note;  // extra status, e.g. a divergence reason
};

/// Runs one experiment, writes its CSV, returns the summary. Throws
/// Error(ConfigError) naming the offending field on invalid configs.
ReportSummary run_experiment(const ExperimentConfig& cfg);

std::string summary_line(const ReportSummary& s);

}  // namespace tg
