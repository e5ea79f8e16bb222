#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tg/error.hpp"
#include "tg/experiment.hpp"

namespace {

struct CommonOptions {
  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  double tol = 0.0;
  std::vector<std::string> sets;
  bool out_given = false;
  bool seed_given = false;
  bool tol_given = false;
};

int run(const std::string& kind, const CommonOptions& opts) {
  tg::ExperimentConfig cfg;
  if (!opts.config.empty()) cfg = tg::load_config_file(opts.config);
  cfg.kind = kind;
  for (const std::string& kv : opts.sets) {
    std::size_t eq = kv.find('=');
    if (eq == std::string::npos)
      throw tg::Error(tg::Errc::ConfigError, "--set expects key=value, got '" + kv + "'");
    tg::apply_override(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (opts.out_given) cfg.out_path = opts.out;
  if (opts.seed_given) cfg.seed = opts.seed;
  if (opts.tol_given) cfg.tol = opts.tol;

  tg::ReportSummary summary = tg::run_experiment(cfg);
  std::cout << tg::summary_line(summary) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tglab: finite-difference distributions, dilation flows and kernel quantization"};
  app.require_subcommand(1);

  const std::pair<const char*, const char*> kinds[] = {
      {"pairing", "pair one element with a test function"},
      {"leibniz", "braided Leibniz defect sweep over random elements"},
      {"convergence", "secant sequence limit on a geometric eps schedule"},
      {"rg-order", "empirical convergence order of renormalized representatives"},
      {"duality", "rescaling duality defect sweep"},
      {"rg-trace", "dilation flow trace toward the fixed-point set"},
      {"quantize-defect", "classical-limit defect of the quantized product"},
      {"moyal", "commutator versus Poisson bracket defect"},
      {"qcalc", "deformed (shift/Jackson) derivative study"},
  };

  CommonOptions opts;
  std::string selected;
  for (const auto& [name, description] : kinds) {
    CLI::App* sub = app.add_subcommand(name, description);
    sub->add_option("-c,--config", opts.config, "flat key=value config file");
    sub->add_option("-o,--out", opts.out, "output CSV path")
        ->each([&opts](const std::string&) { opts.out_given = true; });
    sub->add_option("-s,--seed", opts.seed, "seed for randomized sweeps")
        ->each([&opts](const std::string&) { opts.seed_given = true; });
    sub->add_option("-t,--tol", opts.tol, "convergence tolerance")
        ->each([&opts](const std::string&) { opts.tol_given = true; });
    sub->add_option("--set", opts.sets, "override an experiment parameter (key=value)")
        ->take_all();
    sub->callback([&selected, name = std::string(name)]() { selected = name; });
  }

  CLI11_PARSE(app, argc, argv);

  try {
    return run(selected, opts);
  } catch (const tg::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
