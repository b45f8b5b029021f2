#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

using namespace dampo::cli;

namespace {

void add_common(CLI::App* app, Common& c, bool config_required = true) {
  auto* opt = app->add_option("-c,--config", c.config, "Run config (TOML)");
  if (config_required) opt->check(CLI::ExistingFile);
  app->add_option("--set", c.overrides, "Override a config key, e.g. --set temperature.beta=2 (repeatable)");
  app->add_option("-o,--output", c.output, "Primary output file (default: stdout)");
}

int run(const std::function<int()>& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kUsage;
  } catch (const dampo::Error& e) {
    std::cerr << e.what() << "\n";
    return e.code() == dampo::ErrorCode::InvalidArgument ? kUsage : kPhysics;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kPhysics;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dampo: damped quantum oscillator toolkit"};
  app.require_subcommand(1);
  std::string threads;
  app.add_option("--threads", threads, "Worker cap (same as DAMPO_THREADS)");

  Common common;
  bool classify = false, closed_form = false;
  std::string which, out_dir = ".", save_bath, load_bath;
  int points = 401, n_modes = 0;
  double bound = 0.0;

  auto* validate = app.add_subcommand("validate", "Check the model's physics constraints; JSON report");
  add_common(validate, common);
  auto* moments = app.add_subcommand("moments", "Frequency moments of the density; JSON");
  add_common(moments, common);
  auto* state = app.add_subcommand("state", "Ground and thermal oscillator state; JSON");
  add_common(state, common);
  auto* evolve = app.add_subcommand("evolve", "c, s, d and mean trajectory; CSV");
  add_common(evolve, common);
  evolve->add_flag("--classify", classify, "Append the damping classification");
  evolve->add_flag("--closed-form", closed_form, "Use the closed-form kernels (parametric models)");
  auto* figures = app.add_subcommand("figures", "Write the reference figures as SVG and CSV");
  add_common(figures, common);
  figures->add_option("which", which, "2a, 2b, 3a, 3b, 4 or all")->required();
  figures->add_option("--out-dir", out_dir, "Directory for figN.svg and figN.csv");
  figures->add_option("--points", points, "Time samples per curve");
  auto* oracle = app.add_subcommand("oracle-compare", "Discrete bath against the continuum; JSON");
  add_common(oracle, common);
  oracle->add_option("-n,--modes", n_modes, "Number of bath modes (>= 50)");
  oracle->add_option("--bound", bound, "Largest acceptable RMS deviation");
  oracle->add_option("--save-bath", save_bath, "Write the discrete bath as JSON");
  oracle->add_option("--load-bath", load_bath, "Use a discrete bath from JSON")->check(CLI::ExistingFile);
  auto* kernel = app.add_subcommand("kernel", "Memory kernel kappa(t); CSV");
  add_common(kernel, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }
  if (!threads.empty()) setenv("DAMPO_THREADS", threads.c_str(), 1);

  if (*validate) return run([&] { return cmd_validate(common); });
  if (*moments) return run([&] { return cmd_moments(common); });
  if (*state) return run([&] { return cmd_state(common); });
  if (*evolve) return run([&] { return cmd_evolve(common, classify, closed_form); });
  if (*figures) return run([&] { return cmd_figures(common, which, out_dir, points); });
  if (*oracle) return run([&] { return cmd_oracle_compare(common, n_modes, bound, save_bath, load_bath); });
  if (*kernel) return run([&] { return cmd_kernel(common); });
  return kUsage;
}
