#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "config.hpp"
#include "errors.hpp"
#include "runner.hpp"
#include "version.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  plaser::CliOverrides ov;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool with_laser_ics) {
  cmd->add_option("--config", args.config_path, "scenario config file")
      ->required()
      ->check(CLI::ExistingFile);
  auto opt_str = [&](const char* flag, std::optional<std::string>& slot, const char* help) {
    cmd->add_option_function<std::string>(
        flag, [&slot](const std::string& v) { slot = v; }, help);
  };
  auto opt_dbl = [&](const char* flag, std::optional<double>& slot, const char* help) {
    cmd->add_option_function<double>(flag, [&slot](double v) { slot = v; }, help);
  };
  opt_str("--out", args.ov.out_dir, "output directory (overrides scenario.out)");
  opt_str("--method", args.ov.method,
          "moments | product | euler_product | midpoint_product");
  opt_str("--noise-mode", args.ov.noise_mode, "paper_literal | full");
  cmd->add_option_function<long long>(
      "--steps", [&args](long long v) { args.ov.n_steps = v; },
      "fixed step count (0 = automatic)");
  opt_dbl("--t-end", args.ov.t_end, "evolution horizon");
  if (with_laser_ics) {
    opt_dbl("--b-s0-re", args.ov.b_s0_re, "initial stimulated phonon amplitude, real part");
    opt_dbl("--b-s0-im", args.ov.b_s0_im, "initial stimulated phonon amplitude, imag part");
    opt_dbl("--p0-re", args.ov.p0_re, "initial polarization, real part");
    opt_dbl("--p0-im", args.ov.p0_im, "initial polarization, imag part");
  }
}

plaser::ScenarioConfig load_config(const CommonArgs& args, const char* forced_scenario) {
  plaser::ConfigFile file = plaser::ConfigFile::parse_file(args.config_path);
  if (forced_scenario) {
    // the spectrum verb pins the scenario regardless of the file's name=
    bool found = false;
    for (auto& kv : file.sections["scenario"]) {
      if (kv.first == "name") {
        kv.second = forced_scenario;
        found = true;
      }
    }
    if (!found) file.sections["scenario"].emplace_back("name", forced_scenario);
  }
  plaser::ScenarioConfig cfg = plaser::ScenarioConfig::load(file);
  plaser::apply_overrides(cfg, args.ov);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string(plaser::tool_name) +
               " - coupled active-passive cavity phonon laser simulator"};
  app.set_version_flag("--version", plaser::tool_version);
  app.require_subcommand(1);

  CommonArgs sim_args, sweep_args, spec_args, val_args;
  CLI::App* sim = app.add_subcommand("simulate", "run a scenario, one csv per point");
  add_common(sim, sim_args, true);
  CLI::App* swp = app.add_subcommand("sweep", "run a sweep, aggregated csv");
  add_common(swp, sweep_args, true);
  CLI::App* spc = app.add_subcommand("spectrum", "coupled-mode response scan");
  add_common(spc, spec_args, false);
  CLI::App* val = app.add_subcommand("validate", "parse and validate a config, write nothing");
  add_common(val, val_args, true);

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) return plaser::run_scenario(load_config(sim_args, nullptr));
    if (swp->parsed()) return plaser::run_sweep(load_config(sweep_args, nullptr));
    if (spc->parsed()) return plaser::run_scenario(load_config(spec_args, "spectrum"));
    if (val->parsed()) return plaser::run_validate(load_config(val_args, nullptr));
  } catch (const plaser::SimError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == plaser::ErrCode::ConfigError ? 1 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
