#pragma once

#include "config.hpp"

namespace plaser {

// Scenario execution: one CSV per sweep point plus a run.json manifest in
// cfg.out_dir. Returns the process exit code (0 ok, 1 config error,
// 2 numerical failure, 3 partial sweep failure).
int run_scenario(const ScenarioConfig& cfg, const std::string& verb = "simulate");

// Aggregated execution: one sweep.csv row per point plus run.json.
int run_sweep(const ScenarioConfig& cfg);

// Dry run: resolves every sweep point's parameters, validates them, prints
// the resolved configuration. Writes nothing.
int run_validate(const ScenarioConfig& cfg);

}  // namespace plaser
