// Copyright (c) the hyperstokes developers. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "hyperstokes/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "hyperstokes: exterior-domain Stokes and steady Navier-Stokes flows on "
      "the hyperbolic plane (Poincare disk discretization)"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  long long seed = -1;
  bool reproducible = false;
  bool allow_large = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "configuration file (key = value)")
        ->required();
    sub->add_option("--out", out_dir, "output directory (overrides config)");
    sub->add_option("--seed", seed, "RNG seed (overrides config)");
    sub->add_flag("--reproducible", reproducible,
                  "deterministic mode: fixed-order reductions, seed pinned");
    sub->add_flag("--unsafe-allow-large-data", allow_large,
                  "bypass the smallness gate on ||dF||");
  };

  CLI::App* s_stokes = app.add_subcommand("solve-stokes", "linear pipeline");
  CLI::App* s_ns = app.add_subcommand("solve-ns", "convected pipeline");
  CLI::App* s_verify = app.add_subcommand("verify", "full verification suite");
  CLI::App* s_sweep = app.add_subcommand("sweep", "parameter sweeps");
  std::string sweep_param;
  std::string sweep_values;
  for (CLI::App* sub : {s_stokes, s_ns, s_verify, s_sweep}) add_common(sub);
  s_sweep->add_option("--param", sweep_param, "grid | R_max | c | n");
  s_sweep->add_option("--values", sweep_values, "comma-separated values");

  CLI11_PARSE(app, argc, argv);

  hyperstokes::RunConfig cfg;
  try {
    cfg = hyperstokes::load_config(config_path);
  } catch (const std::exception& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  }
  if (s_stokes->parsed()) cfg.mode = hyperstokes::RunMode::stokes;
  if (s_ns->parsed()) cfg.mode = hyperstokes::RunMode::ns;
  if (s_verify->parsed()) cfg.mode = hyperstokes::RunMode::verify;
  if (s_sweep->parsed()) {
    cfg.mode = hyperstokes::RunMode::sweep;
    if (!sweep_param.empty()) cfg.sweep_param = sweep_param;
    if (!sweep_values.empty()) {
      cfg.sweep_values.clear();
      std::string item;
      std::stringstream ss(sweep_values);
      while (std::getline(ss, item, ',')) {
        if (!item.empty()) cfg.sweep_values.push_back(std::stod(item));
      }
    }
  }
  if (!out_dir.empty()) cfg.out_dir = out_dir;
  if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
  if (reproducible) cfg.reproducible = true;
  if (allow_large) cfg.allow_large_data = true;

  return hyperstokes::run(cfg);
}
