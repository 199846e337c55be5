// Copyright (c) the hyperstokes developers. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef HYPERSTOKES_CONFIG_HPP
#define HYPERSTOKES_CONFIG_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hyperstokes/ingredients.hpp"

namespace hyperstokes {

enum class RunMode { stokes, ns, verify, sweep };

// Flat key = value configuration; radii are geodesic.  Environment variables
// prefixed HYPERSTOKES_ override file values, command-line flags override both.
struct RunConfig {
  RunMode mode = RunMode::stokes;
  double a = 1.0;
  double R0 = 1.0;
  int n = 1;
  double c = 1.0;
  double phase = 0.0;
  int n_r = 256;
  int n_th = 512;
  double R_max = 12.0;
  std::vector<double> schedule;         // exhaustion radii (ns)
  std::vector<double> lambda_schedule{0.25, 0.5, 0.75, 1.0};
  double picard_tol = 1e-10;
  int picard_max_iters = 200;
  double damping = 0.0;
  std::uint64_t seed = 42;
  int samples = 100;
  std::string out_dir = "out";
  bool reproducible = false;
  bool allow_large_data = false;
  CutoffProfile profile = CutoffProfile::smooth_exponential;
  std::string sweep_param;              // grid | R_max | c | n
  std::vector<double> sweep_values;

  // fail-fast validation of every module precondition reachable from here
  void validate() const;
};

/// Parses the flat key = value format ('#' comments, blank lines ignored).
RunConfig parse_config_text(const std::string& text);

/// Reads the file, applies HYPERSTOKES_* environment overrides.
RunConfig load_config(const std::string& path);

std::map<std::string, std::string> config_echo(const RunConfig& cfg);

}  // namespace hyperstokes

#endif
