// Copyright (c) the hyperstokes developers. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "hyperstokes/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace hyperstokes {

namespace {
std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(std::stod(item));
  }
  return out;
}

bool parse_bool(const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw std::invalid_argument("boolean value expected, got '" + v + "'");
}

void apply_key(RunConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "mode") {
    if (value == "stokes") cfg.mode = RunMode::stokes;
    else if (value == "ns") cfg.mode = RunMode::ns;
    else if (value == "verify") cfg.mode = RunMode::verify;
    else if (value == "sweep") cfg.mode = RunMode::sweep;
    else throw std::invalid_argument("unknown mode '" + value + "'");
  } else if (key == "a") cfg.a = std::stod(value);
  else if (key == "r0") cfg.R0 = std::stod(value);
  else if (key == "n") cfg.n = std::stoi(value);
  else if (key == "c") cfg.c = std::stod(value);
  else if (key == "phase") cfg.phase = std::stod(value);
  else if (key == "nr") cfg.n_r = std::stoi(value);
  else if (key == "nth") cfg.n_th = std::stoi(value);
  else if (key == "rmax") cfg.R_max = std::stod(value);
  else if (key == "schedule") cfg.schedule = parse_list(value);
  else if (key == "lambda_schedule") cfg.lambda_schedule = parse_list(value);
  else if (key == "picard_tol") cfg.picard_tol = std::stod(value);
  else if (key == "picard_max_iters") cfg.picard_max_iters = std::stoi(value);
  else if (key == "damping") cfg.damping = std::stod(value);
  else if (key == "seed") cfg.seed = std::stoull(value);
  else if (key == "samples") cfg.samples = std::stoi(value);
  else if (key == "out") cfg.out_dir = value;
  else if (key == "reproducible") cfg.reproducible = parse_bool(value);
  else if (key == "unsafe_allow_large_data") cfg.allow_large_data = parse_bool(value);
  else if (key == "cutoff_profile") {
    if (value == "smooth") cfg.profile = CutoffProfile::smooth_exponential;
    else if (value == "quintic") cfg.profile = CutoffProfile::quintic_c2;
    else throw std::invalid_argument("unknown cutoff_profile '" + value + "'");
  } else if (key == "sweep_param") cfg.sweep_param = value;
  else if (key == "sweep_values") cfg.sweep_values = parse_list(value);
  else throw std::invalid_argument("unknown config key '" + key + "'");
}

const char* kKeys[] = {"mode", "a", "r0", "n", "c", "phase", "nr", "nth",
                       "rmax", "schedule", "lambda_schedule", "picard_tol",
                       "picard_max_iters", "damping", "seed", "samples", "out",
                       "reproducible", "unsafe_allow_large_data",
                       "cutoff_profile", "sweep_param", "sweep_values"};
}  // namespace

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected key = value");
    }
    apply_key(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  RunConfig cfg = parse_config_text(ss.str());
  for (const char* key : kKeys) {
    std::string env = "HYPERSTOKES_";
    for (const char* p = key; *p; ++p) env += static_cast<char>(std::toupper(*p));
    if (const char* v = std::getenv(env.c_str())) apply_key(cfg, key, v);
  }
  return cfg;
}

void RunConfig::validate() const {
  DomainSpec spec(a, R0);  // throws on bad a / R0
  HarmonicSpec hs(n, c, phase);
  if (n_r < 8) throw std::invalid_argument("nr must be >= 8");
  if (n_th < 16 || n_th % 2 != 0) throw std::invalid_argument("nth must be even and >= 16");
  if (!(R_max > R0)) throw std::invalid_argument("rmax must exceed r0");
  if (R_max < 4.0 * R0) {
    throw std::invalid_argument(
        "rmax below 4 r0: the cutoff transition is not covered by the grid");
  }
  if (mode == RunMode::ns) {
    if (lambda_schedule.empty()) throw std::invalid_argument("lambda_schedule empty");
    double prev = 0.0;
    for (double l : lambda_schedule) {
      if (!(l > prev) || l > 1.0) {
        throw std::invalid_argument("lambda_schedule must increase within (0,1]");
      }
      prev = l;
    }
    if (lambda_schedule.back() != 1.0) {
      throw std::invalid_argument("lambda_schedule must end at 1");
    }
    if (!(picard_tol > 0.0)) throw std::invalid_argument("picard_tol must be > 0");
    if (picard_max_iters < 1) throw std::invalid_argument("picard_max_iters must be >= 1");
    if (damping < 0.0 || damping >= 1.0) {
      throw std::invalid_argument("damping must lie in [0,1)");
    }
    double prevR = 5.0 * R0;
    for (double R : schedule) {
      if (!(R > prevR)) {
        throw std::invalid_argument("schedule radii must increase and exceed 5 r0");
      }
      prevR = R;
    }
  }
  if (mode == RunMode::sweep) {
    if (sweep_param != "grid" && sweep_param != "R_max" && sweep_param != "c" &&
        sweep_param != "n") {
      throw std::invalid_argument("sweep_param must be grid | R_max | c | n");
    }
    if (sweep_values.empty()) throw std::invalid_argument("sweep_values empty");
  }
  if (samples < 1) throw std::invalid_argument("samples must be >= 1");
  (void)spec;
  (void)hs;
}

std::map<std::string, std::string> config_echo(const RunConfig& cfg) {
  std::map<std::string, std::string> m;
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  m["mode"] = cfg.mode == RunMode::stokes   ? "stokes"
              : cfg.mode == RunMode::ns     ? "ns"
              : cfg.mode == RunMode::verify ? "verify"
                                            : "sweep";
  m["a"] = num(cfg.a);
  m["r0"] = num(cfg.R0);
  m["n"] = std::to_string(cfg.n);
  m["c"] = num(cfg.c);
  m["phase"] = num(cfg.phase);
  m["nr"] = std::to_string(cfg.n_r);
  m["nth"] = std::to_string(cfg.n_th);
  m["rmax"] = num(cfg.R_max);
  m["seed"] = std::to_string(cfg.seed);
  m["samples"] = std::to_string(cfg.samples);
  m["reproducible"] = cfg.reproducible ? "true" : "false";
  m["cutoff_profile"] =
      cfg.profile == CutoffProfile::smooth_exponential ? "smooth" : "quintic";
  return m;
}

}  // namespace hyperstokes
