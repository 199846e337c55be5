// Copyright (c) the hyperstokes developers. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "hyperstokes/report.hpp"

#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace hyperstokes {

Report::Report(std::map<std::string, std::string> config_echo)
    : config_(std::move(config_echo)) {}

void Report::scalar(const std::string& name, double value, const std::string& anchor) {
  scalars_.push_back({name, value, anchor});
}

void Report::check(const std::string& name, bool pass, double value,
                   double tolerance, const std::string& anchor) {
  checks_.push_back({name, pass, value, tolerance, anchor});
  if (!pass) ++failures_;
}

void Report::trace(const std::string& name, const std::vector<double>& values) {
  traces_.emplace_back(name, values);
}

std::string Report::to_json() const {
  nlohmann::ordered_json j;
  j["schema"] = 1;
  nlohmann::ordered_json cfg;
  for (const auto& [k, v] : config_) cfg[k] = v;
  j["config"] = cfg;
  nlohmann::ordered_json scal = nlohmann::ordered_json::object();
  for (const auto& s : scalars_) {
    scal[s.name] = {{"value", s.value}, {"anchor", s.anchor}};
  }
  j["scalars"] = scal;
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  for (const auto& c : checks_) {
    checks.push_back({{"name", c.name},
                      {"pass", c.pass},
                      {"value", c.value},
                      {"tolerance", c.tolerance},
                      {"anchor", c.anchor}});
  }
  j["checks"] = checks;
  nlohmann::ordered_json traces = nlohmann::ordered_json::object();
  for (const auto& [name, vals] : traces_) traces[name] = vals;
  j["traces"] = traces;
  j["failures"] = failures_;
  return j.dump(2) + "\n";
}

void Report::write(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write report to '" + path + "'");
  out << to_json();
}

}  // namespace hyperstokes
