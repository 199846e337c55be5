// Copyright (c) the hyperstokes developers. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef HYPERSTOKES_REPORT_HPP
#define HYPERSTOKES_REPORT_HPP

#include <map>
#include <string>
#include <vector>

namespace hyperstokes {

// Machine-readable run report (schema 1).  Every scalar carries the label of
// the identity or bound it certifies; checks carry pass flags and the pinned
// tolerance.  Serialization is deterministic: insertion order, 17 significant
// digits, no timestamps.
class Report {
 public:
  explicit Report(std::map<std::string, std::string> config_echo);

  void scalar(const std::string& name, double value, const std::string& anchor);
  void check(const std::string& name, bool pass, double value, double tolerance,
             const std::string& anchor);
  void trace(const std::string& name, const std::vector<double>& values);

  bool all_passed() const { return failures_ == 0; }
  int failures() const { return failures_; }

  std::string to_json() const;
  void write(const std::string& path) const;

 private:
  struct ScalarEntry {
    std::string name;
    double value;
    std::string anchor;
  };
  struct CheckEntry {
    std::string name;
    bool pass;
    double value;
    double tolerance;
    std::string anchor;
  };
  std::map<std::string, std::string> config_;
  std::vector<ScalarEntry> scalars_;
  std::vector<CheckEntry> checks_;
  std::vector<std::pair<std::string, std::vector<double>>> traces_;
  int failures_ = 0;
};

}  // namespace hyperstokes

#endif
