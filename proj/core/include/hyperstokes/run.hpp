// Copyright (c) the hyperstokes developers. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef HYPERSTOKES_RUN_HPP
#define HYPERSTOKES_RUN_HPP

#include <string>

#include "hyperstokes/config.hpp"

namespace hyperstokes {

// Exit codes: 0 all checks of the selected mode passed; 1 a numerical check
// failed (report still written); 2 configuration or solver error.
int run(const RunConfig& cfg);

/// run() with the report JSON echoed into report_out (for in-process tests).
int run(const RunConfig& cfg, std::string* report_out);

}  // namespace hyperstokes

#endif
