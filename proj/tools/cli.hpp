// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace scampsim::cli {

/// Entry point shared by the executable and the test suites; `args` excludes
/// the program name. Returns the
/// process exit status; failures print one "error: <kind>: <message>" line to
/// `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace scampsim::cli
