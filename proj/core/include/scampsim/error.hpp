// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace scampsim {

enum class ErrorKind {
  geometry,
  register_name,
  program,
  cost_table,
  format,
  weights,
  lowering,
  dataset,
  config,
  servo,
  io,
};

std::string_view to_string(ErrorKind kind);

/// Single exception type used across the library. `kind()` gives a stable
/// machine-readable category; `what()` carries the human-readable detail.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace scampsim
