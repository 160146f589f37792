// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace scampsim::cli {

/// Collects a command's outputs in a staging directory next to the target
/// and moves them into place only on commit(). An uncommitted stage is
/// deleted on destruction, so a failed command leaves nothing behind.
class OutputDir {
 public:
  explicit OutputDir(std::filesystem::path target);
  ~OutputDir();
  OutputDir(const OutputDir&) = delete;
  OutputDir& operator=(const OutputDir&) = delete;

  void write(const std::string& relative, std::string_view contents);
  void commit();
  const std::filesystem::path& target() const { return target_; }

 private:
  std::filesystem::path target_;
  std::filesystem::path stage_;
  std::vector<std::string> files_;
  bool committed_ = false;
};

}  // namespace scampsim::cli
