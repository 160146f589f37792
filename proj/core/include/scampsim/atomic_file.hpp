// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string_view>

namespace scampsim {

/// Writes to "<path>.tmp" then renames over `path`; parent directories are
/// created as needed.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace scampsim
