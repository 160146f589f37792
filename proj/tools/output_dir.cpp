// SPDX-License-Identifier: Apache-2.0
#include "output_dir.hpp"

#include "scampsim/atomic_file.hpp"
#include "scampsim/error.hpp"

namespace scampsim::cli {

OutputDir::OutputDir(std::filesystem::path target) : target_(std::move(target)) {
  if (target_.empty()) throw Error(ErrorKind::config, "--out is required");
  stage_ = target_;
  stage_ += ".staging";
  std::error_code ec;
  std::filesystem::remove_all(stage_, ec);
  std::filesystem::create_directories(stage_);
}

OutputDir::~OutputDir() {
  std::error_code ec;
  std::filesystem::remove_all(stage_, ec);
}

void OutputDir::write(const std::string& relative, std::string_view contents) {
  write_file_atomic(stage_ / relative, contents);
  files_.push_back(relative);
}

void OutputDir::commit() {
  for (const auto& rel : files_) {
    const auto dst = target_ / rel;
    std::filesystem::create_directories(dst.parent_path());
    std::error_code ec;
    std::filesystem::rename(stage_ / rel, dst, ec);
    if (ec) throw Error(ErrorKind::io, "cannot move output into " + dst.string());
  }
  committed_ = true;
}

}  // namespace scampsim::cli
