// Copyright 2026 the levysum authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace levysum {

// Round-trip decimal formatting (17 significant digits) so downstream
// comparisons of CSV artifacts are exact.
std::string format_full(double v);

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> columns);

  // Emitted before the column header as "# key=value" lines, in insertion
  // order, so artifacts hash identically for identical runs.
  void meta(std::string key, std::string value);
  void meta(std::string key, double value) { meta(std::move(key), format_full(value)); }
  void meta(std::string key, std::uint64_t value) { meta(std::move(key), std::to_string(value)); }

  void row(const std::vector<std::string>& cells);
  void row_values(const std::vector<double>& values);

  void write(const std::filesystem::path& path) const;
  std::string str() const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::pair<std::string, std::string>> meta_;
  std::vector<std::string> rows_;
};

std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::filesystem::path& path);

void write_text_file(const std::filesystem::path& path, std::string_view text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace levysum
