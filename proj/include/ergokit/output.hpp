#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace ergokit {

// 64-bit FNV-1a; used to stamp outputs with the config that produced them.
std::uint64_t fnv1a64(std::string_view bytes);
std::string hash_hex(std::uint64_t hash);

// Shortest text that reads back to the same double (17 significant digits).
std::string format_double(double value);

using CsvCell = std::variant<double, long long, std::string>;

// Rows are rendered in insertion order; cell text depends only on the value,
// so equal inputs give byte-identical files.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns);

  void add_row(std::vector<CsvCell> cells);
  std::size_t rows() const { return rows_.size(); }
  const std::vector<std::string>& columns() const { return columns_; }

  // "# config-hash: <hex>" line, then the header, then the rows.
  std::string render(std::string_view config_hash) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<CsvCell>> rows_;
};

// Writes via a temporary file and rename so readers never see partial output.
void write_text_file(const std::filesystem::path& path, std::string_view content);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace ergokit
