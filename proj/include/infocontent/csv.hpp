#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace infocontent {

struct CsvRow {
  std::size_t number = 0;  // 1-based, header excluded
  std::vector<std::string> fields;
};

// RFC 4180 table: quoted fields may hold commas, doubled quotes and newlines.
// A leading UTF-8 BOM and CRLF line endings are accepted.
struct CsvTable {
  std::string source;
  std::vector<std::string> header;
  std::vector<CsvRow> rows;

  // Column index by name; throws ParseError when absent.
  std::size_t column(std::string_view name) const;
};

CsvTable parse_csv(std::string_view text, const std::string& source);
CsvTable read_csv(const std::filesystem::path& path);

// Reads the file and checks that the header equals `expected` exactly.
CsvTable read_csv(const std::filesystem::path& path, const std::vector<std::string>& expected);

std::string read_text_file(const std::filesystem::path& path);
// Non-empty lines with trailing CR removed.
std::vector<std::string> read_lines(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

// Shortest round-trip decimal representation.
std::string format_double(double v);
std::optional<double> parse_double(std::string_view s);
std::optional<long long> parse_int(std::string_view s);

// Parses a numeric cell, raising ParseError with row/field context.
double cell_double(const CsvTable& t, const CsvRow& r, std::size_t col);

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t v);

class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  CsvWriter& header(std::initializer_list<std::string_view> names);
  CsvWriter& field(std::string_view s);
  CsvWriter& field(double v) { return field(format_double(v)); }
  CsvWriter& field(long long v) { return field(std::to_string(v)); }
  CsvWriter& field(std::size_t v) { return field(std::to_string(v)); }
  CsvWriter& field(int v) { return field(std::to_string(v)); }
  CsvWriter& empty() { return field(std::string_view{}); }
  void end_row();

 private:
  std::ostream& out_;
  bool first_ = true;
};

}  // namespace infocontent
