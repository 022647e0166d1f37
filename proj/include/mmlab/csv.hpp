#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mmlab::csv {

// Splits one line on commas. A trailing '\r' is dropped. No quoting: every
// table in this project is purely numeric apart from fixed tokens.
std::vector<std::string_view> split(std::string_view line);

// Strict full-field parses; std::nullopt on any leftover characters.
std::optional<double> parse_double(std::string_view field);
std::optional<long long> parse_int(std::string_view field);

// Shortest decimal form that round-trips to the same double.
std::string format(double value);
std::string format(const std::optional<double>& value);  // "NA" when missing

inline constexpr std::string_view kMissing = "NA";

// Writes to a sibling temporary file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, std::string_view contents);

std::string read_file(const std::filesystem::path& path);

// Iterates lines of a buffer, accepting LF or CRLF endings.
class LineReader {
public:
  explicit LineReader(std::string_view buffer) : rest_(buffer) {}
  bool next(std::string_view& line);

private:
  std::string_view rest_;
};

}  // namespace mmlab::csv
