#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace typerank {

struct TsvRecord {
  std::size_t line = 0;  // 1-based line number in the source file
  std::vector<std::string> fields;
};

// Splits on tabs; an empty line yields one empty field.
std::vector<std::string> split_tabs(std::string_view line);

// Reads every non-blank, non-'#' line of a tab separated file. Trailing '\r'
// is stripped. Throws DataError if the file cannot be opened.
std::vector<TsvRecord> read_tsv(const std::filesystem::path& path);

// Same as read_tsv but over in-memory text; `source` names it in errors.
std::vector<TsvRecord> parse_tsv(std::string_view text, std::string_view source = "<memory>");

// Throws DataError "<source>:<line>: expected N fields" when the record has
// fewer than `min_fields` fields.
void require_fields(const TsvRecord& rec, std::size_t min_fields, std::string_view source);

double parse_double(std::string_view field, std::string_view what);
long long parse_int(std::string_view field, std::string_view what);

// Shortest text that parses back to the same double.
std::string format_double(double value);

}  // namespace typerank
