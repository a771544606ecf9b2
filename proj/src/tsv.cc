#include "typerank/tsv.h"

#include <charconv>
#include <fstream>
#include <sstream>

#include "typerank/error.h"

namespace typerank {

std::vector<std::string> split_tabs(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    auto tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.emplace_back(line.substr(start));
      break;
    }
    fields.emplace_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return fields;
}

std::vector<TsvRecord> parse_tsv(std::string_view text, std::string_view /*source*/) {
  std::vector<TsvRecord> records;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    bool blank = line.find_first_not_of(" \t") == std::string_view::npos;
    if (!blank && line.front() != '#') records.push_back({line_no, split_tabs(line)});
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  return records;
}

std::vector<TsvRecord> read_tsv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_tsv(buf.str(), path.string());
}

void require_fields(const TsvRecord& rec, std::size_t min_fields, std::string_view source) {
  if (rec.fields.size() < min_fields) {
    throw DataError(std::string(source) + ":" + std::to_string(rec.line) + ": expected " +
                    std::to_string(min_fields) + " tab-separated fields, got " +
                    std::to_string(rec.fields.size()));
  }
}

double parse_double(std::string_view field, std::string_view what) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw DataError("invalid number for " + std::string(what) + ": '" + std::string(field) + "'");
  }
  return value;
}

long long parse_int(std::string_view field, std::string_view what) {
  long long value = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw DataError("invalid integer for " + std::string(what) + ": '" + std::string(field) + "'");
  }
  return value;
}

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  (void)ec;
  return std::string(buf, ptr);
}

}  // namespace typerank
