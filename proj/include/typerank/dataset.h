#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace typerank {

// One (query, type) row of a feature file.
struct FeatureRow {
  std::string qid;
  std::string type_id;
  std::optional<double> target;  // graded gain; nullopt for '-'
  std::vector<double> values;
};

// Feature dump: `qid  type_id  target  <feature names...>` TSV. Lines
// starting with '#' (provenance) are skipped on read.
struct FeatureTable {
  std::vector<std::string> names;
  std::vector<FeatureRow> rows;

  std::size_t width() const { return names.size(); }
  // Distinct qids in first-appearance order.
  std::vector<std::string> qids() const;
  // Copy keeping only the given columns, in the given order.
  FeatureTable select(const std::vector<std::size_t>& columns) const;
};

FeatureTable parse_feature_table(std::string_view text, std::string_view source = "<features>");
FeatureTable read_feature_table(const std::filesystem::path& path);
// `header_comment` lines are written first, each prefixed with "# ".
std::string format_feature_table(const FeatureTable& table,
                                 const std::vector<std::string>& header_comment = {});
void write_feature_table(const FeatureTable& table, const std::filesystem::path& path,
                         const std::vector<std::string>& header_comment = {});

// Writes `content` to `path`, throwing DataError on failure.
void write_text_file(const std::filesystem::path& path, std::string_view content);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace typerank

namespace typerank {

struct QueryRecord {
  std::string qid;
  std::string text;
};

// `qid  query text` lines; duplicate qids are a DataError.
std::vector<QueryRecord> parse_queries(std::string_view text, std::string_view source = "<queries>");
std::vector<QueryRecord> load_queries(const std::filesystem::path& path);

}  // namespace typerank
