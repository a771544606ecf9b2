#include "typerank/dataset.h"

#include <fstream>
#include <sstream>
#include <unordered_set>

#include "typerank/error.h"
#include "typerank/tsv.h"

namespace typerank {

std::vector<std::string> FeatureTable::qids() const {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (const auto& row : rows) {
    if (seen.insert(row.qid).second) out.push_back(row.qid);
  }
  return out;
}

FeatureTable FeatureTable::select(const std::vector<std::size_t>& columns) const {
  FeatureTable out;
  for (auto c : columns) out.names.push_back(names.at(c));
  out.rows.reserve(rows.size());
  for (const auto& row : rows) {
    FeatureRow r{row.qid, row.type_id, row.target, {}};
    r.values.reserve(columns.size());
    for (auto c : columns) r.values.push_back(row.values.at(c));
    out.rows.push_back(std::move(r));
  }
  return out;
}

FeatureTable parse_feature_table(std::string_view text, std::string_view source) {
  auto records = parse_tsv(text, source);
  if (records.empty()) throw DataError(std::string(source) + ": missing header");
  const auto& header = records.front();
  if (header.fields.size() < 3 || header.fields[0] != "qid" || header.fields[1] != "type_id" ||
      header.fields[2] != "target") {
    throw DataError(std::string(source) + ":" + std::to_string(header.line) +
                    ": header must start with qid, type_id, target");
  }
  FeatureTable table;
  table.names.assign(header.fields.begin() + 3, header.fields.end());
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto& rec = records[i];
    if (rec.fields.size() != table.names.size() + 3) {
      throw DataError(std::string(source) + ":" + std::to_string(rec.line) + ": expected " +
                      std::to_string(table.names.size() + 3) + " fields, got " +
                      std::to_string(rec.fields.size()));
    }
    FeatureRow row;
    row.qid = rec.fields[0];
    row.type_id = rec.fields[1];
    if (rec.fields[2] != "-") row.target = parse_double(rec.fields[2], "target");
    row.values.reserve(table.names.size());
    for (std::size_t c = 3; c < rec.fields.size(); ++c) {
      row.values.push_back(parse_double(rec.fields[c], table.names[c - 3]));
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

FeatureTable read_feature_table(const std::filesystem::path& path) {
  return parse_feature_table(read_text_file(path), path.string());
}

std::string format_feature_table(const FeatureTable& table,
                                 const std::vector<std::string>& header_comment) {
  std::string out;
  for (const auto& line : header_comment) out += "# " + line + "\n";
  out += "qid\ttype_id\ttarget";
  for (const auto& name : table.names) out += "\t" + name;
  out += "\n";
  for (const auto& row : table.rows) {
    out += row.qid + "\t" + row.type_id + "\t" + (row.target ? format_double(*row.target) : "-");
    for (double v : row.values) out += "\t" + format_double(v);
    out += "\n";
  }
  return out;
}

void write_feature_table(const FeatureTable& table, const std::filesystem::path& path,
                         const std::vector<std::string>& header_comment) {
  write_text_file(path, format_feature_table(table, header_comment));
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw DataError("failed writing " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace typerank

namespace typerank {

std::vector<QueryRecord> parse_queries(std::string_view text, std::string_view source) {
  std::vector<QueryRecord> out;
  std::unordered_set<std::string> seen;
  for (const auto& rec : parse_tsv(text, source)) {
    require_fields(rec, 2, source);
    if (!seen.insert(rec.fields[0]).second) {
      throw DataError(std::string(source) + ":" + std::to_string(rec.line) +
                      ": duplicate query id '" + rec.fields[0] + "'");
    }
    out.push_back({rec.fields[0], rec.fields[1]});
  }
  return out;
}

std::vector<QueryRecord> load_queries(const std::filesystem::path& path) {
  return parse_queries(read_text_file(path), path.string());
}

}  // namespace typerank
