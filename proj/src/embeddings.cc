#include "typerank/embeddings.h"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "typerank/error.h"
#include "typerank/tsv.h"

namespace typerank {

void EmbeddingTable::add(std::string_view word, std::vector<double> vector) {
  if (vector.empty()) throw DataError("empty embedding for '" + std::string(word) + "'");
  if (dim_ == 0 && vectors_.empty()) dim_ = vector.size();
  if (vector.size() != dim_) {
    throw DataError("embedding for '" + std::string(word) + "' has dimension " +
                    std::to_string(vector.size()) + ", expected " + std::to_string(dim_));
  }
  std::string key(word);
  for (auto& c : key) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  vectors_.try_emplace(std::move(key), std::move(vector));
}

std::optional<std::span<const double>> EmbeddingTable::find(std::string_view word) const {
  auto it = vectors_.find(std::string(word));
  if (it == vectors_.end()) return std::nullopt;
  return std::span<const double>(it->second);
}

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

EmbeddingTable parse_embeddings(std::string_view text, std::string_view source) {
  EmbeddingTable table;
  std::size_t expected_words = 0;
  bool header = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  std::size_t rows = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    auto fields = split_ws(line);
    if (fields.empty()) continue;
    auto where = std::string(source) + ":" + std::to_string(line_no) + ": ";
    if (line_no == 1 && fields.size() == 2 && all_digits(fields[0]) && all_digits(fields[1])) {
      header = true;
      expected_words = static_cast<std::size_t>(parse_int(fields[0], "vocabulary size"));
      auto dim = static_cast<std::size_t>(parse_int(fields[1], "dimension"));
      if (dim == 0) throw DataError(where + "dimension must be positive");
      table = EmbeddingTable(dim);
      continue;
    }
    if (fields.size() < 2) throw DataError(where + "expected a word followed by its vector");
    std::vector<double> vec;
    vec.reserve(fields.size() - 1);
    for (std::size_t i = 1; i < fields.size(); ++i) vec.push_back(parse_double(fields[i], "vector"));
    try {
      table.add(fields[0], std::move(vec));
    } catch (const DataError& e) {
      throw DataError(where + e.what());
    }
    ++rows;
  }
  if (header && rows != expected_words) {
    throw DataError(std::string(source) + ": header announces " + std::to_string(expected_words) +
                    " words, found " + std::to_string(rows));
  }
  return table;
}

EmbeddingTable load_embeddings(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_embeddings(buf.str(), path.string());
}

double cosine(std::span<const double> a, std::span<const double> b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace typerank
