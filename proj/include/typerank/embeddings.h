#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace typerank {

// Pretrained word vectors keyed by lowercase word.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  explicit EmbeddingTable(std::size_t dim) : dim_(dim) {}

  // Throws DataError when the vector length differs from dim(). The first
  // vector added to an empty table fixes the dimension. Later duplicates of
  // a word are ignored.
  void add(std::string_view word, std::vector<double> vector);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return vectors_.size(); }
  bool contains(std::string_view word) const { return find(word).has_value(); }
  // Absent words yield nullopt, never a zero vector.
  std::optional<std::span<const double>> find(std::string_view word) const;

 private:
  std::size_t dim_ = 0;
  std::unordered_map<std::string, std::vector<double>> vectors_;
};

// word2vec text format: `word v1 ... vd` per line with an optional `V D`
// header line. Validates a uniform dimension (and V when a header is given).
EmbeddingTable parse_embeddings(std::string_view text, std::string_view source = "<embeddings>");
EmbeddingTable load_embeddings(const std::filesystem::path& path);

// Cosine similarity; 0 when either vector has zero norm.
double cosine(std::span<const double> a, std::span<const double> b);

}  // namespace typerank
