#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

namespace typerank {

struct SyntheticOptions {
  std::uint64_t seed = 7;
  std::size_t n_queries = 40;
  std::size_t entities_per_leaf = 6;
  double p_question = 0.5;  // share of queries phrased as questions
  double p_multi = 0.25;    // share of queries with two target types
  std::size_t workers = 7;  // annotators per query
};

// A small self-contained collection in the on-disk formats the tools read.
// Queries name their target type's label next to topic words borrowed from
// an unrelated type, so the label-similarity features carry the signal and
// entity retrieval mostly points at the wrong types.
struct SyntheticCollection {
  std::string types_tsv;
  std::string entities_tsv;
  std::string entity_types_tsv;
  std::string queries_tsv;
  std::string categories_tsv;
  std::string annotations_tsv;
  std::string type_qrels_tsv;  // annotations merged along taxonomy paths
  std::string entity_qrels_tsv;
  std::string embeddings_txt;
};

SyntheticCollection make_synthetic_collection(const SyntheticOptions& options = {});

// Writes types.tsv, entities.tsv, entity_types.tsv, queries.tsv,
// categories.tsv, annotations.tsv, type_qrels.tsv, entity_qrels.tsv and
// embeddings.txt into `dir` (created if missing).
void write_synthetic_collection(const SyntheticCollection& collection,
                                const std::filesystem::path& dir);

}  // namespace typerank
