#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "typerank/dataset.h"
#include "typerank/embeddings.h"
#include "typerank/kb.h"
#include "typerank/retrieval.h"
#include "typerank/typescore.h"

namespace typerank {

inline constexpr std::size_t kNumFeatures = 25;
inline constexpr std::array<std::size_t, 5> kEcCutoffs = {5, 10, 20, 50, 100};

// Column names f01..f25 in the feature dump, one per feature row below.
const std::array<std::string, kNumFeatures>& feature_names();
// Short descriptive names ("ec_bm25_k5", ..., "sim_avg").
const std::array<std::string, kNumFeatures>& feature_labels();

// Feature rows, 0-based:
//   0-4   EC BM25 at K = 5,10,20,50,100     5-9  EC LM at the same K
//   10    TC BM25                            11   TC LM
//   12    normalized depth                   13   children
//   14    siblings                           15   entities
//   16    label length                       17   IDF sum        18  IDF avg
//   19    unigram Jaccard                    20   bigram Jaccard 21  noun Jaccard
//   22    centroid cosine                    23   max pairwise cosine
//   24    mean pairwise cosine
struct FeatureVector {
  std::string qid;
  std::string type_id;
  std::array<double, kNumFeatures> values{};
};

// Throws DataError naming the first row outside its declared range.
void check_feature_ranges(const FeatureVector& v);

class NounTagger {
 public:
  virtual ~NounTagger() = default;
  virtual bool is_noun(std::string_view token) const = 0;
};

// Treats a token as a noun unless it is a function word, a number, or ends in
// a typical adjective/adverb/participle suffix (-ly, -est, -ous, -ful, -ive,
// -able, -ible, -ed) with at least three letters before it.
class RuleNounTagger : public NounTagger {
 public:
  bool is_noun(std::string_view token) const override;
};

struct IdfStats {
  double sum = 0.0;
  double avg = 0.0;
};

// idf(w) = max(0, ln(N / (1 + df(w)))) over the label tokens.
IdfStats idf_stats(const std::vector<std::string>& label_tokens, const EntityIndex& index);

// Set Jaccard; 0 when both sets are empty.
double jaccard(std::vector<std::string> a, std::vector<std::string> b);
double jaccard_ngrams(const std::vector<std::string>& query, const std::vector<std::string>& label,
                      int n);
double jaccard_nouns(const std::vector<std::string>& query, const std::vector<std::string>& label,
                     const NounTagger& tagger);

struct EmbeddingSims {
  double aggr = 0.0;
  double max = 0.0;
  double avg = 0.0;
};

// Distinct non-function words found in the table, in first-appearance order.
std::vector<std::string> content_words(const std::vector<std::string>& tokens,
                                       const EmbeddingTable& embeddings);

// Centroid cosine plus max and mean of pairwise cosines over content words.
// All zero when either side has no content word. With `clamp`, every cosine
// is mapped through max(0, cos).
EmbeddingSims embedding_sims(const std::vector<std::string>& query,
                             const std::vector<std::string>& label,
                             const EmbeddingTable& embeddings, bool clamp = true);

struct FeatureOptions {
  double k1 = 1.2;
  double b = 0.75;
  double mu = 2000.0;
  // Must equal kEcCutoffs; anything else is rejected.
  std::vector<std::size_t> ec_cutoffs{kEcCutoffs.begin(), kEcCutoffs.end()};
  BackgroundModel background = BackgroundModel::kTypeCorpus;
  bool clamp_cosines = true;
};

// Computes feature vectors over loaded resources. Holds references; the
// resources must outlive the extractor. Thread-safe for concurrent use.
class FeatureExtractor {
 public:
  FeatureExtractor(const TypeRanker& ranker, const EmbeddingTable& embeddings,
                   const NounTagger& tagger, FeatureOptions options = {});

  // Throws DataError for an unknown type id.
  FeatureVector extract(std::string_view qid, std::string_view query,
                        std::string_view type_id) const;
  // One vector per candidate; retrieval runs once for the query.
  std::vector<FeatureVector> extract_all(std::string_view qid, std::string_view query,
                                         const std::vector<TypeIdx>& candidates) const;

 private:
  const TypeRanker& ranker_;
  const EmbeddingTable& embeddings_;
  const NounTagger& tagger_;
  FeatureOptions options_;
};

// Packs vectors into a feature table; `target` supplies the gain per row
// (nullopt writes '-').
FeatureTable to_feature_table(
    const std::vector<FeatureVector>& vectors,
    const std::vector<std::optional<double>>& targets);

}  // namespace typerank
