#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "typerank/kb.h"
#include "typerank/retrieval.h"

namespace typerank {

// Where TC-LM takes P(w|C) from: the pseudo-type corpus or the entity corpus.
enum class BackgroundModel { kTypeCorpus, kEntityCorpus };

// Pseudo description of a type: f~(w,t) = sum_e f(w,e) * w(e,t).
struct PseudoTypeDoc {
  TypeIdx type = 0;
  // (entity-index term id, pseudo frequency), sorted by term id.
  std::vector<std::pair<std::uint32_t, double>> term_freqs;
  double length = 0.0;
};

// Types as documents. Only types with a non-empty extension are part of the
// pseudo corpus; the rest have empty docs and score 0 under both models.
// Holds a non-owning pointer to the entity index, which must outlive it.
class PseudoTypeIndex {
 public:
  PseudoTypeIndex() = default;

  static PseudoTypeIndex build(const TypeTaxonomy& taxonomy, const TypeAssociations& assoc,
                               const EntityIndex& index);

  const PseudoTypeDoc& doc(TypeIdx t) const { return docs_.at(t); }
  double freq(TypeIdx t, std::uint32_t term_id) const;
  double freq(TypeIdx t, std::string_view term) const;

  std::size_t n_docs() const { return n_docs_; }
  double total_length() const { return total_length_; }
  double avg_length() const;
  std::size_t df(std::uint32_t term_id) const { return postings_.at(term_id).size(); }
  double cf(std::uint32_t term_id) const { return cf_.at(term_id); }

  double score_bm25(const std::vector<std::string>& query, TypeIdx t,
                    const RetrievalParams& params) const;
  double score_lm(const std::vector<std::string>& query, TypeIdx t, const RetrievalParams& params,
                  BackgroundModel background = BackgroundModel::kTypeCorpus) const;
  double score(const std::vector<std::string>& query, TypeIdx t, const RetrievalParams& params,
               BackgroundModel background = BackgroundModel::kTypeCorpus) const;

  // Dense scores indexed by TypeIdx (root and empty types stay 0).
  std::vector<double> score_all(const std::vector<std::string>& query,
                                const RetrievalParams& params,
                                BackgroundModel background = BackgroundModel::kTypeCorpus) const;

 private:
  const EntityIndex* entities_ = nullptr;
  std::vector<PseudoTypeDoc> docs_;
  std::vector<std::vector<std::pair<TypeIdx, double>>> postings_;
  std::vector<double> cf_;
  std::size_t n_docs_ = 0;
  double total_length_ = 0.0;

  double background_prob(std::uint32_t term_id, BackgroundModel background) const;
};

// Dense entity-centric scores indexed by TypeIdx, aggregated from ranked hits:
// score(t) = sum over hits e carrying t of score(q,e) * w(e,t).
std::vector<double> aggregate_entity_scores(const std::vector<EntityHit>& hits,
                                            const TypeAssociations& assoc,
                                            std::size_t n_types);

// Number of relevant entities carrying t (under the associations' closure setting).
std::size_t score_oracle(TypeIdx t, const std::vector<EntityIdx>& relevant,
                         const TypeAssociations& assoc);

enum class TypeMethod { kEntityCentric, kTypeCentric, kOracle };

std::string_view method_name(TypeMethod method);  // "ec" / "tc" / "oracle"
TypeMethod parse_method(std::string_view name);   // throws UsageError

struct TypeRankingParams {
  TypeMethod method = TypeMethod::kEntityCentric;
  RetrievalParams retrieval;
  std::size_t k = 20;  // EC rank cut-off
  BackgroundModel background = BackgroundModel::kTypeCorpus;
};

// Ranks taxonomy types for queries with the baseline models. Holds
// references to the resources it was built from.
class TypeRanker {
 public:
  TypeRanker(const KnowledgeBase& kb, const EntityIndex& index, const PseudoTypeIndex& pseudo);

  const KnowledgeBase& kb() const { return kb_; }
  const EntityIndex& index() const { return index_; }
  const PseudoTypeIndex& pseudo() const { return pseudo_; }

  // Throws DataError for unknown type ids and UsageError for k < 1.
  double score_ec(std::string_view query, std::string_view type_id, long long k,
                  RetrievalModel model) const;
  double score_tc(std::string_view query, std::string_view type_id, RetrievalModel model) const;

  std::vector<double> ec_scores(const std::vector<std::string>& query, std::size_t k,
                                const RetrievalParams& params) const;

  // All positive-scoring types in ranked order. The oracle reads `relevant`.
  ScoredList rank(const std::vector<std::string>& query, const TypeRankingParams& params,
                  const std::vector<EntityIdx>& relevant = {}) const;

  // Converts a dense per-type score vector into a ranked list without zeros.
  ScoredList to_ranked(const std::vector<double>& dense) const;

 private:
  const KnowledgeBase& kb_;
  const EntityIndex& index_;
  const PseudoTypeIndex& pseudo_;
};

}  // namespace typerank
