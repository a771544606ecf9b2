#include "typerank/typescore.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "typerank/error.h"
#include "typerank/text.h"

namespace typerank {

PseudoTypeIndex PseudoTypeIndex::build(const TypeTaxonomy& taxonomy,
                                       const TypeAssociations& assoc, const EntityIndex& index) {
  if (assoc.n_entities() != index.n_docs()) {
    throw DataError("entity index and type associations cover different corpora");
  }
  PseudoTypeIndex pseudo;
  pseudo.entities_ = &index;
  pseudo.docs_.resize(taxonomy.size());
  pseudo.postings_.resize(index.vocabulary_size());
  pseudo.cf_.assign(index.vocabulary_size(), 0.0);

  std::vector<std::map<std::uint32_t, double>> acc(taxonomy.size());
  for (std::uint32_t term = 0; term < index.vocabulary_size(); ++term) {
    for (const auto& p : index.postings(term)) {
      for (TypeIdx t : assoc.types_of(p.doc)) {
        acc[t][term] += static_cast<double>(p.tf) / static_cast<double>(assoc.count(t));
      }
    }
  }
  for (TypeIdx t = 0; t < taxonomy.size(); ++t) {
    auto& doc = pseudo.docs_[t];
    doc.type = t;
    doc.term_freqs.assign(acc[t].begin(), acc[t].end());
    for (const auto& [term, f] : doc.term_freqs) {
      doc.length += f;
      pseudo.postings_[term].emplace_back(t, f);
      pseudo.cf_[term] += f;
    }
    if (t != TypeTaxonomy::kRoot && assoc.count(t) > 0) {
      ++pseudo.n_docs_;
      pseudo.total_length_ += doc.length;
    }
  }
  return pseudo;
}

double PseudoTypeIndex::freq(TypeIdx t, std::uint32_t term_id) const {
  const auto& tf = docs_.at(t).term_freqs;
  auto it = std::lower_bound(tf.begin(), tf.end(), term_id,
                             [](const auto& entry, std::uint32_t id) { return entry.first < id; });
  return it != tf.end() && it->first == term_id ? it->second : 0.0;
}

double PseudoTypeIndex::freq(TypeIdx t, std::string_view term) const {
  auto id = entities_ ? entities_->term_id(term) : std::nullopt;
  return id ? freq(t, *id) : 0.0;
}

double PseudoTypeIndex::avg_length() const {
  return n_docs_ == 0 ? 0.0 : total_length_ / static_cast<double>(n_docs_);
}

double PseudoTypeIndex::background_prob(std::uint32_t term_id, BackgroundModel background) const {
  if (background == BackgroundModel::kEntityCorpus) {
    auto total = entities_->total_terms();
    return total == 0 ? 0.0
                      : static_cast<double>(entities_->cf(term_id)) / static_cast<double>(total);
  }
  return total_length_ > 0.0 ? cf_[term_id] / total_length_ : 0.0;
}

double PseudoTypeIndex::score_bm25(const std::vector<std::string>& query, TypeIdx t,
                                   const RetrievalParams& params) const {
  const auto& doc = docs_.at(t);
  if (doc.term_freqs.empty()) return 0.0;
  double n = static_cast<double>(n_docs_);
  double avg = avg_length();
  double score = 0.0;
  for (const auto& q : query) {
    auto id = entities_->term_id(q);
    if (!id) continue;
    double f = freq(t, *id);
    if (f <= 0.0) continue;
    score += scoring::bm25_term(f, doc.length, avg,
                                scoring::bm25_idf(n, static_cast<double>(df(*id))), params);
  }
  return score;
}

double PseudoTypeIndex::score_lm(const std::vector<std::string>& query, TypeIdx t,
                                 const RetrievalParams& params,
                                 BackgroundModel background) const {
  const auto& doc = docs_.at(t);
  if (doc.term_freqs.empty()) return 0.0;
  double log_like = 0.0;
  for (const auto& q : query) {
    auto id = entities_->term_id(q);
    if (!id) return 0.0;
    double p = background_prob(*id, background);
    if (p <= 0.0) return 0.0;
    log_like += scoring::lm_log_term(freq(t, *id), doc.length, p, params.mu);
  }
  return std::exp(log_like);
}

double PseudoTypeIndex::score(const std::vector<std::string>& query, TypeIdx t,
                              const RetrievalParams& params, BackgroundModel background) const {
  return params.model == RetrievalModel::kBM25 ? score_bm25(query, t, params)
                                               : score_lm(query, t, params, background);
}

std::vector<double> PseudoTypeIndex::score_all(const std::vector<std::string>& query,
                                               const RetrievalParams& params,
                                               BackgroundModel background) const {
  std::vector<double> scores(docs_.size(), 0.0);
  if (params.model == RetrievalModel::kBM25) {
    double n = static_cast<double>(n_docs_);
    double avg = avg_length();
    for (const auto& q : query) {
      auto id = entities_->term_id(q);
      if (!id) continue;
      double idf = scoring::bm25_idf(n, static_cast<double>(df(*id)));
      for (const auto& [t, f] : postings_[*id]) {
        scores[t] += scoring::bm25_term(f, docs_[t].length, avg, idf, params);
      }
    }
    return scores;
  }
  // LM: every non-empty type gets a smoothed likelihood.
  for (TypeIdx t = 1; t < docs_.size(); ++t) {
    if (!docs_[t].term_freqs.empty()) scores[t] = score_lm(query, t, params, background);
  }
  return scores;
}

std::vector<double> aggregate_entity_scores(const std::vector<EntityHit>& hits,
                                            const TypeAssociations& assoc,
                                            std::size_t n_types) {
  std::vector<double> scores(n_types, 0.0);
  for (const auto& hit : hits) {
    for (TypeIdx t : assoc.types_of(hit.entity)) {
      scores[t] += hit.score / static_cast<double>(assoc.count(t));
    }
  }
  return scores;
}

std::size_t score_oracle(TypeIdx t, const std::vector<EntityIdx>& relevant,
                         const TypeAssociations& assoc) {
  std::size_t n = 0;
  for (EntityIdx e : relevant) {
    if (assoc.has_type(e, t)) ++n;
  }
  return n;
}

std::string_view method_name(TypeMethod method) {
  switch (method) {
    case TypeMethod::kEntityCentric:
      return "ec";
    case TypeMethod::kTypeCentric:
      return "tc";
    case TypeMethod::kOracle:
      return "oracle";
  }
  return "?";
}

TypeMethod parse_method(std::string_view name) {
  if (name == "ec" || name == "EC") return TypeMethod::kEntityCentric;
  if (name == "tc" || name == "TC") return TypeMethod::kTypeCentric;
  if (name == "oracle") return TypeMethod::kOracle;
  throw UsageError("unknown method '" + std::string(name) + "' (expected ec, tc or oracle)");
}

TypeRanker::TypeRanker(const KnowledgeBase& kb, const EntityIndex& index,
                       const PseudoTypeIndex& pseudo)
    : kb_(kb), index_(index), pseudo_(pseudo) {
  if (index.n_docs() != kb.corpus.size()) {
    throw DataError("entity index does not match the entity corpus");
  }
  for (EntityIdx e = 0; e < index.n_docs(); ++e) {
    if (index.doc_id(e) != kb.corpus.entity(e).id) {
      throw DataError("entity index does not match the entity corpus at '" + index.doc_id(e) +
                      "'");
    }
  }
}

std::vector<double> TypeRanker::ec_scores(const std::vector<std::string>& query, std::size_t k,
                                          const RetrievalParams& params) const {
  return aggregate_entity_scores(index_.top_k(query, k, params), kb_.assoc, kb_.taxonomy.size());
}

double TypeRanker::score_ec(std::string_view query, std::string_view type_id, long long k,
                            RetrievalModel model) const {
  TypeIdx t = kb_.taxonomy.at(type_id);
  if (k < 1) throw UsageError("k must be at least 1");
  RetrievalParams params;
  params.model = model;
  double score = 0.0;
  for (const auto& hit : index_.top_k(tokenize(query), static_cast<std::size_t>(k), params)) {
    score += hit.score * kb_.assoc.weight(hit.entity, t);
  }
  return score;
}

double TypeRanker::score_tc(std::string_view query, std::string_view type_id,
                            RetrievalModel model) const {
  TypeIdx t = kb_.taxonomy.at(type_id);
  RetrievalParams params;
  params.model = model;
  return pseudo_.score(tokenize(query), t, params);
}

ScoredList TypeRanker::to_ranked(const std::vector<double>& dense) const {
  ScoredList out;
  for (TypeIdx t = 1; t < dense.size(); ++t) {
    if (dense[t] > 0.0) out.push_back({kb_.taxonomy.id(t), dense[t]});
  }
  sort_ranked(out);
  return out;
}

ScoredList TypeRanker::rank(const std::vector<std::string>& query,
                            const TypeRankingParams& params,
                            const std::vector<EntityIdx>& relevant) const {
  params.retrieval.validate();
  switch (params.method) {
    case TypeMethod::kEntityCentric:
      if (params.k < 1) throw UsageError("k must be at least 1");
      return to_ranked(ec_scores(query, params.k, params.retrieval));
    case TypeMethod::kTypeCentric:
      return to_ranked(pseudo_.score_all(query, params.retrieval, params.background));
    case TypeMethod::kOracle: {
      std::vector<double> dense(kb_.taxonomy.size(), 0.0);
      for (EntityIdx e : relevant) {
        for (TypeIdx t : kb_.assoc.types_of(e)) dense[t] += 1.0;
      }
      return to_ranked(dense);
    }
  }
  return {};
}

}  // namespace typerank
