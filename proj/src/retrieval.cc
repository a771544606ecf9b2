#include "typerank/retrieval.h"

#include <algorithm>
#include <cmath>

#include "typerank/error.h"
#include "typerank/text.h"

namespace typerank {

std::string_view model_name(RetrievalModel model) {
  return model == RetrievalModel::kBM25 ? "bm25" : "lm";
}

RetrievalModel parse_model(std::string_view name) {
  if (name == "bm25" || name == "BM25") return RetrievalModel::kBM25;
  if (name == "lm" || name == "LM") return RetrievalModel::kLM;
  throw UsageError("unknown retrieval model '" + std::string(name) + "' (expected bm25 or lm)");
}

void RetrievalParams::validate() const {
  if (!(k1 > 0.0)) throw UsageError("k1 must be positive");
  if (!(b >= 0.0 && b <= 1.0)) throw UsageError("b must lie in [0, 1]");
  if (!(mu > 0.0)) throw UsageError("mu must be positive");
}

bool ranks_before(const ScoredItem& a, const ScoredItem& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.id < b.id;
}

void sort_ranked(ScoredList& list) { std::sort(list.begin(), list.end(), ranks_before); }

void truncate_ranked(ScoredList& list, std::size_t k) {
  if (list.size() > k) {
    std::partial_sort(list.begin(), list.begin() + static_cast<std::ptrdiff_t>(k), list.end(),
                      ranks_before);
    list.resize(k);
  } else {
    sort_ranked(list);
  }
}

namespace scoring {

double bm25_idf(double n_docs, double df) {
  return std::log(1.0 + (n_docs - df + 0.5) / (df + 0.5));
}

double bm25_term(double tf, double doc_len, double avg_len, double idf,
                 const RetrievalParams& params) {
  if (tf <= 0.0) return 0.0;
  double norm = avg_len > 0.0 ? doc_len / avg_len : 0.0;
  return idf * tf * (params.k1 + 1.0) / (tf + params.k1 * (1.0 - params.b + params.b * norm));
}

double lm_log_term(double tf, double doc_len, double p_collection, double mu) {
  return std::log(tf + mu * p_collection) - std::log(doc_len + mu);
}

}  // namespace scoring

EntityIndex EntityIndex::build(const EntityCorpus& corpus, bool include_names) {
  EntityIndex index;
  index.include_names_ = include_names;
  index.doc_ids_.reserve(corpus.size());
  index.doc_lengths_.reserve(corpus.size());
  std::unordered_map<std::uint32_t, std::uint32_t> counts;
  std::vector<std::uint32_t> order;
  for (EntityIdx e = 0; e < corpus.size(); ++e) {
    const auto& entity = corpus.entity(e);
    auto tokens = include_names ? tokenize(entity.name + " " + entity.description)
                                : tokenize(entity.description);
    counts.clear();
    order.clear();
    for (auto& tok : tokens) {
      auto [it, fresh] =
          index.term_by_name_.emplace(tok, static_cast<std::uint32_t>(index.terms_.size()));
      if (fresh) {
        index.terms_.push_back(tok);
        index.postings_.emplace_back();
      }
      if (counts[it->second]++ == 0) order.push_back(it->second);
    }
    for (auto term : order) index.postings_[term].push_back({e, counts[term]});
    index.doc_ids_.push_back(entity.id);
    index.doc_lengths_.push_back(static_cast<std::uint32_t>(tokens.size()));
  }
  index.finalize();
  return index;
}

EntityIndex EntityIndex::from_parts(std::vector<std::string> doc_ids,
                                    std::vector<std::uint32_t> doc_lengths,
                                    std::vector<std::string> terms,
                                    std::vector<std::vector<Posting>> postings,
                                    bool include_names) {
  if (doc_ids.size() != doc_lengths.size() || terms.size() != postings.size()) {
    throw DataError("index parts have inconsistent sizes");
  }
  EntityIndex index;
  index.include_names_ = include_names;
  index.doc_ids_ = std::move(doc_ids);
  index.doc_lengths_ = std::move(doc_lengths);
  index.terms_ = std::move(terms);
  index.postings_ = std::move(postings);
  for (std::uint32_t t = 0; t < index.terms_.size(); ++t) {
    if (!index.term_by_name_.emplace(index.terms_[t], t).second) {
      throw DataError("duplicate index term '" + index.terms_[t] + "'");
    }
    EntityIdx prev = 0;
    bool first = true;
    for (const auto& p : index.postings_[t]) {
      if (p.doc >= index.doc_ids_.size() || p.tf == 0 || (!first && p.doc <= prev)) {
        throw DataError("corrupt postings for term '" + index.terms_[t] + "'");
      }
      prev = p.doc;
      first = false;
    }
  }
  index.finalize();
  return index;
}

void EntityIndex::finalize() {
  doc_by_id_.clear();
  for (EntityIdx e = 0; e < doc_ids_.size(); ++e) {
    if (!doc_by_id_.emplace(doc_ids_[e], e).second) {
      throw DataError("duplicate document id '" + doc_ids_[e] + "'");
    }
  }
  total_terms_ = 0;
  for (auto len : doc_lengths_) total_terms_ += len;
  cf_.assign(postings_.size(), 0);
  for (std::size_t t = 0; t < postings_.size(); ++t) {
    for (const auto& p : postings_[t]) cf_[t] += p.tf;
  }
}

double EntityIndex::avg_doc_length() const {
  return doc_ids_.empty() ? 0.0
                          : static_cast<double>(total_terms_) / static_cast<double>(doc_ids_.size());
}

std::optional<EntityIdx> EntityIndex::find_doc(std::string_view id) const {
  auto it = doc_by_id_.find(std::string(id));
  if (it == doc_by_id_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::uint32_t> EntityIndex::term_id(std::string_view term) const {
  auto it = term_by_name_.find(std::string(term));
  if (it == term_by_name_.end()) return std::nullopt;
  return it->second;
}

std::size_t EntityIndex::df(std::string_view term) const {
  auto t = term_id(term);
  return t ? df(*t) : 0;
}

std::uint64_t EntityIndex::cf(std::string_view term) const {
  auto t = term_id(term);
  return t ? cf(*t) : 0;
}

std::uint32_t EntityIndex::tf(std::uint32_t term_id, EntityIdx e) const {
  const auto& list = postings_.at(term_id);
  auto it = std::lower_bound(list.begin(), list.end(), e,
                             [](const Posting& p, EntityIdx doc) { return p.doc < doc; });
  return it != list.end() && it->doc == e ? it->tf : 0;
}

double EntityIndex::score_bm25(const std::vector<std::string>& query, EntityIdx e,
                               const RetrievalParams& params) const {
  double n = static_cast<double>(n_docs());
  double avg = avg_doc_length();
  double dl = doc_length(e);
  double score = 0.0;
  for (const auto& q : query) {
    auto t = term_id(q);
    if (!t) continue;
    double freq = tf(*t, e);
    if (freq == 0.0) continue;
    score += scoring::bm25_term(freq, dl, avg, scoring::bm25_idf(n, static_cast<double>(df(*t))),
                                params);
  }
  return score;
}

double EntityIndex::score_lm(const std::vector<std::string>& query, EntityIdx e,
                             const RetrievalParams& params) const {
  double dl = doc_length(e);
  double log_like = 0.0;
  for (const auto& q : query) {
    auto t = term_id(q);
    if (!t || cf(*t) == 0) return 0.0;
    double p = static_cast<double>(cf(*t)) / static_cast<double>(total_terms_);
    log_like += scoring::lm_log_term(tf(*t, e), dl, p, params.mu);
  }
  return std::exp(log_like);
}

double EntityIndex::score(const std::vector<std::string>& query, EntityIdx e,
                          const RetrievalParams& params) const {
  return params.model == RetrievalModel::kBM25 ? score_bm25(query, e, params)
                                               : score_lm(query, e, params);
}

std::vector<EntityHit> EntityIndex::top_k(const std::vector<std::string>& query, std::size_t k,
                                          const RetrievalParams& params) const {
  std::vector<EntityHit> hits;
  if (query.empty() || k == 0 || doc_ids_.empty()) return hits;

  if (params.model == RetrievalModel::kBM25) {
    std::vector<double> acc(doc_ids_.size(), 0.0);
    std::vector<bool> touched(doc_ids_.size(), false);
    double n = static_cast<double>(n_docs());
    double avg = avg_doc_length();
    for (const auto& q : query) {
      auto t = term_id(q);
      if (!t) continue;
      double idf = scoring::bm25_idf(n, static_cast<double>(df(*t)));
      for (const auto& p : postings_[*t]) {
        acc[p.doc] += scoring::bm25_term(p.tf, doc_lengths_[p.doc], avg, idf, params);
        touched[p.doc] = true;
      }
    }
    for (EntityIdx e = 0; e < acc.size(); ++e) {
      if (touched[e] && acc[e] > 0.0) hits.push_back({e, acc[e]});
    }
  } else {
    // Every document starts from the all-background likelihood; matching
    // postings then swap the background factor for the smoothed one.
    double base = 0.0;
    std::vector<std::pair<std::uint32_t, double>> terms;
    for (const auto& q : query) {
      auto t = term_id(q);
      if (!t || cf(*t) == 0) return hits;
      double p = static_cast<double>(cf(*t)) / static_cast<double>(total_terms_);
      base += std::log(params.mu * p);
      terms.emplace_back(*t, p);
    }
    std::vector<double> log_like(doc_ids_.size(), base);
    for (const auto& [t, p] : terms) {
      double background = std::log(params.mu * p);
      for (const auto& posting : postings_[t]) {
        log_like[posting.doc] += std::log(posting.tf + params.mu * p) - background;
      }
    }
    double qlen = static_cast<double>(terms.size());
    for (EntityIdx e = 0; e < log_like.size(); ++e) {
      double s = std::exp(log_like[e] - qlen * std::log(doc_lengths_[e] + params.mu));
      if (s > 0.0) hits.push_back({e, s});
    }
  }

  auto before = [this](const EntityHit& a, const EntityHit& b) {
    if (a.score != b.score) return a.score > b.score;
    return doc_ids_[a.entity] < doc_ids_[b.entity];
  };
  if (hits.size() > k) {
    std::partial_sort(hits.begin(), hits.begin() + static_cast<std::ptrdiff_t>(k), hits.end(),
                      before);
    hits.resize(k);
  } else {
    std::sort(hits.begin(), hits.end(), before);
  }
  return hits;
}

double score_bm25(std::string_view query, std::string_view entity_id, const EntityIndex& index,
                  const RetrievalParams& params) {
  auto e = index.find_doc(entity_id);
  if (!e) throw DataError("unknown entity '" + std::string(entity_id) + "'");
  return index.score_bm25(tokenize(query), *e, params);
}

double score_lm(std::string_view query, std::string_view entity_id, const EntityIndex& index,
                const RetrievalParams& params) {
  auto e = index.find_doc(entity_id);
  if (!e) throw DataError("unknown entity '" + std::string(entity_id) + "'");
  return index.score_lm(tokenize(query), *e, params);
}

ScoredList retrieve_top_k(std::string_view query, long long k, const EntityIndex& index,
                          const RetrievalParams& params) {
  if (k < 1) throw UsageError("k must be at least 1");
  params.validate();
  ScoredList out;
  for (const auto& hit : index.top_k(tokenize(query), static_cast<std::size_t>(k), params)) {
    out.push_back({index.doc_id(hit.entity), hit.score});
  }
  return out;
}

}  // namespace typerank
