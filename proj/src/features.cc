#include "typerank/features.h"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "typerank/error.h"
#include "typerank/text.h"

namespace typerank {

const std::array<std::string, kNumFeatures>& feature_names() {
  static const auto names = [] {
    std::array<std::string, kNumFeatures> out;
    for (std::size_t i = 0; i < kNumFeatures; ++i) {
      out[i] = (i < 9 ? "f0" : "f") + std::to_string(i + 1);
    }
    return out;
  }();
  return names;
}

const std::array<std::string, kNumFeatures>& feature_labels() {
  static const std::array<std::string, kNumFeatures> labels = {
      "ec_bm25_k5",  "ec_bm25_k10", "ec_bm25_k20", "ec_bm25_k50", "ec_bm25_k100",
      "ec_lm_k5",    "ec_lm_k10",   "ec_lm_k20",   "ec_lm_k50",   "ec_lm_k100",
      "tc_bm25",     "tc_lm",       "depth",       "children",    "siblings",
      "entities",    "length",      "idf_sum",     "idf_avg",     "jterms_1",
      "jterms_2",    "jnouns",      "sim_aggr",    "sim_max",     "sim_avg"};
  return labels;
}

void check_feature_ranges(const FeatureVector& v) {
  auto fail = [&](std::size_t row) {
    throw DataError("feature " + feature_labels()[row] + " = " + std::to_string(v.values[row]) +
                    " out of range for (" + v.qid + ", " + v.type_id + ")");
  };
  auto unit = [](double x) { return x >= 0.0 && x <= 1.0; };
  for (std::size_t i = 0; i < kNumFeatures; ++i) {
    double x = v.values[i];
    if (!std::isfinite(x) || x < 0.0) fail(i);
  }
  for (std::size_t i : {5, 6, 7, 8, 9, 11, 12, 19, 20, 21, 22, 23, 24}) {
    if (!unit(v.values[i])) fail(i);
  }
  if (v.values[16] < 1.0) fail(16);
}

bool RuleNounTagger::is_noun(std::string_view token) const {
  if (token.empty() || is_function_word(token)) return false;
  if (std::all_of(token.begin(), token.end(),
                  [](unsigned char c) { return std::isdigit(c); })) {
    return false;
  }
  static constexpr std::string_view kSuffixes[] = {"ly",   "est",  "ous", "ful",
                                                   "ive",  "able", "ible", "ed"};
  for (auto suffix : kSuffixes) {
    if (token.size() >= suffix.size() + 3 && token.ends_with(suffix)) return false;
  }
  return true;
}

IdfStats idf_stats(const std::vector<std::string>& label_tokens, const EntityIndex& index) {
  IdfStats stats;
  if (label_tokens.empty()) return stats;
  double n = static_cast<double>(index.n_docs());
  for (const auto& tok : label_tokens) {
    double df = static_cast<double>(index.df(tok));
    double idf = n > 0.0 ? std::log(n / (1.0 + df)) : 0.0;
    stats.sum += std::max(0.0, idf);
  }
  stats.avg = stats.sum / static_cast<double>(label_tokens.size());
  return stats;
}

double jaccard(std::vector<std::string> a, std::vector<std::string> b) {
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  std::vector<std::string> common;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
  std::size_t uni = a.size() + b.size() - common.size();
  return uni == 0 ? 0.0 : static_cast<double>(common.size()) / static_cast<double>(uni);
}

double jaccard_ngrams(const std::vector<std::string>& query, const std::vector<std::string>& label,
                      int n) {
  return jaccard(ngram_set(query, n), ngram_set(label, n));
}

double jaccard_nouns(const std::vector<std::string>& query, const std::vector<std::string>& label,
                     const NounTagger& tagger) {
  auto nouns = [&tagger](const std::vector<std::string>& tokens) {
    std::vector<std::string> out;
    for (const auto& t : tokens) {
      if (tagger.is_noun(t)) out.push_back(t);
    }
    return out;
  };
  return jaccard(nouns(query), nouns(label));
}

std::vector<std::string> content_words(const std::vector<std::string>& tokens,
                                       const EmbeddingTable& embeddings) {
  std::vector<std::string> out;
  for (const auto& t : tokens) {
    if (is_function_word(t) || !embeddings.contains(t)) continue;
    if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
  }
  return out;
}

EmbeddingSims embedding_sims(const std::vector<std::string>& query,
                             const std::vector<std::string>& label,
                             const EmbeddingTable& embeddings, bool clamp) {
  EmbeddingSims sims;
  auto qwords = content_words(query, embeddings);
  auto twords = content_words(label, embeddings);
  if (qwords.empty() || twords.empty()) return sims;

  auto adjust = [clamp](double c) {
    c = std::clamp(c, -1.0, 1.0);
    return clamp ? std::max(0.0, c) : c;
  };
  auto centroid = [&embeddings](const std::vector<std::string>& words) {
    std::vector<double> c(embeddings.dim(), 0.0);
    for (const auto& w : words) {
      auto v = *embeddings.find(w);
      for (std::size_t i = 0; i < c.size(); ++i) c[i] += v[i];
    }
    for (auto& x : c) x /= static_cast<double>(words.size());
    return c;
  };
  sims.aggr = adjust(cosine(centroid(qwords), centroid(twords)));

  double total = 0.0;
  double best = -1.0;
  for (const auto& qw : qwords) {
    auto qv = *embeddings.find(qw);
    for (const auto& tw : twords) {
      double c = adjust(cosine(qv, *embeddings.find(tw)));
      total += c;
      best = std::max(best, c);
    }
  }
  sims.max = best;
  sims.avg = total / static_cast<double>(qwords.size() * twords.size());
  return sims;
}

FeatureExtractor::FeatureExtractor(const TypeRanker& ranker, const EmbeddingTable& embeddings,
                                   const NounTagger& tagger, FeatureOptions options)
    : ranker_(ranker), embeddings_(embeddings), tagger_(tagger), options_(std::move(options)) {
  if (!std::equal(options_.ec_cutoffs.begin(), options_.ec_cutoffs.end(), kEcCutoffs.begin(),
                  kEcCutoffs.end())) {
    throw UsageError("the EC cut-off grid is fixed to 5,10,20,50,100");
  }
  RetrievalParams p;
  p.k1 = options_.k1;
  p.b = options_.b;
  p.mu = options_.mu;
  p.validate();
}

FeatureVector FeatureExtractor::extract(std::string_view qid, std::string_view query,
                                        std::string_view type_id) const {
  TypeIdx t = ranker_.kb().taxonomy.at(type_id);
  return extract_all(qid, query, {t}).front();
}

std::vector<FeatureVector> FeatureExtractor::extract_all(
    std::string_view qid, std::string_view query, const std::vector<TypeIdx>& candidates) const {
  const auto& kb = ranker_.kb();
  const auto& index = ranker_.index();
  const auto& pseudo = ranker_.pseudo();
  auto q = tokenize(query);

  RetrievalParams bm25{RetrievalModel::kBM25, options_.k1, options_.b, options_.mu};
  RetrievalParams lm{RetrievalModel::kLM, options_.k1, options_.b, options_.mu};
  const std::size_t max_k = kEcCutoffs.back();

  // Rankings are strict total orders, so the top-K list for each K is a
  // prefix of the top-100 list.
  std::array<std::vector<double>, 10> ec;
  for (int m = 0; m < 2; ++m) {
    auto hits = index.top_k(q, max_k, m == 0 ? bm25 : lm);
    for (std::size_t j = 0; j < kEcCutoffs.size(); ++j) {
      std::vector<EntityHit> prefix(hits.begin(),
                                    hits.begin() + static_cast<std::ptrdiff_t>(
                                                       std::min(hits.size(), kEcCutoffs[j])));
      ec[m * 5 + j] = aggregate_entity_scores(prefix, kb.assoc, kb.taxonomy.size());
    }
  }
  auto tc_bm25 = pseudo.score_all(q, bm25, options_.background);
  auto tc_lm = pseudo.score_all(q, lm, options_.background);

  std::vector<FeatureVector> out;
  out.reserve(candidates.size());
  for (TypeIdx t : candidates) {
    if (t == TypeTaxonomy::kRoot || t >= kb.taxonomy.size()) {
      throw DataError("unknown type index " + std::to_string(t));
    }
    FeatureVector v;
    v.qid = std::string(qid);
    v.type_id = kb.taxonomy.id(t);
    auto& f = v.values;
    for (std::size_t i = 0; i < 10; ++i) f[i] = ec[i][t];
    f[10] = tc_bm25[t];
    f[11] = tc_lm[t];
    auto tax = taxonomy_features(t, kb.taxonomy, kb.assoc);
    f[12] = tax.depth_norm;
    f[13] = static_cast<double>(tax.n_children);
    f[14] = static_cast<double>(tax.n_siblings);
    f[15] = static_cast<double>(tax.n_entities);
    const auto& label = kb.taxonomy.node(t).label_tokens;
    f[16] = static_cast<double>(label.size());
    auto idf = idf_stats(label, index);
    f[17] = idf.sum;
    f[18] = idf.avg;
    f[19] = jaccard_ngrams(q, label, 1);
    f[20] = jaccard_ngrams(q, label, 2);
    f[21] = jaccard_nouns(q, label, tagger_);
    auto sims = embedding_sims(q, label, embeddings_, options_.clamp_cosines);
    f[22] = sims.aggr;
    f[23] = sims.max;
    f[24] = sims.avg;
    out.push_back(std::move(v));
  }
  return out;
}

FeatureTable to_feature_table(const std::vector<FeatureVector>& vectors,
                              const std::vector<std::optional<double>>& targets) {
  if (targets.size() != vectors.size()) throw UsageError("one target per feature vector expected");
  FeatureTable table;
  table.names.assign(feature_names().begin(), feature_names().end());
  table.rows.reserve(vectors.size());
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    const auto& v = vectors[i];
    table.rows.push_back({v.qid, v.type_id, targets[i], {v.values.begin(), v.values.end()}});
  }
  return table;
}

}  // namespace typerank
