#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "typerank/kb.h"

namespace typerank {

enum class RetrievalModel { kBM25, kLM };

std::string_view model_name(RetrievalModel model);  // "bm25" / "lm"
RetrievalModel parse_model(std::string_view name);  // throws UsageError

struct RetrievalParams {
  RetrievalModel model = RetrievalModel::kBM25;
  double k1 = 1.2;
  double b = 0.75;
  double mu = 2000.0;

  // Throws UsageError unless k1 > 0, 0 <= b <= 1, mu > 0.
  void validate() const;
};

struct ScoredItem {
  std::string id;
  double score = 0.0;
  bool operator==(const ScoredItem&) const = default;
};

// Ranked list: score descending, ties by id ascending, ids unique.
using ScoredList = std::vector<ScoredItem>;

bool ranks_before(const ScoredItem& a, const ScoredItem& b);
void sort_ranked(ScoredList& list);
// Sorts and keeps the first k entries.
void truncate_ranked(ScoredList& list, std::size_t k);

// Per-term scoring formulas shared by entity and pseudo-type documents.
// Frequencies and lengths are real so fractional pseudo counts fit.
namespace scoring {

// ln(1 + (N - df + 0.5) / (df + 0.5)); never negative.
double bm25_idf(double n_docs, double df);
double bm25_term(double tf, double doc_len, double avg_len, double idf,
                 const RetrievalParams& params);
// log of the Dirichlet-smoothed term probability (tf + mu*p) / (len + mu).
double lm_log_term(double tf, double doc_len, double p_collection, double mu);

}  // namespace scoring

struct Posting {
  EntityIdx doc = 0;
  std::uint32_t tf = 0;
};

struct EntityHit {
  EntityIdx entity = 0;
  double score = 0.0;
};

// Inverted index over entity descriptions. Document i is corpus entity i.
// Immutable after construction.
class EntityIndex {
 public:
  EntityIndex() = default;

  // Indexes descriptions; `include_names` prepends the entity name.
  static EntityIndex build(const EntityCorpus& corpus, bool include_names = false);

  // Assembles an index from stored parts (see index_io). Postings must be
  // sorted by document with tf > 0.
  static EntityIndex from_parts(std::vector<std::string> doc_ids,
                                std::vector<std::uint32_t> doc_lengths,
                                std::vector<std::string> terms,
                                std::vector<std::vector<Posting>> postings, bool include_names);

  std::size_t n_docs() const { return doc_ids_.size(); }
  std::uint64_t total_terms() const { return total_terms_; }
  double avg_doc_length() const;
  bool include_names() const { return include_names_; }

  const std::string& doc_id(EntityIdx e) const { return doc_ids_.at(e); }
  std::uint32_t doc_length(EntityIdx e) const { return doc_lengths_.at(e); }
  std::optional<EntityIdx> find_doc(std::string_view id) const;

  std::size_t vocabulary_size() const { return terms_.size(); }
  const std::string& term(std::uint32_t term_id) const { return terms_.at(term_id); }
  std::optional<std::uint32_t> term_id(std::string_view term) const;
  const std::vector<Posting>& postings(std::uint32_t term_id) const { return postings_.at(term_id); }
  std::size_t df(std::uint32_t term_id) const { return postings_.at(term_id).size(); }
  std::uint64_t cf(std::uint32_t term_id) const { return cf_.at(term_id); }
  std::size_t df(std::string_view term) const;
  std::uint64_t cf(std::string_view term) const;
  std::uint32_t tf(std::uint32_t term_id, EntityIdx e) const;

  double score_bm25(const std::vector<std::string>& query, EntityIdx e,
                    const RetrievalParams& params) const;
  // Query likelihood in [0,1]; 1 for an empty query, 0 if a query term never
  // occurs in the collection.
  double score_lm(const std::vector<std::string>& query, EntityIdx e,
                  const RetrievalParams& params) const;
  double score(const std::vector<std::string>& query, EntityIdx e,
               const RetrievalParams& params) const;

  // Top-k documents with a positive score in ranked order (ties by entity id).
  // An empty query retrieves nothing.
  std::vector<EntityHit> top_k(const std::vector<std::string>& query, std::size_t k,
                               const RetrievalParams& params) const;

 private:
  std::vector<std::string> doc_ids_;
  std::vector<std::uint32_t> doc_lengths_;
  std::unordered_map<std::string, EntityIdx> doc_by_id_;
  std::vector<std::string> terms_;
  std::unordered_map<std::string, std::uint32_t> term_by_name_;
  std::vector<std::vector<Posting>> postings_;
  std::vector<std::uint64_t> cf_;
  std::uint64_t total_terms_ = 0;
  bool include_names_ = false;

  void finalize();
};

// Id-level wrappers. Throw DataError for an unknown entity id.
double score_bm25(std::string_view query, std::string_view entity_id, const EntityIndex& index,
                  const RetrievalParams& params = {});
double score_lm(std::string_view query, std::string_view entity_id, const EntityIndex& index,
                const RetrievalParams& params = {});
// Throws UsageError for k < 1.
ScoredList retrieve_top_k(std::string_view query, long long k, const EntityIndex& index,
                          const RetrievalParams& params = {});

// Binary index file, little-endian:
//   magic "TRIX", u32 version (=1), u32 flags (bit 0: names indexed),
//   str provenance, u32 n_docs, n_docs x {str id, u32 length},
//   u32 n_terms, n_terms x {str term, u32 n_postings, n x {u32 doc, u32 tf}}
// where str = u32 byte length followed by the bytes.
inline constexpr std::uint32_t kIndexFormatVersion = 1;

void write_index(const EntityIndex& index, const std::filesystem::path& path,
                 std::string_view provenance = "");
EntityIndex read_index(const std::filesystem::path& path, std::string* provenance = nullptr);

}  // namespace typerank
