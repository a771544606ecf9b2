#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "typerank/eval.h"
#include "typerank/kb.h"

namespace typerank {

struct Annotation {
  std::string worker;
  std::string label;  // type id or kNilToken
};

// qid -> selections, in file order.
struct AnnotationSet {
  std::map<std::string, std::vector<Annotation>> queries;
};

// `qid  worker_id  type_id_or_<NIL>` lines.
AnnotationSet parse_annotations(std::string_view text, std::string_view source = "<annotations>");
AnnotationSet load_annotations(const std::filesystem::path& path);

using CandidatePool = std::map<std::string, std::set<std::string>>;

// Union of the top-`depth` types of every run plus every oracle type.
CandidatePool build_pool(const std::vector<RunFile>& runs, std::size_t depth,
                         const CandidatePool& oracle_types = {});
std::string format_pool(const CandidatePool& pool,
                        const std::vector<std::string>& header_comment = {});

// Splits each query's candidates by top-level subtree: qid -> top-level type
// -> candidates below (or equal to) it. Unknown types throw DataError.
std::map<std::string, std::map<std::string, std::vector<std::string>>> batch_by_subtree(
    const CandidatePool& pool, const TypeTaxonomy& taxonomy);

using VoteCounts = std::map<std::string, std::map<std::string, int>>;

VoteCounts aggregate_votes(const AnnotationSet& annotations);

// Moves the votes of every voted type to its most generic voted ancestor,
// so no two voted types share a root-to-leaf path. NIL votes are kept as is.
// Throws DataError for labels not in the taxonomy.
VoteCounts merge_same_path(const VoteCounts& votes, const TypeTaxonomy& taxonomy);

TypeJudgments to_judgments(const VoteCounts& votes);

// Fleiss' kappa over an item x category count matrix. Every item must have
// the same number n >= 2 of ratings (DataError otherwise). Returns NaN when
// expected agreement is 1 (a single category used throughout).
double fleiss_kappa(const std::vector<std::vector<int>>& counts);
// Items are queries, categories are the labels seen in the set.
double fleiss_kappa(const AnnotationSet& annotations);

struct DistributionBucket {
  std::size_t n_types = 0;
  std::size_t queries = 0;
  std::size_t with_nil = 0;  // queries in the bucket that also carry NIL votes

  double nil_share() const {
    return queries == 0 ? 0.0 : static_cast<double>(with_nil) / static_cast<double>(queries);
  }
};

// Histogram of the number of positive-gain types per query.
std::vector<DistributionBucket> annotation_distribution(const TypeJudgments& judgments);

}  // namespace typerank
