#include "typerank/collection.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "typerank/dataset.h"
#include "typerank/error.h"
#include "typerank/tsv.h"

namespace typerank {

AnnotationSet parse_annotations(std::string_view text, std::string_view source) {
  AnnotationSet set;
  for (const auto& rec : parse_tsv(text, source)) {
    require_fields(rec, 3, source);
    set.queries[rec.fields[0]].push_back({rec.fields[1], rec.fields[2]});
  }
  return set;
}

AnnotationSet load_annotations(const std::filesystem::path& path) {
  return parse_annotations(read_text_file(path), path.string());
}

CandidatePool build_pool(const std::vector<RunFile>& runs, std::size_t depth,
                         const CandidatePool& oracle_types) {
  CandidatePool pool;
  for (const auto& run : runs) {
    for (const auto& [qid, list] : run.queries) {
      auto& cands = pool[qid];
      for (std::size_t i = 0; i < list.size() && i < depth; ++i) cands.insert(list[i].id);
    }
  }
  for (const auto& [qid, types] : oracle_types) pool[qid].insert(types.begin(), types.end());
  return pool;
}

std::string format_pool(const CandidatePool& pool,
                        const std::vector<std::string>& header_comment) {
  std::string out;
  for (const auto& line : header_comment) out += "# " + line + "\n";
  for (const auto& [qid, types] : pool) {
    for (const auto& t : types) out += qid + "\t" + t + "\n";
  }
  return out;
}

std::map<std::string, std::map<std::string, std::vector<std::string>>> batch_by_subtree(
    const CandidatePool& pool, const TypeTaxonomy& taxonomy) {
  std::map<std::string, std::map<std::string, std::vector<std::string>>> out;
  for (const auto& [qid, types] : pool) {
    for (const auto& t : types) {
      TypeIdx idx = taxonomy.at(t);
      out[qid][taxonomy.id(taxonomy.top_level(idx))].push_back(t);
    }
  }
  return out;
}

VoteCounts aggregate_votes(const AnnotationSet& annotations) {
  VoteCounts votes;
  for (const auto& [qid, list] : annotations.queries) {
    auto& counts = votes[qid];
    for (const auto& a : list) ++counts[a.label];
  }
  return votes;
}

VoteCounts merge_same_path(const VoteCounts& votes, const TypeTaxonomy& taxonomy) {
  VoteCounts merged;
  for (const auto& [qid, counts] : votes) {
    auto& out = merged[qid];
    std::vector<TypeIdx> voted;
    for (const auto& [label, n] : counts) {
      if (label == kNilToken) {
        out[label] += n;
        continue;
      }
      TypeIdx t = taxonomy.at(label);
      if (n > 0) voted.push_back(t);
    }
    std::sort(voted.begin(), voted.end());
    for (const auto& [label, n] : counts) {
      if (label == kNilToken) continue;
      if (n <= 0) {
        out.emplace(label, n);
        continue;
      }
      // The shallowest voted ancestor absorbs the votes; the fixpoint of the
      // pairwise child-to-ancestor merge ends there.
      TypeIdx target = taxonomy.at(label);
      for (TypeIdx a : taxonomy.ancestors(target)) {
        if (std::binary_search(voted.begin(), voted.end(), a)) target = a;
      }
      out[taxonomy.id(target)] += n;
    }
  }
  return merged;
}

TypeJudgments to_judgments(const VoteCounts& votes) {
  TypeJudgments j;
  for (const auto& [qid, counts] : votes) {
    for (const auto& [label, n] : counts) {
      if (n > 0) j.queries[qid][label] = n;
    }
  }
  return j;
}

double fleiss_kappa(const std::vector<std::vector<int>>& counts) {
  if (counts.empty()) throw DataError("kappa needs at least one item");
  const std::size_t n_categories = counts.front().size();
  long long raters = -1;
  std::vector<double> category_totals(n_categories, 0.0);
  double mean_agreement = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i].size() != n_categories) throw DataError("ragged kappa count matrix");
    long long n = 0;
    long long sq = 0;
    for (std::size_t j = 0; j < n_categories; ++j) {
      n += counts[i][j];
      sq += static_cast<long long>(counts[i][j]) * counts[i][j];
      category_totals[j] += counts[i][j];
    }
    if (raters < 0) raters = n;
    if (n != raters) {
      throw DataError("item " + std::to_string(i) + " has " + std::to_string(n) +
                      " ratings, expected " + std::to_string(raters));
    }
    if (n < 2) throw DataError("kappa needs at least two ratings per item");
    mean_agreement += static_cast<double>(sq - n) / static_cast<double>(n * (n - 1));
  }
  const double items = static_cast<double>(counts.size());
  mean_agreement /= items;
  double expected = 0.0;
  for (double total : category_totals) {
    double p = total / (items * static_cast<double>(raters));
    expected += p * p;
  }
  if (expected >= 1.0) return std::numeric_limits<double>::quiet_NaN();
  return (mean_agreement - expected) / (1.0 - expected);
}

double fleiss_kappa(const AnnotationSet& annotations) {
  std::map<std::string, std::size_t> categories;
  for (const auto& [qid, list] : annotations.queries) {
    for (const auto& a : list) categories.emplace(a.label, 0);
  }
  std::size_t next = 0;
  for (auto& [label, idx] : categories) idx = next++;
  std::vector<std::vector<int>> counts;
  for (const auto& [qid, list] : annotations.queries) {
    std::vector<int> row(categories.size(), 0);
    for (const auto& a : list) ++row[categories[a.label]];
    counts.push_back(std::move(row));
  }
  return fleiss_kappa(counts);
}

std::vector<DistributionBucket> annotation_distribution(const TypeJudgments& judgments) {
  std::map<std::size_t, DistributionBucket> buckets;
  for (const auto& [qid, gains] : judgments.queries) {
    auto n = judgments.n_main_types(qid);
    auto& b = buckets[n];
    b.n_types = n;
    ++b.queries;
    auto nil = gains.find(std::string(kNilToken));
    if (nil != gains.end() && nil->second > 0) ++b.with_nil;
  }
  std::vector<DistributionBucket> out;
  for (auto& [n, b] : buckets) out.push_back(b);
  return out;
}

}  // namespace typerank
