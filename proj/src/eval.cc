#include "typerank/eval.h"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <unordered_set>

#include <boost/math/distributions/students_t.hpp>

#include "typerank/dataset.h"
#include "typerank/error.h"
#include "typerank/tsv.h"

namespace typerank {

std::size_t TypeJudgments::n_main_types(const std::string& qid) const {
  auto it = queries.find(qid);
  if (it == queries.end()) return 0;
  std::size_t n = 0;
  for (const auto& [type, gain] : it->second) {
    if (type != kNilToken && gain > 0) ++n;
  }
  return n;
}

TypeJudgments parse_qrels(std::string_view text, std::string_view source) {
  TypeJudgments j;
  for (const auto& rec : parse_tsv(text, source)) {
    require_fields(rec, 3, source);
    auto gain = parse_int(rec.fields[2], "gain");
    if (gain < 0) {
      throw DataError(std::string(source) + ":" + std::to_string(rec.line) + ": negative gain");
    }
    if (!j.queries[rec.fields[0]].emplace(rec.fields[1], static_cast<int>(gain)).second) {
      throw DataError(std::string(source) + ":" + std::to_string(rec.line) + ": duplicate judgment");
    }
  }
  return j;
}

TypeJudgments load_qrels(const std::filesystem::path& path) {
  return parse_qrels(read_text_file(path), path.string());
}

std::string format_qrels(const TypeJudgments& judgments,
                         const std::vector<std::string>& header_comment) {
  std::string out;
  for (const auto& line : header_comment) out += "# " + line + "\n";
  for (const auto& [qid, gains] : judgments.queries) {
    for (const auto& [type, gain] : gains) {
      out += qid + "\t" + type + "\t" + std::to_string(gain) + "\n";
    }
  }
  return out;
}

NilFilterResult filter_nil(const TypeJudgments& judgments) {
  NilFilterResult result;
  for (const auto& [qid, gains] : judgments.queries) {
    std::map<std::string, int> kept;
    bool positive = false;
    for (const auto& [type, gain] : gains) {
      if (type == kNilToken) continue;
      kept.emplace(type, gain);
      positive = positive || gain > 0;
    }
    if (positive) {
      result.judgments.queries.emplace(qid, std::move(kept));
    } else {
      result.removed.push_back(qid);
    }
  }
  return result;
}

RunFile parse_run(std::string_view text, std::string_view source) {
  RunFile run;
  std::map<std::string, std::vector<std::pair<long long, ScoredItem>>> staged;
  for (const auto& rec : parse_tsv(text, source)) {
    require_fields(rec, 4, source);
    auto rank = parse_int(rec.fields[2], "rank");
    auto score = parse_double(rec.fields[3], "score");
    if (rec.fields.size() > 4 && run.name.empty()) run.name = rec.fields[4];
    staged[rec.fields[0]].push_back({rank, {rec.fields[1], score}});
  }
  for (auto& [qid, entries] : staged) {
    std::stable_sort(entries.begin(), entries.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    std::unordered_set<std::string> seen;
    ScoredList list;
    for (auto& [rank, item] : entries) {
      if (!seen.insert(item.id).second) {
        throw DataError(std::string(source) + ": type '" + item.id + "' listed twice for query '" +
                        qid + "'");
      }
      list.push_back(std::move(item));
    }
    run.queries.emplace(qid, std::move(list));
  }
  return run;
}

RunFile load_run(const std::filesystem::path& path) {
  return parse_run(read_text_file(path), path.string());
}

std::string format_run(const RunFile& run, const std::vector<std::string>& header_comment) {
  std::string out;
  for (const auto& line : header_comment) out += "# " + line + "\n";
  for (const auto& [qid, list] : run.queries) {
    for (std::size_t i = 0; i < list.size(); ++i) {
      out += qid + "\t" + list[i].id + "\t" + std::to_string(i + 1) + "\t" +
             format_double(list[i].score) + "\t" + run.name + "\n";
    }
  }
  return out;
}

void write_run(const RunFile& run, const std::filesystem::path& path,
               const std::vector<std::string>& header_comment) {
  write_text_file(path, format_run(run, header_comment));
}

namespace {

double gain_value(int gain, GainMode mode) {
  return mode == GainMode::kLinear ? static_cast<double>(gain) : std::exp2(gain) - 1.0;
}

}  // namespace

double ndcg_at_k(const ScoredList& ranking, const std::map<std::string, int>& gains, int k,
                 GainMode mode) {
  if (k < 1) throw UsageError("cut-off k must be at least 1");
  const auto cutoff = static_cast<std::size_t>(k);

  std::vector<int> ideal;
  for (const auto& [type, gain] : gains) {
    if (type != kNilToken && gain > 0) ideal.push_back(gain);
  }
  std::sort(ideal.begin(), ideal.end(), std::greater<>());
  double idcg = 0.0;
  for (std::size_t i = 0; i < ideal.size() && i < cutoff; ++i) {
    idcg += gain_value(ideal[i], mode) / std::log2(static_cast<double>(i) + 2.0);
  }
  if (idcg <= 0.0) return 0.0;

  double dcg = 0.0;
  for (std::size_t i = 0; i < ranking.size() && i < cutoff; ++i) {
    if (ranking[i].id == kNilToken) continue;
    auto it = gains.find(ranking[i].id);
    if (it == gains.end() || it->second <= 0) continue;
    dcg += gain_value(it->second, mode) / std::log2(static_cast<double>(i) + 2.0);
  }
  return dcg / idcg;
}

EvalReport evaluate_run(const RunFile& run, const TypeJudgments& judgments,
                        const std::vector<int>& cutoffs,
                        const std::map<std::string, std::string>* groups, GainMode mode) {
  if (cutoffs.empty()) throw UsageError("at least one cut-off required");
  for (int k : cutoffs) {
    if (k < 1) throw UsageError("cut-off k must be at least 1");
  }
  EvalReport report;
  report.run_name = run.name;
  report.cutoffs = cutoffs;

  for (const auto& [qid, list] : run.queries) {
    if (!judgments.queries.count(qid)) {
      report.warnings.push_back("run query '" + qid + "' has no judgments; skipped");
    }
  }

  static const ScoredList kEmpty;
  for (const auto& [qid, gains] : judgments.queries) {
    if (judgments.n_main_types(qid) == 0) continue;
    auto it = run.queries.find(qid);
    const auto& ranking = it == run.queries.end() ? kEmpty : it->second;
    std::vector<double> values;
    for (int k : cutoffs) values.push_back(ndcg_at_k(ranking, gains, k, mode));
    report.per_query.emplace(qid, std::move(values));
  }

  auto add_row = [&](std::string grouping, std::string group,
                     const std::vector<const std::vector<double>*>& members) {
    EvalRow row{std::move(grouping), std::move(group), members.size(),
                std::vector<double>(cutoffs.size(), 0.0)};
    for (const auto* values : members) {
      for (std::size_t c = 0; c < cutoffs.size(); ++c) row.means[c] += (*values)[c];
    }
    if (!members.empty()) {
      for (auto& m : row.means) m /= static_cast<double>(members.size());
    }
    report.rows.push_back(std::move(row));
  };

  std::vector<const std::vector<double>*> all;
  std::map<std::string, std::vector<const std::vector<double>*>> by_category;
  std::map<std::size_t, std::vector<const std::vector<double>*>> by_count;
  for (const auto& [qid, values] : report.per_query) {
    all.push_back(&values);
    by_count[judgments.n_main_types(qid)].push_back(&values);
    if (groups) {
      auto g = groups->find(qid);
      by_category[g == groups->end() ? std::string("-") : g->second].push_back(&values);
    }
  }
  add_row("all", "all", all);
  for (const auto& [category, members] : by_category) add_row("category", category, members);
  for (const auto& [count, members] : by_count) add_row("n_types", std::to_string(count), members);
  return report;
}

std::string format_report(const EvalReport& report) {
  std::ostringstream out;
  out << "run\tgrouping\tgroup\tqueries";
  for (int k : report.cutoffs) out << "\tndcg@" << k;
  out << "\n";
  for (const auto& row : report.rows) {
    out << report.run_name << "\t" << row.grouping << "\t" << row.group << "\t" << row.n_queries;
    for (double m : row.means) out << "\t" << std::fixed << std::setprecision(4) << m;
    out << "\n";
  }
  return out.str();
}

std::map<std::string, std::string> load_groups(const std::filesystem::path& path) {
  std::map<std::string, std::string> groups;
  for (const auto& rec : read_tsv(path)) {
    require_fields(rec, 2, path.string());
    groups[rec.fields[0]] = rec.fields[1];
  }
  return groups;
}

TTestResult paired_ttest(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw UsageError("paired t-test needs equal-length samples");
  if (a.size() < 2) throw UsageError("paired t-test needs at least two pairs");
  TTestResult r;
  r.n = a.size();
  const double n = static_cast<double>(r.n);
  double mean = 0.0;
  for (std::size_t i = 0; i < r.n; ++i) mean += a[i] - b[i];
  mean /= n;
  double ss = 0.0;
  for (std::size_t i = 0; i < r.n; ++i) {
    double d = a[i] - b[i] - mean;
    ss += d * d;
  }
  r.mean_diff = mean;
  double sd = std::sqrt(ss / (n - 1.0));
  // Differences that are constant up to rounding count as zero variance.
  if (sd <= 1e-12 * std::max(1.0, std::fabs(mean))) {
    r.degenerate = true;
    r.p = mean == 0.0 ? 1.0 : 0.0;
    r.t = mean == 0.0 ? 0.0 : std::copysign(INFINITY, mean);
    r.warning = "zero variance of paired differences";
    return r;
  }
  r.t = mean / (sd / std::sqrt(n));
  boost::math::students_t dist(n - 1.0);
  r.p = std::clamp(2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(r.t))), 0.0, 1.0);
  return r;
}

}  // namespace typerank
