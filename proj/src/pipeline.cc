#include "typerank/pipeline.h"

#include <atomic>
#include <cctype>
#include <iomanip>
#include <mutex>
#include <functional>
#include <sstream>
#include <thread>

#include "typerank/error.h"
#include "typerank/forest.h"
#include "typerank/ltr.h"
#include "typerank/provenance.h"
#include "typerank/retrieval.h"
#include "typerank/text.h"
#include "typerank/tsv.h"

namespace typerank {

namespace {

// Runs fn(i) for i in [0, n) on up to `threads` workers.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
  auto workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

template <typename Fn>
auto stage(const std::string& name, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const PipelineError&) {
    throw;
  } catch (const std::exception& e) {
    throw PipelineError(name, e.what());
  }
}

}  // namespace

void PipelineConfig::validate() const {
  auto need = [](const std::filesystem::path& p, const char* what) {
    if (p.empty() || !std::filesystem::exists(p)) {
      throw UsageError(std::string("missing ") + what + " file '" + p.string() + "'");
    }
  };
  need(types, "types");
  need(entities, "entities");
  need(entity_types, "entity types");
  need(queries, "queries");
  need(qrels, "qrels");
  if (embeddings) need(*embeddings, "embeddings");
  if (groups) need(*groups, "groups");
  if (out_dir.empty()) throw UsageError("output directory required");
  if (k < 1) throw UsageError("k must be at least 1");
}

FeatureTable extract_feature_table(const FeatureExtractor& extractor,
                                   const std::vector<QueryRecord>& queries,
                                   const std::vector<std::vector<TypeIdx>>& candidates,
                                   const TypeJudgments* judgments, int threads) {
  if (candidates.size() != queries.size()) throw UsageError("one candidate list per query");
  std::vector<std::vector<FeatureVector>> per_query(queries.size());
  parallel_for(queries.size(), threads, [&](std::size_t i) {
    per_query[i] = extractor.extract_all(queries[i].qid, queries[i].text, candidates[i]);
  });
  std::vector<FeatureVector> vectors;
  std::vector<std::optional<double>> targets;
  for (std::size_t i = 0; i < queries.size(); ++i) {
    const std::map<std::string, int>* gains = nullptr;
    if (judgments) {
      auto it = judgments->queries.find(queries[i].qid);
      if (it != judgments->queries.end()) gains = &it->second;
    }
    for (auto& v : per_query[i]) {
      std::optional<double> target;
      if (judgments) {
        target = 0.0;
        if (gains) {
          auto g = gains->find(v.type_id);
          if (g != gains->end()) target = static_cast<double>(g->second);
        }
      }
      targets.push_back(target);
      vectors.push_back(std::move(v));
    }
  }
  return to_feature_table(vectors, targets);
}

RunFile rank_queries(const TypeRanker& ranker, const std::vector<QueryRecord>& queries,
                     const TypeRankingParams& params, const std::string& run_name, int threads,
                     const std::map<std::string, std::vector<EntityIdx>>& relevant) {
  std::vector<ScoredList> lists(queries.size());
  static const std::vector<EntityIdx> kNone;
  parallel_for(queries.size(), threads, [&](std::size_t i) {
    auto rel = relevant.find(queries[i].qid);
    lists[i] = ranker.rank(tokenize(queries[i].text), params,
                           rel == relevant.end() ? kNone : rel->second);
  });
  RunFile run;
  run.name = run_name;
  for (std::size_t i = 0; i < queries.size(); ++i) {
    run.queries[queries[i].qid] = std::move(lists[i]);
  }
  return run;
}

PipelineReport run_pipeline(const PipelineConfig& config) {
  config.validate();
  stage("config", [&] {
    std::filesystem::create_directories(config.out_dir);
    return 0;
  });
  const auto& out = config.out_dir;

  Provenance prov;
  prov.seed = config.seed;
  stage("provenance", [&] {
    for (const auto& p : {config.types, config.entities, config.entity_types, config.queries,
                          config.qrels}) {
      prov.add_input(p);
    }
    if (config.embeddings) prov.add_input(*config.embeddings);
    return 0;
  });
  const std::vector<std::string> header{prov.line()};

  auto kb = stage("load-kb", [&] {
    return load_knowledge_base(config.types, config.entities, config.entity_types,
                               config.closure);
  });
  auto index = stage("build-index", [&] {
    auto idx = EntityIndex::build(kb.corpus, config.index_names);
    write_index(idx, out / "index.bin", prov.line());
    return idx;
  });
  auto pseudo = stage("pseudo-docs", [&] {
    return PseudoTypeIndex::build(kb.taxonomy, kb.assoc, index);
  });
  TypeRanker ranker(kb, index, pseudo);
  auto queries = stage("load-queries", [&] { return load_queries(config.queries); });

  struct Baseline {
    const char* method;
    const char* file;
    TypeMethod type_method;
    RetrievalModel model;
  };
  const Baseline baselines[] = {
      {"EC-BM25", "run_ec_bm25.tsv", TypeMethod::kEntityCentric, RetrievalModel::kBM25},
      {"EC-LM", "run_ec_lm.tsv", TypeMethod::kEntityCentric, RetrievalModel::kLM},
      {"TC-BM25", "run_tc_bm25.tsv", TypeMethod::kTypeCentric, RetrievalModel::kBM25},
      {"TC-LM", "run_tc_lm.tsv", TypeMethod::kTypeCentric, RetrievalModel::kLM},
  };
  std::vector<std::pair<std::string, RunFile>> runs;
  stage("rank-types", [&] {
    for (const auto& b : baselines) {
      TypeRankingParams params;
      params.method = b.type_method;
      params.retrieval.model = b.model;
      params.k = config.k;
      auto run = rank_queries(ranker, queries, params, b.method, config.threads);
      write_run(run, out / b.file, header);
      runs.emplace_back(b.method, std::move(run));
    }
    return 0;
  });

  auto judgments = stage("load-qrels", [&] { return filter_nil(load_qrels(config.qrels)); });

  auto features = stage("extract-features", [&] {
    EmbeddingTable embeddings =
        config.embeddings ? load_embeddings(*config.embeddings) : EmbeddingTable{};
    RuleNounTagger tagger;
    FeatureExtractor extractor(ranker, embeddings, tagger);
    std::vector<std::vector<TypeIdx>> candidates(queries.size(), kb.taxonomy.types());
    auto table =
        extract_feature_table(extractor, queries, candidates, &judgments.judgments, config.threads);
    write_feature_table(table, out / "features.tsv", header);
    return table;
  });

  LtrConfig ltr;
  ltr.forest.n_trees = config.trees;
  ltr.forest.seed = config.seed;
  ltr.forest.threads = config.threads;
  stage("cv", [&] {
    // Only judged queries take part in training and testing.
    FeatureTable judged{features.names, {}};
    for (const auto& row : features.rows) {
      if (judgments.judgments.queries.count(row.qid)) judged.rows.push_back(row);
    }
    auto cv = cross_validate(judged, config.folds, ltr);
    write_run(cv.run, out / "run_ltr.tsv", header);
    std::string manifest = "# " + prov.line() + "\n";
    for (std::size_t f = 0; f < cv.folds.size(); ++f) {
      for (const auto& qid : cv.folds[f]) manifest += std::to_string(f + 1) + "\t" + qid + "\n";
    }
    write_text_file(out / "folds.tsv", manifest);
    runs.emplace_back("LTR", std::move(cv.run));
    write_model(train_ltr(judged, ltr), out / "model.jsonl", prov.line());
    return 0;
  });

  PipelineReport report;
  stage("eval", [&] {
    std::map<std::string, std::string> groups;
    if (config.groups) groups = load_groups(*config.groups);
    std::ostringstream summary;
    summary << "# " << prov.line() << "\n";
    summary << "method\tndcg@1\tndcg@5\n";
    for (const auto& [method, run] : runs) {
      auto eval = evaluate_run(run, judgments.judgments, {1, 5}, config.groups ? &groups : nullptr);
      std::string lower = method;
      for (auto& c : lower) c = c == '-' ? '_' : static_cast<char>(std::tolower(c));
      write_text_file(out / ("eval_" + lower + ".tsv"),
                      "# " + prov.line() + "\n" + format_report(eval));
      MethodResult r{method, eval.overall().means[0], eval.overall().means[1]};
      summary << method << (method.starts_with("EC") ? " (K=" + std::to_string(config.k) + ")" : "")
              << "\t" << std::fixed << std::setprecision(4) << r.ndcg1 << "\t" << r.ndcg5 << "\n";
      report.methods.push_back(r);
    }
    report.summary = summary.str();
    write_text_file(out / "metrics.tsv", report.summary);
    return 0;
  });
  return report;
}

}  // namespace typerank
