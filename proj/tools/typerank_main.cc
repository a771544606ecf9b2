// Command-line entry point: one subcommand per pipeline stage.

#include <cmath>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "typerank/collection.h"
#include "typerank/dataset.h"
#include "typerank/error.h"
#include "typerank/eval.h"
#include "typerank/features.h"
#include "typerank/forest.h"
#include "typerank/kb.h"
#include "typerank/ltr.h"
#include "typerank/pipeline.h"
#include "typerank/provenance.h"
#include "typerank/retrieval.h"
#include "typerank/synthetic.h"
#include "typerank/text.h"
#include "typerank/tsv.h"
#include "typerank/typescore.h"

namespace {

using namespace typerank;
namespace fs = std::filesystem;

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitRuntime = 3;

struct Globals {
  std::uint64_t seed = 42;
  int threads = 1;
  bool verbose = false;
};

struct KbPaths {
  fs::path types;
  fs::path entities;
  fs::path entity_types;
  bool no_closure = false;
  bool index_names = false;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--types", types, "Type taxonomy TSV")->required()->check(CLI::ExistingFile);
    cmd->add_option("--entities", entities, "Entity TSV")->required()->check(CLI::ExistingFile);
    cmd->add_option("--entity-types", entity_types, "Entity-type assignment TSV")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_flag("--no-closure", no_closure, "Use direct type assignments only");
    cmd->add_flag("--index-names", index_names, "Index entity names with descriptions");
  }
};

// Loaded KB plus derived indexes, kept together so references stay valid.
struct Resources {
  KnowledgeBase kb;
  EntityIndex index;
  PseudoTypeIndex pseudo;
  std::unique_ptr<TypeRanker> ranker;

  explicit Resources(const KbPaths& p) {
    kb = load_knowledge_base(p.types, p.entities, p.entity_types, !p.no_closure);
    index = EntityIndex::build(kb.corpus, p.index_names);
    pseudo = PseudoTypeIndex::build(kb.taxonomy, kb.assoc, index);
    ranker = std::make_unique<TypeRanker>(kb, index, pseudo);
  }
};

Provenance provenance_for(const Globals& g, std::initializer_list<fs::path> inputs) {
  Provenance p;
  p.seed = g.seed;
  for (const auto& in : inputs) {
    if (!in.empty()) p.add_input(in);
  }
  return p;
}

void emit(const std::string& content, const fs::path& out) {
  if (out.empty() || out == "-") {
    std::cout << content;
  } else {
    write_text_file(out, content);
  }
}

std::vector<int> parse_cutoffs(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(static_cast<int>(parse_int(item, "cut-off")));
    } catch (const DataError& e) {
      throw UsageError(e.what());
    }
  }
  if (out.empty()) throw UsageError("no cut-offs given");
  return out;
}

std::map<std::string, std::vector<EntityIdx>> load_relevant(const fs::path& path,
                                                            const EntityCorpus& corpus) {
  std::map<std::string, std::vector<EntityIdx>> rel;
  for (const auto& rec : read_tsv(path)) {
    require_fields(rec, 2, path.string());
    if (rec.fields.size() > 2 && parse_double(rec.fields[2], "relevance") <= 0.0) continue;
    if (auto e = corpus.find(rec.fields[1])) rel[rec.fields[0]].push_back(*e);
  }
  return rel;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Target type ranking toolkit for entity-bearing queries", "typerank"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Root random seed")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_flag("-v,--verbose", g.verbose, "Verbose diagnostics on stderr");

  std::function<void()> action;

  // build-index
  {
    auto* cmd = app.add_subcommand("build-index", "Build the entity inverted index");
    auto entities = std::make_shared<fs::path>();
    auto out = std::make_shared<fs::path>();
    auto names = std::make_shared<bool>(false);
    cmd->add_option("--entities", *entities, "Entity TSV")->required()->check(CLI::ExistingFile);
    cmd->add_option("--out", *out, "Index file")->required();
    cmd->add_flag("--index-names", *names, "Index entity names with descriptions");
    cmd->callback([&, entities, out, names] {
      action = [&, entities, out, names] {
        auto index = EntityIndex::build(load_entities(*entities), *names);
        write_index(index, *out, provenance_for(g, {*entities}).line());
        if (g.verbose) {
          std::cerr << "indexed " << index.n_docs() << " entities, " << index.vocabulary_size()
                    << " terms\n";
        }
      };
    });
  }

  // rank-entities
  {
    auto* cmd = app.add_subcommand("rank-entities", "Retrieve the top-k entities for a query");
    auto index_path = std::make_shared<fs::path>();
    auto query = std::make_shared<std::string>();
    auto k = std::make_shared<long long>(100);
    auto model = std::make_shared<std::string>("bm25");
    cmd->add_option("--index", *index_path, "Index file")->required()->check(CLI::ExistingFile);
    cmd->add_option("--query", *query, "Query text")->required();
    cmd->add_option("--k", *k, "Number of entities")->capture_default_str();
    cmd->add_option("--model", *model, "bm25 or lm")->capture_default_str();
    cmd->callback([&, index_path, query, k, model] {
      action = [=] {
        auto index = read_index(*index_path);
        RetrievalParams params;
        params.model = parse_model(*model);
        auto list = retrieve_top_k(*query, *k, index, params);
        for (std::size_t i = 0; i < list.size(); ++i) {
          std::cout << i + 1 << "\t" << list[i].id << "\t" << format_double(list[i].score) << "\n";
        }
      };
    });
  }

  // rank-types
  {
    auto* cmd = app.add_subcommand("rank-types", "Rank target types with a baseline model");
    auto kb = std::make_shared<KbPaths>();
    kb->add_to(cmd);
    auto method = std::make_shared<std::string>("ec");
    auto model = std::make_shared<std::string>("bm25");
    auto k = std::make_shared<std::size_t>(20);
    auto queries = std::make_shared<fs::path>();
    auto entity_qrels = std::make_shared<fs::path>();
    auto out = std::make_shared<fs::path>();
    auto entity_bg = std::make_shared<bool>(false);
    cmd->add_option("--method", *method, "ec, tc or oracle")->capture_default_str();
    cmd->add_option("--model", *model, "bm25 or lm")->capture_default_str();
    cmd->add_option("--k", *k, "EC rank cut-off")->capture_default_str();
    cmd->add_option("--queries", *queries, "Query TSV")->required()->check(CLI::ExistingFile);
    cmd->add_option("--entity-qrels", *entity_qrels,
                    "Relevant entities (qid, entity_id[, rel]) for the oracle")
        ->check(CLI::ExistingFile);
    cmd->add_flag("--entity-background", *entity_bg, "TC-LM background from the entity corpus");
    cmd->add_option("--out", *out, "Run file (stdout if omitted)");
    cmd->callback([&, kb, method, model, k, queries, entity_qrels, out, entity_bg] {
      action = [=, &g] {
        Resources res(*kb);
        TypeRankingParams params;
        params.method = parse_method(*method);
        params.retrieval.model = parse_model(*model);
        params.k = *k;
        if (*entity_bg) params.background = BackgroundModel::kEntityCorpus;
        std::map<std::string, std::vector<EntityIdx>> relevant;
        if (params.method == TypeMethod::kOracle) {
          if (entity_qrels->empty()) throw UsageError("--entity-qrels is required for the oracle");
          relevant = load_relevant(*entity_qrels, res.kb.corpus);
        }
        std::string name = std::string(method_name(params.method));
        if (params.method != TypeMethod::kOracle) name += "_" + std::string(model_name(params.retrieval.model));
        auto run = rank_queries(*res.ranker, load_queries(*queries), params, name, g.threads,
                                relevant);
        auto prov = provenance_for(g, {kb->types, kb->entities, kb->entity_types, *queries});
        emit(format_run(run, {prov.line()}), *out);
      };
    });
  }

  // extract-features
  {
    auto* cmd = app.add_subcommand("extract-features", "Compute the 25 ranking features");
    auto kb = std::make_shared<KbPaths>();
    kb->add_to(cmd);
    auto queries = std::make_shared<fs::path>();
    auto qrels = std::make_shared<fs::path>();
    auto embeddings = std::make_shared<fs::path>();
    auto out = std::make_shared<fs::path>();
    auto pool_runs = std::make_shared<std::vector<fs::path>>();
    auto depth = std::make_shared<std::size_t>(10);
    auto all_types = std::make_shared<bool>(false);
    auto unclamped = std::make_shared<bool>(false);
    cmd->add_option("--queries", *queries, "Query TSV")->required()->check(CLI::ExistingFile);
    cmd->add_option("--qrels", *qrels, "Type qrels; fills the target column")
        ->check(CLI::ExistingFile);
    cmd->add_option("--embeddings", *embeddings, "word2vec text file")->check(CLI::ExistingFile);
    cmd->add_option("--out", *out, "Feature TSV (stdout if omitted)");
    auto* all_opt = cmd->add_flag("--all-types", *all_types, "Score every taxonomy type (default)");
    cmd->add_option("--pool", *pool_runs, "Restrict candidates to the pooled top types of runs")
        ->excludes(all_opt)
        ->check(CLI::ExistingFile);
    cmd->add_option("--depth", *depth, "Pool depth per run")->capture_default_str();
    cmd->add_flag("--unclamped", *unclamped, "Keep negative cosines");
    cmd->callback([&, kb, queries, qrels, embeddings, out, pool_runs, depth, unclamped] {
      action = [=, &g] {
        Resources res(*kb);
        auto qs = load_queries(*queries);
        EmbeddingTable emb = embeddings->empty() ? EmbeddingTable{} : load_embeddings(*embeddings);
        RuleNounTagger tagger;
        FeatureOptions opts;
        opts.clamp_cosines = !*unclamped;
        FeatureExtractor extractor(*res.ranker, emb, tagger, opts);

        std::vector<std::vector<TypeIdx>> candidates;
        if (pool_runs->empty()) {
          candidates.assign(qs.size(), res.kb.taxonomy.types());
        } else {
          std::vector<RunFile> runs;
          for (const auto& p : *pool_runs) runs.push_back(load_run(p));
          auto pool = build_pool(runs, *depth);
          for (const auto& q : qs) {
            std::vector<TypeIdx> c;
            for (const auto& t : pool[q.qid]) c.push_back(res.kb.taxonomy.at(t));
            candidates.push_back(std::move(c));
          }
        }
        std::optional<TypeJudgments> judgments;
        if (!qrels->empty()) judgments = filter_nil(load_qrels(*qrels)).judgments;
        auto table = extract_feature_table(extractor, qs, candidates,
                                           judgments ? &*judgments : nullptr, g.threads);
        auto prov = provenance_for(
            g, {kb->types, kb->entities, kb->entity_types, *queries, *qrels, *embeddings});
        emit(format_feature_table(table, {prov.line()}), *out);
      };
    });
  }

  // Forest options shared by train-ltr, cv and ablation.
  struct ForestFlags {
    int trees = 1000;
    double max_features = 0.10;
    int min_leaf = 1;
    bool no_bootstrap = false;
    void add_to(CLI::App* cmd) {
      cmd->add_option("--trees", trees, "Number of trees")->capture_default_str();
      cmd->add_option("--max-features", max_features, "Candidate feature fraction per split")
          ->capture_default_str();
      cmd->add_option("--min-leaf", min_leaf, "Minimum samples per leaf")->capture_default_str();
      cmd->add_flag("--no-bootstrap", no_bootstrap, "Grow every tree on the full sample");
    }
    LtrConfig config(const Globals& g) const {
      LtrConfig c;
      c.forest.n_trees = trees;
      c.forest.max_features_fraction = max_features;
      c.forest.min_samples_leaf = min_leaf;
      c.forest.bootstrap = !no_bootstrap;
      c.forest.seed = g.seed;
      c.forest.threads = g.threads;
      return c;
    }
  };

  // train-ltr
  {
    auto* cmd = app.add_subcommand("train-ltr", "Train the random forest ranker");
    auto features = std::make_shared<fs::path>();
    auto out = std::make_shared<fs::path>();
    auto flags = std::make_shared<ForestFlags>();
    cmd->add_option("--features", *features, "Feature TSV")->required()->check(CLI::ExistingFile);
    cmd->add_option("--out", *out, "Model file")->required();
    flags->add_to(cmd);
    cmd->callback([&, features, out, flags] {
      action = [=, &g] {
        auto table = read_feature_table(*features);
        auto model = train_ltr(table, flags->config(g));
        write_model(model, *out, provenance_for(g, {*features}).line());
        if (g.verbose) {
          for (std::size_t f = 0; f < table.width(); ++f) {
            std::cerr << table.names[f] << "\t" << format_double(model.feature_importance()[f])
                      << "\n";
          }
        }
      };
    });
  }

  // predict-ltr
  {
    auto* cmd = app.add_subcommand("predict-ltr", "Rank types with a trained model");
    auto model_path = std::make_shared<fs::path>();
    auto features = std::make_shared<fs::path>();
    auto out = std::make_shared<fs::path>();
    cmd->add_option("--model", *model_path, "Model file")->required()->check(CLI::ExistingFile);
    cmd->add_option("--features", *features, "Feature TSV")->required()->check(CLI::ExistingFile);
    cmd->add_option("--out", *out, "Run file (stdout if omitted)");
    cmd->callback([&, model_path, features, out] {
      action = [=, &g] {
        auto model = read_model(*model_path);
        auto run = predict_run(model, read_feature_table(*features));
        emit(format_run(run, {provenance_for(g, {*model_path, *features}).line()}), *out);
      };
    });
  }

  // cv
  {
    auto* cmd = app.add_subcommand("cv", "Cross-validated LTR run");
    auto features = std::make_shared<fs::path>();
    auto out = std::make_shared<fs::path>();
    auto folds_out = std::make_shared<fs::path>();
    auto folds = std::make_shared<int>(5);
    auto flags = std::make_shared<ForestFlags>();
    cmd->add_option("--features", *features, "Feature TSV")->required()->check(CLI::ExistingFile);
    cmd->add_option("--folds", *folds, "Number of folds")->capture_default_str();
    cmd->add_option("--out", *out, "Run file (stdout if omitted)");
    cmd->add_option("--folds-out", *folds_out, "Write the fold manifest here");
    flags->add_to(cmd);
    cmd->callback([&, features, out, folds_out, folds, flags] {
      action = [=, &g] {
        auto cv = cross_validate(read_feature_table(*features), *folds, flags->config(g));
        auto prov = provenance_for(g, {*features});
        emit(format_run(cv.run, {prov.line()}), *out);
        if (!folds_out->empty()) {
          std::string manifest = "# " + prov.line() + "\n";
          for (std::size_t f = 0; f < cv.folds.size(); ++f) {
            for (const auto& q : cv.folds[f]) manifest += std::to_string(f + 1) + "\t" + q + "\n";
          }
          write_text_file(*folds_out, manifest);
        }
      };
    });
  }

  // ablation
  {
    auto* cmd = app.add_subcommand("ablation", "Incremental feature ablation by importance");
    auto features = std::make_shared<fs::path>();
    auto qrels = std::make_shared<fs::path>();
    auto out = std::make_shared<fs::path>();
    auto folds = std::make_shared<int>(5);
    auto flags = std::make_shared<ForestFlags>();
    cmd->add_option("--features", *features, "Feature TSV")->required()->check(CLI::ExistingFile);
    cmd->add_option("--qrels", *qrels, "Type qrels (default: targets in the feature file)")
        ->check(CLI::ExistingFile);
    cmd->add_option("--folds", *folds, "Number of folds")->capture_default_str();
    cmd->add_option("--out", *out, "Ablation TSV (stdout if omitted)");
    flags->add_to(cmd);
    cmd->callback([&, features, qrels, out, folds, flags] {
      action = [=, &g] {
        auto table = read_feature_table(*features);
        auto judgments = qrels->empty() ? judgments_from_features(table)
                                        : filter_nil(load_qrels(*qrels)).judgments;
        auto ablation = feature_ablation(table, judgments, *folds, flags->config(g));
        emit("# " + provenance_for(g, {*features, *qrels}).line() + "\n" +
                 format_ablation(ablation),
             *out);
      };
    });
  }

  // eval
  {
    auto* cmd = app.add_subcommand("eval", "NDCG evaluation of a run");
    auto run_path = std::make_shared<fs::path>();
    auto qrels = std::make_shared<fs::path>();
    auto cutoffs = std::make_shared<std::string>("1,5");
    auto groups = std::make_shared<fs::path>();
    auto compare = std::make_shared<fs::path>();
    auto gain = std::make_shared<std::string>("linear");
    cmd->add_option("--run", *run_path, "Run file")->required()->check(CLI::ExistingFile);
    cmd->add_option("--qrels", *qrels, "Type qrels")->required()->check(CLI::ExistingFile);
    cmd->add_option("--k", *cutoffs, "Comma separated cut-offs")->capture_default_str();
    cmd->add_option("--groups", *groups, "qid -> category TSV")->check(CLI::ExistingFile);
    cmd->add_option("--compare", *compare, "Second run for a paired t-test")
        ->check(CLI::ExistingFile);
    cmd->add_option("--gain", *gain, "linear or exp")->capture_default_str();
    cmd->callback([&, run_path, qrels, cutoffs, groups, compare, gain] {
      action = [=, &g] {
        auto ks = parse_cutoffs(*cutoffs);
        GainMode mode;
        if (*gain == "linear") {
          mode = GainMode::kLinear;
        } else if (*gain == "exp") {
          mode = GainMode::kExponential;
        } else {
          throw UsageError("--gain must be linear or exp");
        }
        auto filtered = filter_nil(load_qrels(*qrels));
        if (g.verbose) {
          for (const auto& q : filtered.removed) std::cerr << "removed NIL-only query " << q << "\n";
        }
        std::map<std::string, std::string> group_map;
        if (!groups->empty()) group_map = load_groups(*groups);
        auto run = load_run(*run_path);
        auto report = evaluate_run(run, filtered.judgments, ks,
                                   groups->empty() ? nullptr : &group_map, mode);
        for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
        std::cout << format_report(report);
        if (!compare->empty()) {
          auto other = evaluate_run(load_run(*compare), filtered.judgments, ks, nullptr, mode);
          std::cout << "ttest\tcutoff\tn\tmean_diff\tt\tp\n";
          for (std::size_t c = 0; c < ks.size(); ++c) {
            std::vector<double> a, b;
            for (const auto& [qid, values] : report.per_query) {
              a.push_back(values[c]);
              b.push_back(other.per_query.at(qid)[c]);
            }
            auto t = paired_ttest(a, b);
            if (!t.warning.empty()) std::cerr << "warning: " << t.warning << "\n";
            std::cout << "ttest\tndcg@" << ks[c] << "\t" << t.n << "\t" << format_double(t.mean_diff)
                      << "\t" << format_double(t.t) << "\t" << format_double(t.p) << "\n";
          }
        }
      };
    });
  }

  // pool
  {
    auto* cmd = app.add_subcommand("pool", "Pool candidate types from several runs");
    auto runs = std::make_shared<std::vector<fs::path>>();
    auto oracle = std::make_shared<fs::path>();
    auto depth = std::make_shared<std::size_t>(10);
    auto out = std::make_shared<fs::path>();
    cmd->add_option("--runs", *runs, "Run files")->required()->check(CLI::ExistingFile);
    cmd->add_option("--oracle", *oracle, "Oracle run; all of its types join the pool")
        ->check(CLI::ExistingFile);
    cmd->add_option("--depth", *depth, "Types taken from each run")->capture_default_str();
    cmd->add_option("--out", *out, "Pool TSV (stdout if omitted)");
    cmd->callback([&, runs, oracle, depth, out] {
      action = [=, &g] {
        std::vector<RunFile> loaded;
        for (const auto& p : *runs) loaded.push_back(load_run(p));
        CandidatePool oracle_types;
        if (!oracle->empty()) {
          for (const auto& [qid, list] : load_run(*oracle).queries) {
            for (const auto& item : list) oracle_types[qid].insert(item.id);
          }
        }
        auto pool = build_pool(loaded, *depth, oracle_types);
        Provenance prov;
        prov.seed = g.seed;
        for (const auto& p : *runs) prov.add_input(p);
        if (!oracle->empty()) prov.add_input(*oracle);
        emit(format_pool(pool, {prov.line()}), *out);
      };
    });
  }

  // merge-annotations
  {
    auto* cmd = app.add_subcommand("merge-annotations",
                                   "Turn worker annotations into graded type qrels");
    auto annotations = std::make_shared<fs::path>();
    auto taxonomy = std::make_shared<fs::path>();
    auto out = std::make_shared<fs::path>();
    cmd->add_option("--annotations", *annotations, "Annotation TSV")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--taxonomy", *taxonomy, "Type taxonomy TSV")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--out", *out, "Type qrels (stdout if omitted)");
    cmd->callback([&, annotations, taxonomy, out] {
      action = [=, &g] {
        auto tax = load_taxonomy(*taxonomy);
        auto merged = to_judgments(merge_same_path(aggregate_votes(load_annotations(*annotations)), tax));
        emit(format_qrels(merged, {provenance_for(g, {*annotations, *taxonomy}).line()}), *out);
        std::cerr << "main_types\tqueries\tnil_share\n";
        for (const auto& b : annotation_distribution(merged)) {
          std::cerr << b.n_types << "\t" << b.queries << "\t" << std::fixed << std::setprecision(4)
                    << b.nil_share() << "\n";
        }
      };
    });
  }

  // kappa
  {
    auto* cmd = app.add_subcommand("kappa", "Fleiss' kappa of an annotation file");
    auto annotations = std::make_shared<fs::path>();
    cmd->add_option("--annotations", *annotations, "Annotation TSV")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->callback([&, annotations] {
      action = [=] {
        double kappa = fleiss_kappa(load_annotations(*annotations));
        if (std::isnan(kappa)) {
          throw DataError("kappa undefined: a single category was used for every rating");
        }
        std::cout << std::fixed << std::setprecision(6) << kappa << "\n";
      };
    });
  }

  // pipeline
  {
    auto* cmd = app.add_subcommand("pipeline", "Run every stage end to end");
    auto cfg = std::make_shared<PipelineConfig>();
    auto embeddings = std::make_shared<fs::path>();
    auto groups = std::make_shared<fs::path>();
    auto no_closure = std::make_shared<bool>(false);
    cmd->add_option("--types", cfg->types, "Type taxonomy TSV")->required();
    cmd->add_option("--entities", cfg->entities, "Entity TSV")->required();
    cmd->add_option("--entity-types", cfg->entity_types, "Entity-type TSV")->required();
    cmd->add_option("--queries", cfg->queries, "Query TSV")->required();
    cmd->add_option("--qrels", cfg->qrels, "Type qrels")->required();
    cmd->add_option("--embeddings", *embeddings, "word2vec text file");
    cmd->add_option("--groups", *groups, "qid -> category TSV");
    cmd->add_option("--out-dir", cfg->out_dir, "Output directory")->required();
    cmd->add_option("--k", cfg->k, "EC cut-off for the baseline runs")->capture_default_str();
    cmd->add_option("--folds", cfg->folds, "Cross-validation folds")->capture_default_str();
    cmd->add_option("--trees", cfg->trees, "Forest size")->capture_default_str();
    cmd->add_flag("--no-closure", *no_closure, "Use direct type assignments only");
    cmd->add_flag("--index-names", cfg->index_names, "Index entity names with descriptions");
    cmd->callback([&, cfg, embeddings, groups, no_closure] {
      action = [=, &g] {
        auto config = *cfg;
        if (!embeddings->empty()) config.embeddings = *embeddings;
        if (!groups->empty()) config.groups = *groups;
        config.closure = !*no_closure;
        config.seed = g.seed;
        config.threads = g.threads;
        std::cout << run_pipeline(config).summary;
      };
    });
  }

  // make-synthetic
  {
    auto* cmd = app.add_subcommand("make-synthetic", "Write a small synthetic collection");
    auto dir = std::make_shared<fs::path>();
    auto n = std::make_shared<std::size_t>(40);
    cmd->add_option("--out-dir", *dir, "Output directory")->required();
    cmd->add_option("--queries", *n, "Number of queries")->capture_default_str();
    cmd->callback([&, dir, n] {
      action = [=, &g] {
        SyntheticOptions opts;
        opts.seed = g.seed;
        opts.n_queries = *n;
        write_synthetic_collection(make_synthetic_collection(opts), *dir);
      };
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (action) action();
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
