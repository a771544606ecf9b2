#include <gtest/gtest.h>

#include "fixture.h"
#include "typerank/dataset.h"
#include "typerank/error.h"
#include "typerank/pipeline.h"
#include "typerank/synthetic.h"

namespace typerank {
namespace {

PipelineConfig config_for(const std::filesystem::path& data, const std::filesystem::path& out) {
  PipelineConfig c;
  c.types = data / "types.tsv";
  c.entities = data / "entities.tsv";
  c.entity_types = data / "entity_types.tsv";
  c.queries = data / "queries.tsv";
  c.qrels = data / "type_qrels.tsv";
  c.embeddings = data / "embeddings.txt";
  c.groups = data / "categories.tsv";
  c.out_dir = out;
  c.trees = 50;
  return c;
}

TEST(Pipeline, EmitsFiveMethodRowsDeterministically) {
  auto dir = testing::scratch_dir("pipeline");
  write_synthetic_collection(make_synthetic_collection({.n_queries = 20}), dir / "data");
  auto first = run_pipeline(config_for(dir / "data", dir / "a"));
  auto second = run_pipeline(config_for(dir / "data", dir / "b"));
  ASSERT_EQ(first.methods.size(), 5u);
  EXPECT_EQ(first.methods[0].method, "EC-BM25");
  EXPECT_EQ(first.methods[4].method, "LTR");
  EXPECT_EQ(read_text_file(dir / "a" / "metrics.tsv"), read_text_file(dir / "b" / "metrics.tsv"));
  EXPECT_EQ(read_text_file(dir / "a" / "model.jsonl"), read_text_file(dir / "b" / "model.jsonl"));
  for (const auto& m : first.methods) {
    EXPECT_GE(m.ndcg1, 0.0);
    EXPECT_LE(m.ndcg5, 1.0);
  }
}

TEST(Pipeline, EveryTextArtifactStartsWithProvenance) {
  auto dir = testing::scratch_dir("pipeline_prov");
  write_synthetic_collection(make_synthetic_collection({.n_queries = 10}), dir / "data");
  auto cfg = config_for(dir / "data", dir / "out");
  cfg.trees = 10;
  run_pipeline(cfg);
  std::size_t files = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir / "out")) {
    auto name = entry.path().filename().string();
    auto text = read_text_file(entry.path());
    ++files;
    if (name == "index.bin") {
      EXPECT_NE(text.find("typerank 1.0.0 seed=42 inputs="), std::string::npos);
    } else if (name == "model.jsonl") {
      EXPECT_NE(text.substr(0, text.find('\n')).find("typerank 1.0.0 seed=42"), std::string::npos);
    } else {
      EXPECT_EQ(text.rfind("# typerank 1.0.0 seed=42 inputs=", 0), 0u) << name;
    }
  }
  EXPECT_GE(files, 13u);
}

TEST(Pipeline, FailuresNameTheStage) {
  auto dir = testing::scratch_dir("pipeline_fail");
  write_synthetic_collection(make_synthetic_collection({.n_queries = 10}), dir / "data");
  write_text_file(dir / "data" / "type_qrels.tsv", "Q1\tAlbum\tmany\n");
  auto cfg = config_for(dir / "data", dir / "out");
  try {
    run_pipeline(cfg);
    FAIL() << "expected a failure";
  } catch (const PipelineError& e) {
    EXPECT_FALSE(e.stage().empty());
    EXPECT_NE(std::string(e.what()).find("many"), std::string::npos) << e.what();
  }
  cfg.queries = dir / "missing.tsv";
  EXPECT_THROW(run_pipeline(cfg), UsageError);
}

TEST(Synthetic, SameSeedSameCollection) {
  auto a = make_synthetic_collection({.seed = 5});
  auto b = make_synthetic_collection({.seed = 5});
  auto c = make_synthetic_collection({.seed = 6});
  EXPECT_EQ(a.queries_tsv, b.queries_tsv);
  EXPECT_EQ(a.type_qrels_tsv, b.type_qrels_tsv);
  EXPECT_NE(a.queries_tsv, c.queries_tsv);
}

}  // namespace
}  // namespace typerank
