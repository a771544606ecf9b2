#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>

#include "fixture.h"
#include "typerank/dataset.h"

namespace typerank {
namespace {

struct Result {
  int code = -1;
  std::string out;
};

Result run(const std::string& args) {
  std::string cmd = std::string(TYPERANK_CLI) + " " + args + " 2>/dev/null";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

class Cli : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = testing::scratch_dir("cli");
    testing::write_fixture(dir_);
    write_text_file(dir_ / "queries.tsv",
                    "q1\tcapital city of germany\nq2\tfamous football player\n"
                    "q3\tlarge country in europe\n");
    write_text_file(dir_ / "qrels.tsv",
                    "q1\tCity\t6\nq1\t<NIL>\t1\nq2\tAthlete\t5\nq2\tPerson\t2\n"
                    "q3\tCountry\t7\n");
    write_text_file(dir_ / "entity_qrels.tsv", "q1\te1\t1\nq2\te5\t1\nq3\te3\t1\nq3\te4\t1\n");
  }
  static std::string p(const char* name) { return (dir_ / name).string(); }
  static std::string kb() {
    return "--types " + p("types.tsv") + " --entities " + p("entities.tsv") +
           " --entity-types " + p("entity_types.tsv");
  }
  static inline std::filesystem::path dir_;
};

TEST_F(Cli, HelpAndUsageErrors) {
  EXPECT_EQ(run("--help").code, 0);
  EXPECT_EQ(run("").code, 1);
  EXPECT_EQ(run("no-such-command").code, 1);
  EXPECT_EQ(run("rank-types " + kb() + " --queries " + p("queries.tsv") + " --method magic").code,
            1);
  EXPECT_EQ(run("rank-types " + kb() + " --queries " + p("queries.tsv") + " --method oracle").code,
            1);
}

TEST_F(Cli, DataErrorsExitTwo) {
  write_text_file(dir_ / "cycle.tsv", "A\ta\tB\nB\tb\tA\n");
  EXPECT_EQ(run("rank-types --types " + p("cycle.tsv") + " --entities " + p("entities.tsv") +
                " --entity-types " + p("entity_types.tsv") + " --queries " + p("queries.tsv"))
                .code,
            2);
  write_text_file(dir_ / "junk.bin", "junk");
  EXPECT_EQ(run("rank-entities --index " + p("junk.bin") + " --query city").code, 2);
}

TEST_F(Cli, IndexThenRankEntities) {
  ASSERT_EQ(run("build-index --entities " + p("entities.tsv") + " --out " + p("index.bin")).code, 0);
  auto r = run("rank-entities --index " + p("index.bin") + " --query 'capital city' --k 2");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.substr(0, r.out.find('\t', 2)), "1\te1");
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 2);
}

TEST_F(Cli, EndToEndStages) {
  auto q = " --queries " + p("queries.tsv");
  ASSERT_EQ(run("rank-types " + kb() + q + " --method ec --out " + p("ec.tsv")).code, 0);
  ASSERT_EQ(run("rank-types " + kb() + q + " --method tc --model lm --out " + p("tc.tsv")).code, 0);
  ASSERT_EQ(run("rank-types " + kb() + q + " --method oracle --entity-qrels " +
                p("entity_qrels.tsv") + " --out " + p("oracle.tsv"))
                .code,
            0);
  auto oracle = read_text_file(dir_ / "oracle.tsv");
  EXPECT_NE(oracle.find("q1\tCity\t1\t"), std::string::npos);

  ASSERT_EQ(run("pool --runs " + p("ec.tsv") + " " + p("tc.tsv") + " --oracle " + p("oracle.tsv") +
                " --depth 2 --out " + p("pool.tsv"))
                .code,
            0);
  ASSERT_EQ(run("extract-features " + kb() + q + " --qrels " + p("qrels.tsv") + " --embeddings " +
                p("embeddings.txt") + " --out " + p("features.tsv"))
                .code,
            0);
  auto features = read_text_file(dir_ / "features.tsv");
  EXPECT_EQ(features.rfind("# typerank 1.0.0", 0), 0u);
  EXPECT_NE(features.find("qid\ttype_id\ttarget\tf01"), std::string::npos);

  ASSERT_EQ(run("--seed 7 train-ltr --features " + p("features.tsv") + " --trees 20 --out " +
                p("model.jsonl"))
                .code,
            0);
  auto predicted = run("predict-ltr --model " + p("model.jsonl") + " --features " + p("features.tsv"));
  ASSERT_EQ(predicted.code, 0);
  EXPECT_NE(predicted.out.find("\tltr\n"), std::string::npos);

  ASSERT_EQ(run("cv --features " + p("features.tsv") + " --folds 3 --trees 20 --out " +
                p("cv.tsv") + " --folds-out " + p("folds.tsv"))
                .code,
            0);
  auto report = run("eval --run " + p("cv.tsv") + " --qrels " + p("qrels.tsv") +
                    " --k 1,5 --compare " + p("ec.tsv"));
  ASSERT_EQ(report.code, 0);
  EXPECT_NE(report.out.find("run\tgrouping\tgroup\tqueries\tndcg@1\tndcg@5"), std::string::npos);
  EXPECT_NE(report.out.find("ttest\tndcg@5\t3\t"), std::string::npos);
  EXPECT_EQ(run("eval --run " + p("cv.tsv") + " --qrels " + p("qrels.tsv") + " --k x").code, 1);

  auto ablation = run("ablation --features " + p("features.tsv") + " --folds 3 --trees 10");
  ASSERT_EQ(ablation.code, 0);
  EXPECT_EQ(std::count(ablation.out.begin(), ablation.out.end(), '\n'), 27);
}

TEST_F(Cli, AnnotationCommands) {
  write_text_file(dir_ / "ann.tsv",
                  "q1\tw1\tCity\nq1\tw2\tPlace\nq1\tw3\tCity\n"
                  "q2\tw1\tAthlete\nq2\tw2\tWriter\nq2\tw3\t<NIL>\n");
  auto merged = run("merge-annotations --annotations " + p("ann.tsv") + " --taxonomy " +
                    p("types.tsv"));
  ASSERT_EQ(merged.code, 0);
  EXPECT_NE(merged.out.find("q1\tPlace\t3\n"), std::string::npos);
  EXPECT_NE(merged.out.find("q2\tAthlete\t1\n"), std::string::npos);
  auto kappa = run("kappa --annotations " + p("ann.tsv"));
  ASSERT_EQ(kappa.code, 0);
  EXPECT_FALSE(kappa.out.empty());

  write_text_file(dir_ / "unanimous.tsv", "q1\tw1\tCity\nq1\tw2\tCity\n");
  EXPECT_EQ(run("kappa --annotations " + p("unanimous.tsv")).code, 2);
}

TEST_F(Cli, PipelineAndSyntheticData) {
  auto data = dir_ / "syn";
  ASSERT_EQ(run("make-synthetic --queries 12 --out-dir " + data.string()).code, 0);
  auto d = [&](const char* f) { return (data / f).string(); };
  std::string args = "pipeline --types " + d("types.tsv") + " --entities " + d("entities.tsv") +
                     " --entity-types " + d("entity_types.tsv") + " --queries " +
                     d("queries.tsv") + " --qrels " + d("type_qrels.tsv") + " --embeddings " +
                     d("embeddings.txt") + " --trees 20 --folds 3 --out-dir ";
  auto a = run(args + (dir_ / "pa").string());
  auto b = run(args + (dir_ / "pb").string());
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out.find("TC-LM\t"), std::string::npos);
  EXPECT_EQ(run("pipeline --types missing.tsv --entities x --entity-types y --queries z "
                "--qrels w --out-dir " + (dir_ / "pc").string())
                .code,
            1);
}

}  // namespace
}  // namespace typerank
