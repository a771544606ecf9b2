#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include "typerank/embeddings.h"
#include "typerank/features.h"
#include "typerank/kb.h"
#include "typerank/retrieval.h"
#include "typerank/typescore.h"

namespace typerank::testing {

// Two-level taxonomy with eight types (Company stays empty) and nine
// entities, one of them without a description.
inline constexpr const char* kFixtureTypes =
    "# id\tlabel\tparent\n"
    "Place\tplace\t\n"
    "City\tcity\tPlace\n"
    "Country\tcountry\tPlace\n"
    "Person\tperson\t\n"
    "Athlete\tathlete\tPerson\n"
    "Writer\twriter\tPerson\n"
    "Organisation\torganisation\t\n"
    "Company\tcompany\tOrganisation\n";

inline constexpr const char* kFixtureEntities =
    "e1\tBerlin\tberlin is the capital city of germany\n"
    "e2\tParis\tparis is the capital city of france and a large city\n"
    "e3\tGermany\tgermany is a country in europe\n"
    "e4\tFrance\tfrance is a large country in western europe\n"
    "e5\tLionel Messi\tlionel messi is an argentine football player\n"
    "e6\tUsain Bolt\tusain bolt is a fast olympic athlete\n"
    "e7\tGeorge Orwell\tgeorge orwell was an english writer and journalist\n"
    "e8\tMarie Curie\tmarie curie was a famous physicist\n"
    "e9\tGhost Town\t\n";

inline constexpr const char* kFixtureEntityTypes =
    "e1\tCity\n"
    "e2\tCity\n"
    "e3\tCountry\n"
    "e4\tCountry\n"
    "e5\tAthlete\n"
    "e6\tAthlete\n"
    "e7\tWriter\n"
    "e8\tPerson\n"
    "e9\tCity\n";

// Hand-built 3-d vectors: places along x, people along y, organisations along z.
inline constexpr const char* kFixtureEmbeddings =
    "12 3\n"
    "city 1 0.2 0\n"
    "country 0.8 0.6 0\n"
    "place 1 0 0\n"
    "capital 0.9 0.1 0.1\n"
    "europe 0.7 0 0.3\n"
    "person 0 1 0\n"
    "athlete 0.1 0.9 0\n"
    "writer 0 0.8 0.4\n"
    "football 0 0.7 -0.5\n"
    "organisation 0 0 1\n"
    "company -0.2 0.1 1\n"
    "famous 0.3 0.3 0.3\n";

inline constexpr const char* kFixtureQueries[] = {
    "capital city of germany",
    "large country in europe",
    "famous football player",
    "which writer was english",
    "olympic athlete",
    "city city paris",
    "unknownword",
    "the",
};

struct Fixture {
  KnowledgeBase kb;
  EntityIndex index;
  PseudoTypeIndex pseudo;
  EmbeddingTable embeddings;
  RuleNounTagger tagger;
  std::unique_ptr<TypeRanker> ranker;
  std::unique_ptr<FeatureExtractor> extractor;

  Fixture() = default;
  Fixture(const Fixture&) = delete;
  Fixture& operator=(const Fixture&) = delete;
};

std::unique_ptr<Fixture> make_fixture(bool closure = true);

// Writes the fixture files into `dir` (types.tsv, entities.tsv, entity_types.tsv,
// embeddings.txt).
void write_fixture(const std::filesystem::path& dir);

// Fresh empty directory under the system temp dir.
std::filesystem::path scratch_dir(const std::string& name);

}  // namespace typerank::testing
