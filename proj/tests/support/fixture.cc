#include "fixture.h"

#include <fstream>

#include "typerank/dataset.h"

namespace typerank::testing {

std::unique_ptr<Fixture> make_fixture(bool closure) {
  auto f = std::make_unique<Fixture>();
  f->kb.taxonomy = parse_taxonomy(kFixtureTypes);
  f->kb.corpus = parse_entities(kFixtureEntities);
  f->kb.assoc = TypeAssociations::build(f->kb.taxonomy, f->kb.corpus,
                                        parse_entity_types(kFixtureEntityTypes), closure);
  f->index = EntityIndex::build(f->kb.corpus);
  f->pseudo = PseudoTypeIndex::build(f->kb.taxonomy, f->kb.assoc, f->index);
  f->embeddings = parse_embeddings(kFixtureEmbeddings);
  f->ranker = std::make_unique<TypeRanker>(f->kb, f->index, f->pseudo);
  f->extractor = std::make_unique<FeatureExtractor>(*f->ranker, f->embeddings, f->tagger);
  return f;
}

void write_fixture(const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_text_file(dir / "types.tsv", kFixtureTypes);
  write_text_file(dir / "entities.tsv", kFixtureEntities);
  write_text_file(dir / "entity_types.tsv", kFixtureEntityTypes);
  write_text_file(dir / "embeddings.txt", kFixtureEmbeddings);
}

std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("typerank_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace typerank::testing
