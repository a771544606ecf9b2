#include "typerank/synthetic.h"

#include <algorithm>
#include <array>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "typerank/collection.h"
#include "typerank/dataset.h"
#include "typerank/eval.h"
#include "typerank/kb.h"
#include "typerank/random.h"
#include "typerank/tsv.h"

namespace typerank {

namespace {

struct TypeDef {
  const char* id;
  const char* label;
  const char* parent;
};

constexpr std::array<TypeDef, 24> kTypes = {{
    {"Place", "place", ""},
    {"Person", "person", ""},
    {"Organisation", "organisation", ""},
    {"Work", "work", ""},
    {"City", "city", "Place"},
    {"Country", "country", "Place"},
    {"Airport", "airport", "Place"},
    {"Mountain", "mountain", "Place"},
    {"Athlete", "athlete", "Person"},
    {"Artist", "artist", "Person"},
    {"Politician", "politician", "Person"},
    {"Scientist", "scientist", "Person"},
    {"Company", "company", "Organisation"},
    {"University", "university", "Organisation"},
    {"Band", "band", "Organisation"},
    {"Film", "film", "Work"},
    {"Book", "book", "Work"},
    {"Album", "album", "Work"},
    {"SoccerPlayer", "soccer player", "Athlete"},
    {"Swimmer", "swimmer", "Athlete"},
    {"Painter", "painter", "Artist"},
    {"Singer", "singer", "Artist"},
    {"Airline", "airline", "Company"},
    {"Bank", "bank", "Company"},
}};

constexpr std::size_t kTopicWords = 8;
constexpr std::size_t kCommonWords = 20;
constexpr std::size_t kDim = 8;

double unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::string topic_word(std::size_t type, std::size_t j) {
  return "w" + std::to_string(type) + "q" + std::to_string(j);
}

}  // namespace

SyntheticCollection make_synthetic_collection(const SyntheticOptions& options) {
  std::mt19937_64 rng(splitmix64(options.seed));
  SyntheticCollection out;

  std::vector<TypeRecord> records;
  for (const auto& t : kTypes) {
    records.push_back({t.id, t.label, t.parent, 0});
    out.types_tsv += std::string(t.id) + "\t" + t.label + "\t" + t.parent + "\n";
  }
  auto taxonomy = TypeTaxonomy::build(records);
  auto types = taxonomy.types();
  auto pick = [&rng](std::size_t n) { return uniform_index(rng, n); };

  // Entities: leaves get several, inner types a couple of direct members.
  std::vector<std::vector<std::string>> members(taxonomy.size());
  std::size_t next_entity = 0;
  for (TypeIdx t : types) {
    std::size_t n = taxonomy.children(t).empty() ? options.entities_per_leaf : 2;
    for (std::size_t i = 0; i < n; ++i) {
      std::string id = "E" + std::to_string(next_entity++);
      std::vector<std::string> words;
      for (int w = 0; w < 5; ++w) words.push_back(topic_word(t, pick(kTopicWords)));
      for (int w = 0; w < 2; ++w) words.push_back("c" + std::to_string(pick(kCommonWords)));
      if (auto p = taxonomy.parent(t); p && *p != TypeTaxonomy::kRoot) {
        words.push_back(topic_word(*p, pick(kTopicWords)));
      }
      // Descriptions mention a type label, often the wrong one, plus filler so
      // every query word has nonzero collection frequency.
      TypeIdx mentioned = unit(rng) < 0.3 ? t : types[pick(types.size())];
      words.push_back("the");
      for (const auto& tok : taxonomy.node(mentioned).label_tokens) words.push_back(tok);
      if (unit(rng) < 0.2) {
        words.push_back("which");
        words.push_back("are");
      }
      std::string desc;
      for (const auto& w : words) desc += (desc.empty() ? "" : " ") + w;
      out.entities_tsv += id + "\tentity " + std::to_string(next_entity) + "\t" + desc + "\n";
      out.entity_types_tsv += id + "\t" + taxonomy.id(t) + "\n";
      members[t].push_back(id);
    }
  }

  AnnotationSet annotations;
  for (std::size_t q = 0; q < options.n_queries; ++q) {
    std::string qid = "Q" + std::to_string(q + 1);
    TypeIdx target = types[pick(types.size())];
    std::vector<TypeIdx> targets{target};
    if (unit(rng) < options.p_multi) {
      TypeIdx second;
      do {
        second = types[pick(types.size())];
      } while (taxonomy.on_same_path(second, target));
      targets.push_back(second);
    }
    TypeIdx distractor;
    do {
      distractor = types[pick(types.size())];
    } while (std::any_of(targets.begin(), targets.end(),
                         [&](TypeIdx t) { return taxonomy.on_same_path(t, distractor); }));

    bool question = unit(rng) < options.p_question;
    std::string text = question ? "which are the" : "";
    auto append = [&text](const std::string& w) { text += (text.empty() ? "" : " ") + w; };
    for (TypeIdx t : targets) {
      for (const auto& tok : taxonomy.node(t).label_tokens) append(tok);
    }
    for (int w = 0; w < 2; ++w) append(topic_word(distractor, pick(kTopicWords)));
    if (unit(rng) < 0.3) append(topic_word(target, pick(kTopicWords)));
    out.queries_tsv += qid + "\t" + text + "\n";
    out.categories_tsv += qid + "\t" + (question ? "question" : "keyword") + "\n";

    auto& votes = annotations.queries[qid];
    for (std::size_t w = 0; w < options.workers; ++w) {
      std::string worker = "W" + std::to_string(w + 1);
      double r = unit(rng);
      TypeIdx main = targets[w % targets.size()];
      std::string label;
      if (r < 0.75) {
        label = taxonomy.id(main);
      } else if (r < 0.85 && !taxonomy.children(main).empty()) {
        // Too specific; merged back into `main` later.
        const auto& kids = taxonomy.children(main);
        label = taxonomy.id(kids[pick(kids.size())]);
      } else if (r < 0.93) {
        label = std::string(kNilToken);
      } else {
        TypeIdx other;
        do {
          other = types[pick(types.size())];
        } while (std::any_of(targets.begin(), targets.end(),
                             [&](TypeIdx t) { return taxonomy.on_same_path(t, other); }));
        label = taxonomy.id(other);
      }
      votes.push_back({worker, label});
      out.annotations_tsv += qid + "\t" + worker + "\t" + label + "\n";
    }

    std::set<std::string> relevant;
    for (TypeIdx t : targets) {
      std::vector<TypeIdx> below{t};
      for (std::size_t i = 0; i < below.size(); ++i) {
        for (TypeIdx c : taxonomy.children(below[i])) below.push_back(c);
      }
      for (TypeIdx b : below) relevant.insert(members[b].begin(), members[b].end());
    }
    for (const auto& e : relevant) out.entity_qrels_tsv += qid + "\t" + e + "\t1\n";
  }
  out.type_qrels_tsv = format_qrels(to_judgments(merge_same_path(aggregate_votes(annotations),
                                                                 taxonomy)));

  std::vector<std::string> vocab;
  for (TypeIdx t : types) {
    for (const auto& tok : taxonomy.node(t).label_tokens) vocab.push_back(tok);
    for (std::size_t j = 0; j < kTopicWords; ++j) vocab.push_back(topic_word(t, j));
  }
  for (std::size_t j = 0; j < kCommonWords; ++j) vocab.push_back("c" + std::to_string(j));
  std::sort(vocab.begin(), vocab.end());
  vocab.erase(std::unique(vocab.begin(), vocab.end()), vocab.end());
  out.embeddings_txt = std::to_string(vocab.size()) + " " + std::to_string(kDim) + "\n";
  for (const auto& w : vocab) {
    out.embeddings_txt += w;
    for (std::size_t d = 0; d < kDim; ++d) {
      out.embeddings_txt += " " + format_double(2.0 * unit(rng) - 1.0);
    }
    out.embeddings_txt += "\n";
  }
  return out;
}

void write_synthetic_collection(const SyntheticCollection& c, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_text_file(dir / "types.tsv", c.types_tsv);
  write_text_file(dir / "entities.tsv", c.entities_tsv);
  write_text_file(dir / "entity_types.tsv", c.entity_types_tsv);
  write_text_file(dir / "queries.tsv", c.queries_tsv);
  write_text_file(dir / "categories.tsv", c.categories_tsv);
  write_text_file(dir / "annotations.tsv", c.annotations_tsv);
  write_text_file(dir / "type_qrels.tsv", c.type_qrels_tsv);
  write_text_file(dir / "entity_qrels.tsv", c.entity_qrels_tsv);
  write_text_file(dir / "embeddings.txt", c.embeddings_txt);
}

}  // namespace typerank
