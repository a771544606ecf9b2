#include "typerank/kb.h"

#include <algorithm>

#include "typerank/error.h"
#include "typerank/text.h"
#include "typerank/tsv.h"

namespace typerank {

namespace {

std::string where(std::string_view source, std::size_t line) {
  return std::string(source) + ":" + std::to_string(line) + ": ";
}

}  // namespace

TypeTaxonomy::TypeTaxonomy() {
  TypeNode root;
  root.id = "";
  root.label = "";
  nodes_.push_back(std::move(root));
}

TypeTaxonomy TypeTaxonomy::build(const std::vector<TypeRecord>& records, std::string_view source) {
  TypeTaxonomy tax;
  std::vector<std::size_t> lines{0};
  for (const auto& rec : records) {
    if (rec.id.empty()) throw DataError(where(source, rec.line) + "empty type id");
    auto idx = static_cast<TypeIdx>(tax.nodes_.size());
    if (!tax.by_id_.emplace(rec.id, idx).second) {
      throw DataError(where(source, rec.line) + "duplicate type id '" + rec.id + "'");
    }
    TypeNode node;
    node.id = rec.id;
    node.label = rec.label.empty() ? split_camel_case(rec.id) : rec.label;
    node.label_tokens = tokenize(node.label);
    if (node.label_tokens.empty()) {
      throw DataError(where(source, rec.line) + "label of '" + rec.id + "' has no tokens");
    }
    tax.nodes_.push_back(std::move(node));
    lines.push_back(rec.line);
  }

  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& rec = records[i];
    auto idx = static_cast<TypeIdx>(i + 1);
    TypeIdx parent = kRoot;
    if (!rec.parent.empty()) {
      auto it = tax.by_id_.find(rec.parent);
      if (it == tax.by_id_.end()) {
        throw DataError(where(source, rec.line) + "parent '" + rec.parent + "' of '" + rec.id +
                        "' is not declared");
      }
      parent = it->second;
      if (parent == idx) {
        throw DataError(where(source, rec.line) + "cycle: '" + rec.id + "' is its own parent");
      }
    }
    tax.nodes_[idx].parent = parent;
    tax.nodes_[parent].children.push_back(idx);
  }

  // Every node has a parent that exists, so anything the root cannot reach
  // sits on a cycle.
  std::vector<bool> reached(tax.nodes_.size(), false);
  std::vector<TypeIdx> stack{kRoot};
  reached[kRoot] = true;
  while (!stack.empty()) {
    TypeIdx t = stack.back();
    stack.pop_back();
    for (TypeIdx c : tax.nodes_[t].children) {
      reached[c] = true;
      tax.nodes_[c].depth = tax.nodes_[t].depth + 1;
      tax.max_depth_ = std::max(tax.max_depth_, tax.nodes_[c].depth);
      stack.push_back(c);
    }
  }
  for (std::size_t i = 1; i < reached.size(); ++i) {
    if (!reached[i]) {
      throw DataError(where(source, lines[i]) + "cycle through type '" + tax.nodes_[i].id + "'");
    }
  }
  return tax;
}

std::vector<TypeIdx> TypeTaxonomy::types() const {
  std::vector<TypeIdx> out;
  out.reserve(nodes_.size() - 1);
  for (std::size_t i = 1; i < nodes_.size(); ++i) out.push_back(static_cast<TypeIdx>(i));
  return out;
}

std::optional<TypeIdx> TypeTaxonomy::find(std::string_view id) const {
  auto it = by_id_.find(std::string(id));
  if (it == by_id_.end()) return std::nullopt;
  return it->second;
}

TypeIdx TypeTaxonomy::at(std::string_view id) const {
  auto t = find(id);
  if (!t) throw DataError("unknown type '" + std::string(id) + "'");
  return *t;
}

std::size_t TypeTaxonomy::n_siblings(TypeIdx t) const {
  const auto& p = nodes_.at(t).parent;
  if (!p) return 0;
  return nodes_[*p].children.size() - 1;
}

bool TypeTaxonomy::is_ancestor(TypeIdx ancestor, TypeIdx t) const {
  if (nodes_.at(ancestor).depth >= nodes_.at(t).depth) return false;
  auto cur = nodes_[t].parent;
  while (cur) {
    if (*cur == ancestor) return true;
    if (nodes_[*cur].depth <= nodes_[ancestor].depth) return false;
    cur = nodes_[*cur].parent;
  }
  return false;
}

bool TypeTaxonomy::on_same_path(TypeIdx a, TypeIdx b) const {
  return a == b || is_ancestor(a, b) || is_ancestor(b, a);
}

std::vector<TypeIdx> TypeTaxonomy::ancestors(TypeIdx t) const {
  std::vector<TypeIdx> out;
  auto cur = nodes_.at(t).parent;
  while (cur && *cur != kRoot) {
    out.push_back(*cur);
    cur = nodes_[*cur].parent;
  }
  return out;
}

TypeIdx TypeTaxonomy::top_level(TypeIdx t) const {
  while (nodes_.at(t).depth > 1) t = *nodes_[t].parent;
  return t;
}

namespace {

std::vector<TypeRecord> type_records_from(const std::vector<TsvRecord>& records) {
  std::vector<TypeRecord> out;
  out.reserve(records.size());
  for (const auto& rec : records) {
    TypeRecord r;
    r.id = rec.fields[0];
    if (rec.fields.size() > 1) r.label = rec.fields[1];
    if (rec.fields.size() > 2) r.parent = rec.fields[2];
    r.line = rec.line;
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

std::vector<TypeRecord> parse_type_records(std::string_view text, std::string_view source) {
  return type_records_from(parse_tsv(text, source));
}

TypeTaxonomy parse_taxonomy(std::string_view text) {
  return TypeTaxonomy::build(parse_type_records(text, "<types>"), "<types>");
}

TypeTaxonomy load_taxonomy(const std::filesystem::path& path) {
  return TypeTaxonomy::build(type_records_from(read_tsv(path)), path.string());
}

EntityCorpus::EntityCorpus(std::vector<Entity> entities) : entities_(std::move(entities)) {
  by_id_.reserve(entities_.size());
  for (std::size_t i = 0; i < entities_.size(); ++i) {
    if (!by_id_.emplace(entities_[i].id, static_cast<EntityIdx>(i)).second) {
      throw DataError("duplicate entity id '" + entities_[i].id + "'");
    }
  }
}

std::optional<EntityIdx> EntityCorpus::find(std::string_view id) const {
  auto it = by_id_.find(std::string(id));
  if (it == by_id_.end()) return std::nullopt;
  return it->second;
}

EntityIdx EntityCorpus::at(std::string_view id) const {
  auto e = find(id);
  if (!e) throw DataError("unknown entity '" + std::string(id) + "'");
  return *e;
}

namespace {

EntityCorpus entities_from(const std::vector<TsvRecord>& records) {
  std::vector<Entity> out;
  out.reserve(records.size());
  for (const auto& rec : records) {
    Entity e;
    e.id = rec.fields[0];
    if (rec.fields.size() > 1) e.name = rec.fields[1];
    if (rec.fields.size() > 2) e.description = rec.fields[2];
    out.push_back(std::move(e));
  }
  return EntityCorpus(std::move(out));
}

TypeAssignments assignments_from(const std::vector<TsvRecord>& records, std::string_view source) {
  TypeAssignments out;
  out.reserve(records.size());
  for (const auto& rec : records) {
    require_fields(rec, 2, source);
    out.emplace_back(rec.fields[0], rec.fields[1]);
  }
  return out;
}

}  // namespace

EntityCorpus parse_entities(std::string_view text) { return entities_from(parse_tsv(text)); }

EntityCorpus load_entities(const std::filesystem::path& path) {
  return entities_from(read_tsv(path));
}

TypeAssignments parse_entity_types(std::string_view text) {
  return assignments_from(parse_tsv(text), "<entity_types>");
}

TypeAssignments load_entity_types(const std::filesystem::path& path) {
  return assignments_from(read_tsv(path), path.string());
}

TypeAssociations TypeAssociations::build(const TypeTaxonomy& taxonomy, const EntityCorpus& corpus,
                                         const TypeAssignments& assignments, bool closure) {
  TypeAssociations assoc;
  assoc.closure_ = closure;
  assoc.assigned_.resize(corpus.size());
  assoc.carried_.resize(corpus.size());
  assoc.extension_.resize(taxonomy.size());

  for (const auto& [entity_id, type_id] : assignments) {
    EntityIdx e = corpus.at(entity_id);
    TypeIdx t = taxonomy.at(type_id);
    assoc.assigned_[e].push_back(t);
  }
  for (EntityIdx e = 0; e < corpus.size(); ++e) {
    auto& direct = assoc.assigned_[e];
    std::sort(direct.begin(), direct.end());
    direct.erase(std::unique(direct.begin(), direct.end()), direct.end());
    auto carried = direct;
    if (closure) {
      for (TypeIdx t : direct) {
        auto up = taxonomy.ancestors(t);
        carried.insert(carried.end(), up.begin(), up.end());
      }
      std::sort(carried.begin(), carried.end());
      carried.erase(std::unique(carried.begin(), carried.end()), carried.end());
    }
    for (TypeIdx t : carried) assoc.extension_[t].push_back(e);
    assoc.carried_[e] = std::move(carried);
  }
  return assoc;
}

bool TypeAssociations::has_type(EntityIdx e, TypeIdx t) const {
  const auto& ts = carried_.at(e);
  return std::binary_search(ts.begin(), ts.end(), t);
}

double TypeAssociations::weight(EntityIdx e, TypeIdx t) const {
  const auto& ext = extension_.at(t);
  if (ext.empty() || !has_type(e, t)) return 0.0;
  return 1.0 / static_cast<double>(ext.size());
}

KnowledgeBase load_knowledge_base(const std::filesystem::path& types,
                                  const std::filesystem::path& entities,
                                  const std::filesystem::path& entity_types, bool closure) {
  KnowledgeBase kb;
  kb.taxonomy = load_taxonomy(types);
  kb.corpus = load_entities(entities);
  kb.assoc = TypeAssociations::build(kb.taxonomy, kb.corpus, load_entity_types(entity_types),
                                     closure);
  return kb;
}

double association_weight(std::string_view entity_id, std::string_view type_id,
                          const KnowledgeBase& kb) {
  TypeIdx t = kb.taxonomy.at(type_id);
  auto e = kb.corpus.find(entity_id);
  if (!e) return 0.0;
  return kb.assoc.weight(*e, t);
}

TaxonomyFeatures taxonomy_features(TypeIdx t, const TypeTaxonomy& taxonomy,
                                   const TypeAssociations& assoc) {
  if (t == TypeTaxonomy::kRoot || t >= taxonomy.size()) {
    throw DataError("unknown type index " + std::to_string(t));
  }
  TaxonomyFeatures f;
  f.depth_norm = taxonomy.max_depth() > 0
                     ? static_cast<double>(taxonomy.depth(t)) / taxonomy.max_depth()
                     : 0.0;
  f.n_children = taxonomy.children(t).size();
  f.n_siblings = taxonomy.n_siblings(t);
  f.n_entities = assoc.count(t);
  return f;
}

}  // namespace typerank
