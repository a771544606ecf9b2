#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace typerank {

using TypeIdx = std::uint32_t;
using EntityIdx = std::uint32_t;

struct TypeNode {
  std::string id;
  std::string label;
  std::optional<TypeIdx> parent;  // empty only for the root
  std::vector<TypeIdx> children;
  int depth = 0;
  std::vector<std::string> label_tokens;
};

// Record as it appears in types.tsv; an empty parent means top-level.
struct TypeRecord {
  std::string id;
  std::string label;
  std::string parent;
  std::size_t line = 0;
};

// Is-a tree with an implicit root at index 0. Immutable once built.
class TypeTaxonomy {
 public:
  static constexpr TypeIdx kRoot = 0;

  TypeTaxonomy();

  // Validates and links the records. Parents may be declared after their
  // children. Throws DataError on duplicate ids, orphan parent references,
  // cycles and labels that tokenize to nothing; the message names the line.
  static TypeTaxonomy build(const std::vector<TypeRecord>& records,
                            std::string_view source = "<types>");

  // Number of nodes including the root.
  std::size_t size() const { return nodes_.size(); }
  // Non-root types in declaration order.
  std::vector<TypeIdx> types() const;

  const TypeNode& node(TypeIdx t) const { return nodes_.at(t); }
  const std::string& id(TypeIdx t) const { return nodes_.at(t).id; }
  std::optional<TypeIdx> find(std::string_view id) const;
  // Throws DataError("unknown type ...").
  TypeIdx at(std::string_view id) const;

  int depth(TypeIdx t) const { return nodes_.at(t).depth; }
  int max_depth() const { return max_depth_; }
  std::optional<TypeIdx> parent(TypeIdx t) const { return nodes_.at(t).parent; }
  const std::vector<TypeIdx>& children(TypeIdx t) const { return nodes_.at(t).children; }
  std::size_t n_siblings(TypeIdx t) const;

  // True if `ancestor` lies strictly above `t`.
  bool is_ancestor(TypeIdx ancestor, TypeIdx t) const;
  bool on_same_path(TypeIdx a, TypeIdx b) const;
  // Ancestors of t excluding the root, nearest first.
  std::vector<TypeIdx> ancestors(TypeIdx t) const;
  // The depth-1 type above (or equal to) t.
  TypeIdx top_level(TypeIdx t) const;

 private:
  std::vector<TypeNode> nodes_;
  std::unordered_map<std::string, TypeIdx> by_id_;
  int max_depth_ = 0;
};

std::vector<TypeRecord> parse_type_records(std::string_view text, std::string_view source);
TypeTaxonomy load_taxonomy(const std::filesystem::path& path);
TypeTaxonomy parse_taxonomy(std::string_view text);

struct Entity {
  std::string id;
  std::string name;
  std::string description;
};

class EntityCorpus {
 public:
  EntityCorpus() = default;
  // Throws DataError on duplicate ids.
  explicit EntityCorpus(std::vector<Entity> entities);

  std::size_t size() const { return entities_.size(); }
  const Entity& entity(EntityIdx e) const { return entities_.at(e); }
  const std::vector<Entity>& entities() const { return entities_; }
  std::optional<EntityIdx> find(std::string_view id) const;
  EntityIdx at(std::string_view id) const;

 private:
  std::vector<Entity> entities_;
  std::unordered_map<std::string, EntityIdx> by_id_;
};

EntityCorpus load_entities(const std::filesystem::path& path);
EntityCorpus parse_entities(std::string_view text);

// (entity_id, type_id) pairs as listed in entity_types.tsv.
using TypeAssignments = std::vector<std::pair<std::string, std::string>>;

TypeAssignments load_entity_types(const std::filesystem::path& path);
TypeAssignments parse_entity_types(std::string_view text);

// Entity-type indicator and the uniform association weights derived from it.
// With closure enabled an entity typed t also belongs to every ancestor of t.
class TypeAssociations {
 public:
  TypeAssociations() = default;

  // Throws DataError for unknown entity or type ids.
  static TypeAssociations build(const TypeTaxonomy& taxonomy, const EntityCorpus& corpus,
                                const TypeAssignments& assignments, bool closure = true);

  bool closure() const { return closure_; }
  std::size_t n_entities() const { return carried_.size(); }
  // Direct assignments, sorted.
  const std::vector<TypeIdx>& assigned(EntityIdx e) const { return assigned_.at(e); }
  // Types e carries under the closure setting, sorted.
  const std::vector<TypeIdx>& types_of(EntityIdx e) const { return carried_.at(e); }
  // Entities carrying t, sorted.
  const std::vector<EntityIdx>& extension(TypeIdx t) const { return extension_.at(t); }
  std::size_t count(TypeIdx t) const { return extension_.at(t).size(); }
  bool has_type(EntityIdx e, TypeIdx t) const;

  // 1/count(t) when e carries t, else 0. Empty extensions give 0.
  double weight(EntityIdx e, TypeIdx t) const;

 private:
  bool closure_ = true;
  std::vector<std::vector<TypeIdx>> assigned_;
  std::vector<std::vector<TypeIdx>> carried_;
  std::vector<std::vector<EntityIdx>> extension_;
};

struct KnowledgeBase {
  TypeTaxonomy taxonomy;
  EntityCorpus corpus;
  TypeAssociations assoc;
};

KnowledgeBase load_knowledge_base(const std::filesystem::path& types,
                                  const std::filesystem::path& entities,
                                  const std::filesystem::path& entity_types, bool closure = true);

// Id-based lookup; throws DataError for an unknown type. Unknown entities get 0.
double association_weight(std::string_view entity_id, std::string_view type_id,
                          const KnowledgeBase& kb);

struct TaxonomyFeatures {
  double depth_norm = 0.0;
  std::size_t n_children = 0;
  std::size_t n_siblings = 0;
  std::size_t n_entities = 0;
};

TaxonomyFeatures taxonomy_features(TypeIdx t, const TypeTaxonomy& taxonomy,
                                   const TypeAssociations& assoc);

}  // namespace typerank
