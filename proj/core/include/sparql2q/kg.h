// Copyright 2026 The sparql2q Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SPARQL2Q_KG_H_
#define SPARQL2Q_KG_H_

#include <compare>
#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace sparql2q {

// Literals share the node id space with entities. A literal id is its
// canonical text form and always starts with a double quote:
//   "lexical"             plain string
//   "lexical"@en          language-tagged string
//   "lexical"^^xsd:type   typed literal
enum class LiteralCategory { kNumber, kDate, kString };

struct Literal {
  std::string lexical;
  std::string datatype;  // empty for plain and language-tagged strings
  std::string language;

  LiteralCategory category() const;
  std::string ToId() const;

  bool operator==(const Literal &) const = default;
};

inline bool IsLiteralId(std::string_view id) {
  return !id.empty() && id.front() == '"';
}

// Parses a literal in canonical or triples-file form. Datatype IRIs in the
// XML Schema namespace are shortened to the xsd: prefix.
std::optional<Literal> ParseLiteral(std::string_view text);
std::string NormalizeDatatype(std::string_view datatype);

struct Triple {
  std::string subject;
  std::string predicate;
  std::string object;

  auto operator<=>(const Triple &) const = default;
};

struct EntityRecord {
  std::string id;
  std::string name;
  std::string description;
  std::vector<std::string> types;

  bool operator==(const EntityRecord &) const = default;
};

enum class PredicateKind { kSingle, kCvt };

std::string_view PredicateKindName(PredicateKind kind);

struct LoadReport {
  size_t triples = 0;
  size_t entities = 0;
  size_t predicates = 0;
  size_t catalogued_predicates = 0;
  size_t duplicate_triples = 0;
  std::vector<std::string> uncatalogued_predicates;
  std::vector<std::string> dangling_ids;

  std::string ToText() const;
};

// Incoming and outgoing edges of a node.
struct Star {
  std::vector<std::pair<std::string, std::string>> inward;   // (e1, p)
  std::vector<std::pair<std::string, std::string>> outward;  // (p, e2)
};

// One position of a triple pattern: a ground id or a variable name.
struct PatternSlot {
  bool is_variable = false;
  std::string value;

  static PatternSlot Var(std::string name) { return {true, std::move(name)}; }
  static PatternSlot Ground(std::string id) { return {false, std::move(id)}; }
};

using Binding = std::map<std::string, std::string>;

// In-memory triple store with by-subject, by-object and by-predicate
// indexes. Each index bucket is kept sorted, so every lookup returns triples
// in lexicographic order. Not synchronized; build it once and share it
// read-only.
class KnowledgeGraph {
 public:
  KnowledgeGraph() = default;
  KnowledgeGraph(const KnowledgeGraph &) = delete;
  KnowledgeGraph &operator=(const KnowledgeGraph &) = delete;
  KnowledgeGraph(KnowledgeGraph &&) = default;
  KnowledgeGraph &operator=(KnowledgeGraph &&) = default;

  // Returns false if the triple was already present.
  bool AddTriple(Triple triple);
  void AddEntity(EntityRecord record);
  void SetPredicateKind(const std::string &predicate, PredicateKind kind);

  const std::set<Triple> &triples() const { return triples_; }
  const std::map<std::string, EntityRecord> &entities() const {
    return entities_;
  }
  const std::map<std::string, PredicateKind> &catalog() const {
    return catalog_;
  }
  size_t size() const { return triples_.size(); }

  bool Contains(const Triple &triple) const;
  bool HasNode(std::string_view id) const;
  const EntityRecord *FindEntity(std::string_view id) const;

  // Metadata for any node: the stored record, a synthesized record for a
  // literal (name = lexical form), or an id-only record.
  EntityRecord Describe(std::string_view id) const;

  bool IsCatalogued(std::string_view predicate) const;
  PredicateKind KindOf(std::string_view predicate) const;

  // A CVT node is the object of at least one CVT-kind predicate.
  bool IsCvtNode(std::string_view id) const;

  std::span<const Triple *const> BySubject(std::string_view id) const;
  std::span<const Triple *const> ByObject(std::string_view id) const;
  std::span<const Triple *const> ByPredicate(std::string_view predicate) const;

  std::vector<std::string> Predicates() const;

  LoadReport Report() const;

  // Rebuilds the indexes from scratch and compares them with the live ones.
  bool CheckIndexes() const;

 private:
  using Index = std::unordered_map<std::string, std::vector<const Triple *>>;

  static void Insert(Index &index, const std::string &key, const Triple *t);
  static std::span<const Triple *const> Lookup(const Index &index,
                                               std::string_view key);

  std::set<Triple> triples_;
  std::map<std::string, EntityRecord> entities_;
  std::map<std::string, PredicateKind> catalog_;
  Index by_subject_;
  Index by_object_;
  Index by_predicate_;
  size_t duplicate_triples_ = 0;
};

// Streaming loaders. `source` names the input in error messages.
void ReadTriples(std::istream &in, std::string_view source,
                 KnowledgeGraph &kg);
void ReadEntities(std::istream &in, std::string_view source,
                  KnowledgeGraph &kg);
void ReadCatalog(std::istream &in, std::string_view source,
                 KnowledgeGraph &kg);

KnowledgeGraph LoadKnowledgeGraph(const std::string &triples_path,
                                  const std::string &entities_path,
                                  const std::string &catalog_path,
                                  LoadReport *report = nullptr);

// All bindings of the pattern's variables such that the instantiated triple
// is in the graph, in lexicographic order. A fully ground pattern yields one
// empty binding when the triple exists.
std::vector<Binding> MatchPattern(const KnowledgeGraph &kg,
                                  const PatternSlot &subject,
                                  const PatternSlot &predicate,
                                  const PatternSlot &object);

Star OneHopStar(const KnowledgeGraph &kg, std::string_view center);

}  // namespace sparql2q

#endif  // SPARQL2Q_KG_H_
