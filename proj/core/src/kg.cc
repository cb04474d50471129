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

#include "sparql2q/kg.h"

#include <algorithm>
#include <fstream>
#include <istream>
#include <sstream>

#include "json.hpp"
#include "sparql2q/error.h"
#include "sparql2q/text.h"

namespace sparql2q {
namespace {

constexpr std::string_view kXsdNamespace = "http://www.w3.org/2001/XMLSchema#";

std::string Located(std::string_view source, size_t line,
                    std::string_view message) {
  std::ostringstream out;
  out << source << ":" << line << ": " << message;
  return out.str();
}

bool NextLine(std::istream &in, std::string &line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

std::string EscapeLexical(std::string_view lexical) {
  std::string out;
  for (char c : lexical) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string NormalizeDatatype(std::string_view datatype) {
  if (datatype.size() > 2 && datatype.front() == '<' && datatype.back() == '>') {
    std::string_view iri = datatype.substr(1, datatype.size() - 2);
    if (iri.substr(0, kXsdNamespace.size()) == kXsdNamespace) {
      return "xsd:" + std::string(iri.substr(kXsdNamespace.size()));
    }
  }
  if (datatype == "xsd:string") return "";
  return std::string(datatype);
}

LiteralCategory Literal::category() const {
  static const std::set<std::string, std::less<>> kNumbers = {
      "xsd:integer", "xsd:int", "xsd:long", "xsd:short", "xsd:byte",
      "xsd:decimal", "xsd:float", "xsd:double", "xsd:nonNegativeInteger",
      "xsd:positiveInteger", "xsd:negativeInteger", "xsd:nonPositiveInteger",
      "xsd:unsignedInt", "xsd:unsignedLong"};
  static const std::set<std::string, std::less<>> kDates = {
      "xsd:date", "xsd:dateTime", "xsd:gYear", "xsd:gYearMonth", "xsd:time"};
  if (kNumbers.count(datatype)) return LiteralCategory::kNumber;
  if (kDates.count(datatype)) return LiteralCategory::kDate;
  return LiteralCategory::kString;
}

std::string Literal::ToId() const {
  std::string out = "\"" + EscapeLexical(lexical) + "\"";
  if (!language.empty()) {
    out += "@" + language;
  } else if (!datatype.empty()) {
    out += "^^" + datatype;
  }
  return out;
}

std::optional<Literal> ParseLiteral(std::string_view text) {
  if (text.size() < 2 || text.front() != '"') return std::nullopt;
  Literal lit;
  size_t i = 1;
  bool closed = false;
  while (i < text.size()) {
    char c = text[i];
    if (c == '\\') {
      if (i + 1 >= text.size()) return std::nullopt;
      char e = text[i + 1];
      switch (e) {
        case 'n': lit.lexical += '\n'; break;
        case 't': lit.lexical += '\t'; break;
        case 'r': lit.lexical += '\r'; break;
        case '"': lit.lexical += '"'; break;
        case '\\': lit.lexical += '\\'; break;
        case '\'': lit.lexical += '\''; break;
        default: return std::nullopt;
      }
      i += 2;
      continue;
    }
    if (c == '"') {
      closed = true;
      ++i;
      break;
    }
    lit.lexical += c;
    ++i;
  }
  if (!closed) return std::nullopt;
  std::string_view rest = text.substr(i);
  if (rest.empty()) return lit;
  if (rest.front() == '@') {
    if (rest.size() < 2) return std::nullopt;
    lit.language = std::string(rest.substr(1));
    return lit;
  }
  if (rest.substr(0, 2) == "^^" && rest.size() > 2) {
    lit.datatype = NormalizeDatatype(rest.substr(2));
    return lit;
  }
  return std::nullopt;
}

std::string_view PredicateKindName(PredicateKind kind) {
  return kind == PredicateKind::kCvt ? "cvt" : "single";
}

std::string LoadReport::ToText() const {
  std::ostringstream out;
  out << "triples: " << triples << "\n";
  out << "duplicate triples: " << duplicate_triples << "\n";
  out << "entities: " << entities << "\n";
  out << "predicates: " << predicates << "\n";
  out << "catalogued predicates: " << catalogued_predicates << "\n";
  out << "uncatalogued predicates: " << uncatalogued_predicates.size() << "\n";
  for (const auto &p : uncatalogued_predicates) out << "  " << p << "\n";
  out << "dangling ids: " << dangling_ids.size() << "\n";
  for (const auto &id : dangling_ids) out << "  " << id << "\n";
  return out.str();
}

void KnowledgeGraph::Insert(Index &index, const std::string &key,
                            const Triple *t) {
  auto &bucket = index[key];
  auto pos = std::lower_bound(
      bucket.begin(), bucket.end(), t,
      [](const Triple *a, const Triple *b) { return *a < *b; });
  bucket.insert(pos, t);
}

std::span<const Triple *const> KnowledgeGraph::Lookup(const Index &index,
                                                      std::string_view key) {
  auto it = index.find(std::string(key));
  if (it == index.end()) return {};
  return it->second;
}

bool KnowledgeGraph::AddTriple(Triple triple) {
  if (triple.subject.empty() || triple.predicate.empty() ||
      triple.object.empty()) {
    throw Error(ErrorCode::kMalformedInput, "triple has an empty field");
  }
  auto [it, inserted] = triples_.insert(std::move(triple));
  if (!inserted) {
    ++duplicate_triples_;
    return false;
  }
  const Triple *t = &*it;
  Insert(by_subject_, t->subject, t);
  Insert(by_object_, t->object, t);
  Insert(by_predicate_, t->predicate, t);
  return true;
}

void KnowledgeGraph::AddEntity(EntityRecord record) {
  if (record.id.empty()) {
    throw Error(ErrorCode::kMalformedInput, "entity record without id");
  }
  std::sort(record.types.begin(), record.types.end());
  record.types.erase(std::unique(record.types.begin(), record.types.end()),
                     record.types.end());
  std::string id = record.id;
  auto [it, inserted] = entities_.emplace(id, std::move(record));
  if (!inserted) {
    throw Error(ErrorCode::kDuplicateEntity, "duplicate entity id " + id);
  }
}

void KnowledgeGraph::SetPredicateKind(const std::string &predicate,
                                      PredicateKind kind) {
  auto [it, inserted] = catalog_.emplace(predicate, kind);
  if (!inserted && it->second != kind) {
    throw Error(ErrorCode::kMalformedInput,
                "conflicting catalog kinds for " + predicate);
  }
}

bool KnowledgeGraph::Contains(const Triple &triple) const {
  return triples_.count(triple) > 0;
}

bool KnowledgeGraph::HasNode(std::string_view id) const {
  return FindEntity(id) != nullptr || !BySubject(id).empty() ||
         !ByObject(id).empty();
}

const EntityRecord *KnowledgeGraph::FindEntity(std::string_view id) const {
  auto it = entities_.find(std::string(id));
  return it == entities_.end() ? nullptr : &it->second;
}

EntityRecord KnowledgeGraph::Describe(std::string_view id) const {
  if (const EntityRecord *record = FindEntity(id)) return *record;
  EntityRecord out;
  out.id = std::string(id);
  if (auto lit = ParseLiteral(id)) out.name = lit->lexical;
  return out;
}

bool KnowledgeGraph::IsCatalogued(std::string_view predicate) const {
  return catalog_.count(std::string(predicate)) > 0;
}

PredicateKind KnowledgeGraph::KindOf(std::string_view predicate) const {
  auto it = catalog_.find(std::string(predicate));
  return it == catalog_.end() ? PredicateKind::kSingle : it->second;
}

bool KnowledgeGraph::IsCvtNode(std::string_view id) const {
  for (const Triple *t : ByObject(id)) {
    if (KindOf(t->predicate) == PredicateKind::kCvt) return true;
  }
  return false;
}

std::span<const Triple *const> KnowledgeGraph::BySubject(
    std::string_view id) const {
  return Lookup(by_subject_, id);
}

std::span<const Triple *const> KnowledgeGraph::ByObject(
    std::string_view id) const {
  return Lookup(by_object_, id);
}

std::span<const Triple *const> KnowledgeGraph::ByPredicate(
    std::string_view predicate) const {
  return Lookup(by_predicate_, predicate);
}

std::vector<std::string> KnowledgeGraph::Predicates() const {
  std::vector<std::string> out;
  out.reserve(by_predicate_.size());
  for (const auto &[p, bucket] : by_predicate_) {
    if (!bucket.empty()) out.push_back(p);
  }
  std::sort(out.begin(), out.end());
  return out;
}

LoadReport KnowledgeGraph::Report() const {
  LoadReport report;
  report.triples = triples_.size();
  report.duplicate_triples = duplicate_triples_;
  report.entities = entities_.size();
  std::vector<std::string> predicates = Predicates();
  report.predicates = predicates.size();
  for (const auto &p : predicates) {
    if (IsCatalogued(p)) {
      ++report.catalogued_predicates;
    } else {
      report.uncatalogued_predicates.push_back(p);
    }
  }
  std::set<std::string> dangling;
  for (const Triple &t : triples_) {
    for (const std::string *id : {&t.subject, &t.object}) {
      if (!IsLiteralId(*id) && !FindEntity(*id)) dangling.insert(*id);
    }
  }
  report.dangling_ids.assign(dangling.begin(), dangling.end());
  return report;
}

bool KnowledgeGraph::CheckIndexes() const {
  Index s, o, p;
  for (const Triple &t : triples_) {
    Insert(s, t.subject, &t);
    Insert(o, t.object, &t);
    Insert(p, t.predicate, &t);
  }
  auto same = [](const Index &a, const Index &b) {
    size_t non_empty = 0;
    for (const auto &[key, bucket] : b) {
      if (bucket.empty()) continue;
      ++non_empty;
      auto it = a.find(key);
      if (it == a.end() || it->second != bucket) return false;
    }
    size_t a_non_empty = 0;
    for (const auto &[key, bucket] : a) a_non_empty += bucket.empty() ? 0 : 1;
    return a_non_empty == non_empty;
  };
  return same(by_subject_, s) && same(by_object_, o) &&
         same(by_predicate_, p);
}

void ReadTriples(std::istream &in, std::string_view source,
                 KnowledgeGraph &kg) {
  std::string line;
  size_t lineno = 0;
  while (NextLine(in, line)) {
    ++lineno;
    if (Trim(line).empty() || line.front() == '#') continue;
    std::vector<std::string_view> fields = Split(line, '\t');
    if (fields.size() != 3) {
      throw Error(ErrorCode::kMalformedInput,
                  Located(source, lineno, "expected 3 tab-separated fields"));
    }
    Triple t;
    t.subject = std::string(Trim(fields[0]));
    t.predicate = std::string(Trim(fields[1]));
    std::string_view object = Trim(fields[2]);
    if (t.subject.empty() || t.predicate.empty() || object.empty()) {
      throw Error(ErrorCode::kMalformedInput,
                  Located(source, lineno, "empty triple field"));
    }
    if (object.front() == '"') {
      auto lit = ParseLiteral(object);
      if (!lit) {
        throw Error(ErrorCode::kMalformedInput,
                    Located(source, lineno, "malformed literal"));
      }
      t.object = lit->ToId();
    } else {
      t.object = std::string(object);
    }
    kg.AddTriple(std::move(t));
  }
}

void ReadEntities(std::istream &in, std::string_view source,
                  KnowledgeGraph &kg) {
  std::string line;
  size_t lineno = 0;
  while (NextLine(in, line)) {
    ++lineno;
    if (Trim(line).empty()) continue;
    EntityRecord record;
    try {
      nlohmann::json j = nlohmann::json::parse(line);
      record.id = j.at("id").get<std::string>();
      record.name = j.value("name", "");
      record.description = j.value("description", "");
      if (j.contains("types")) {
        record.types = j.at("types").get<std::vector<std::string>>();
      }
    } catch (const nlohmann::json::exception &e) {
      throw Error(ErrorCode::kMalformedInput, Located(source, lineno, e.what()));
    }
    if (record.id.empty()) {
      throw Error(ErrorCode::kMalformedInput,
                  Located(source, lineno, "empty entity id"));
    }
    try {
      kg.AddEntity(std::move(record));
    } catch (const Error &e) {
      throw Error(e.code(), Located(source, lineno, e.what()));
    }
  }
}

void ReadCatalog(std::istream &in, std::string_view source,
                 KnowledgeGraph &kg) {
  std::string line;
  size_t lineno = 0;
  while (NextLine(in, line)) {
    ++lineno;
    if (Trim(line).empty() || line.front() == '#') continue;
    std::vector<std::string_view> fields = Split(line, '\t');
    if (fields.size() != 2 || Trim(fields[0]).empty()) {
      throw Error(ErrorCode::kMalformedInput,
                  Located(source, lineno, "expected `predicate<TAB>kind`"));
    }
    std::string kind = ToLower(Trim(fields[1]));
    PredicateKind parsed;
    if (kind == "single") {
      parsed = PredicateKind::kSingle;
    } else if (kind == "cvt") {
      parsed = PredicateKind::kCvt;
    } else {
      throw Error(ErrorCode::kMalformedInput,
                  Located(source, lineno, "unknown predicate kind " + kind));
    }
    try {
      kg.SetPredicateKind(std::string(Trim(fields[0])), parsed);
    } catch (const Error &e) {
      throw Error(e.code(), Located(source, lineno, e.what()));
    }
  }
}

KnowledgeGraph LoadKnowledgeGraph(const std::string &triples_path,
                                  const std::string &entities_path,
                                  const std::string &catalog_path,
                                  LoadReport *report) {
  auto open = [](const std::string &path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::kMissingInput, "cannot open " + path);
    return in;
  };
  KnowledgeGraph kg;
  {
    std::ifstream in = open(catalog_path);
    ReadCatalog(in, catalog_path, kg);
  }
  {
    std::ifstream in = open(entities_path);
    ReadEntities(in, entities_path, kg);
  }
  {
    std::ifstream in = open(triples_path);
    ReadTriples(in, triples_path, kg);
  }
  if (report) *report = kg.Report();
  return kg;
}

std::vector<Binding> MatchPattern(const KnowledgeGraph &kg,
                                  const PatternSlot &subject,
                                  const PatternSlot &predicate,
                                  const PatternSlot &object) {
  std::span<const Triple *const> candidates;
  bool scan_all = false;
  if (!subject.is_variable) {
    candidates = kg.BySubject(subject.value);
  } else if (!object.is_variable) {
    candidates = kg.ByObject(object.value);
  } else if (!predicate.is_variable) {
    candidates = kg.ByPredicate(predicate.value);
  } else {
    scan_all = true;
  }

  std::vector<Binding> out;
  auto visit = [&](const Triple &t) {
    Binding binding;
    auto bind = [&](const PatternSlot &slot, const std::string &value) {
      if (!slot.is_variable) return slot.value == value;
      auto [it, inserted] = binding.emplace(slot.value, value);
      return inserted || it->second == value;
    };
    if (bind(subject, t.subject) && bind(predicate, t.predicate) &&
        bind(object, t.object)) {
      out.push_back(std::move(binding));
    }
  };
  if (scan_all) {
    for (const Triple &t : kg.triples()) visit(t);
  } else {
    for (const Triple *t : candidates) visit(*t);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Star OneHopStar(const KnowledgeGraph &kg, std::string_view center) {
  if (!kg.HasNode(center)) {
    throw Error(ErrorCode::kUnknownEntity,
                "unknown entity " + std::string(center));
  }
  Star star;
  for (const Triple *t : kg.ByObject(center)) {
    star.inward.emplace_back(t->subject, t->predicate);
  }
  for (const Triple *t : kg.BySubject(center)) {
    star.outward.emplace_back(t->predicate, t->object);
  }
  std::sort(star.inward.begin(), star.inward.end());
  std::sort(star.outward.begin(), star.outward.end());
  return star;
}

}  // namespace sparql2q
