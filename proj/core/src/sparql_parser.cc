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

#include <set>
#include <string>

#include "sparql2q/error.h"
#include "sparql2q/sparql.h"
#include "sparql2q/text.h"

namespace sparql2q {
namespace {

constexpr std::string_view kFreebaseNamespace = "http://rdf.freebase.com/ns/";

enum class TokenKind {
  kEnd,
  kVariable,
  kIri,
  kName,
  kLiteral,
  kPunct,
  kOperator,
};

struct Token {
  TokenKind kind = TokenKind::kEnd;
  std::string text;  // name, variable (no '?'), iri (no brackets), literal id
  size_t begin = 0;
  size_t end = 0;
};

std::string Describe(const Token &t) {
  switch (t.kind) {
    case TokenKind::kEnd: return "end of input";
    case TokenKind::kVariable: return "'?" + t.text + "'";
    case TokenKind::kIri: return "'<" + t.text + ">'";
    default: return "'" + t.text + "'";
  }
}

Error Unsupported(std::string_view construct) {
  return Error(ErrorCode::kUnsupportedFeature,
               "unsupported SPARQL construct: " + std::string(construct));
}

bool IsNameStart(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}

bool IsNameChar(char c) {
  return IsNameStart(c) || (c >= '0' && c <= '9') || c == '.' || c == ':' ||
         c == '-' || c == '/' || c == '#';
}

bool IsVarChar(char c) {
  return IsNameStart(c) || (c >= '0' && c <= '9');
}

bool IsDigit(char c) { return c >= '0' && c <= '9'; }

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  size_t offset() const { return pos_; }

  Token Next() {
    SkipSpaceAndComments();
    Token t;
    t.begin = pos_;
    if (pos_ >= text_.size()) {
      t.end = pos_;
      return t;
    }
    char c = text_[pos_];
    if (c == '?' || c == '$') {
      size_t start = ++pos_;
      while (pos_ < text_.size() && IsVarChar(text_[pos_])) ++pos_;
      if (pos_ == start) throw SyntaxError(t.begin, "expected variable name");
      t.kind = TokenKind::kVariable;
      t.text = std::string(text_.substr(start, pos_ - start));
    } else if (c == '<' && LooksLikeIri()) {
      size_t close = text_.find('>', pos_);
      t.kind = TokenKind::kIri;
      t.text = std::string(text_.substr(pos_ + 1, close - pos_ - 1));
      pos_ = close + 1;
    } else if (c == '"' || c == '\'') {
      t.kind = TokenKind::kLiteral;
      t.text = LexString(c);
    } else if (IsDigit(c) || ((c == '-' || c == '+') &&
                              pos_ + 1 < text_.size() &&
                              IsDigit(text_[pos_ + 1]))) {
      t.kind = TokenKind::kLiteral;
      t.text = LexNumber();
    } else if (IsNameStart(c)) {
      size_t start = pos_;
      while (pos_ < text_.size() && IsNameChar(text_[pos_])) ++pos_;
      // A trailing '.' terminates the triple, it is not part of the name.
      while (pos_ > start + 1 && text_[pos_ - 1] == '.') --pos_;
      t.kind = TokenKind::kName;
      t.text = std::string(text_.substr(start, pos_ - start));
    } else if (std::string_view("{}().,;*").find(c) != std::string_view::npos) {
      t.kind = TokenKind::kPunct;
      t.text = std::string(1, c);
      ++pos_;
    } else {
      static const char *const kOps[] = {"<=", ">=", "!=", "&&", "||",
                                         "<",  ">",  "=",  "!"};
      for (const char *op : kOps) {
        std::string_view sv(op);
        if (text_.substr(pos_, sv.size()) == sv) {
          t.kind = TokenKind::kOperator;
          t.text = std::string(sv);
          pos_ += sv.size();
          break;
        }
      }
      if (t.kind != TokenKind::kOperator) {
        throw SyntaxError(pos_, "unexpected character '" + std::string(1, c) +
                                    "'");
      }
    }
    t.end = pos_;
    return t;
  }

 private:
  void SkipSpaceAndComments() {
    while (pos_ < text_.size()) {
      if (IsSpace(text_[pos_])) {
        ++pos_;
      } else if (text_[pos_] == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  bool LooksLikeIri() const {
    for (size_t i = pos_ + 1; i < text_.size(); ++i) {
      char c = text_[i];
      if (c == '>') return i > pos_ + 1;
      if (IsSpace(c) || c == '<' || c == '"' || c == '{' || c == '}' ||
          c == '|' || c == '^' || c == '`' || c == '\\') {
        return false;
      }
    }
    return false;
  }

  std::string LexString(char quote) {
    size_t start = pos_;
    Literal lit;
    ++pos_;
    for (;;) {
      if (pos_ >= text_.size()) throw SyntaxError(start, "unterminated string");
      char c = text_[pos_];
      if (c == quote) {
        ++pos_;
        break;
      }
      if (c == '\\') {
        if (pos_ + 1 >= text_.size()) {
          throw SyntaxError(pos_, "unterminated escape");
        }
        char e = text_[pos_ + 1];
        switch (e) {
          case 'n': lit.lexical += '\n'; break;
          case 't': lit.lexical += '\t'; break;
          case 'r': lit.lexical += '\r'; break;
          case '"': lit.lexical += '"'; break;
          case '\'': lit.lexical += '\''; break;
          case '\\': lit.lexical += '\\'; break;
          default: throw SyntaxError(pos_, "invalid escape sequence");
        }
        pos_ += 2;
        continue;
      }
      lit.lexical += c;
      ++pos_;
    }
    if (pos_ < text_.size() && text_[pos_] == '@') {
      size_t b = ++pos_;
      while (pos_ < text_.size() &&
             (IsVarChar(text_[pos_]) || text_[pos_] == '-')) {
        ++pos_;
      }
      if (pos_ == b) throw SyntaxError(b, "expected language tag");
      lit.language = std::string(text_.substr(b, pos_ - b));
    } else if (text_.substr(pos_, 2) == "^^") {
      pos_ += 2;
      size_t b = pos_;
      if (pos_ < text_.size() && text_[pos_] == '<') {
        size_t close = text_.find('>', pos_);
        if (close == std::string_view::npos) {
          throw SyntaxError(b, "unterminated datatype IRI");
        }
        pos_ = close + 1;
      } else {
        while (pos_ < text_.size() && IsNameChar(text_[pos_])) ++pos_;
        while (pos_ > b && text_[pos_ - 1] == '.') --pos_;
      }
      if (pos_ == b) throw SyntaxError(b, "expected datatype");
      lit.datatype = NormalizeDatatype(text_.substr(b, pos_ - b));
    }
    return lit.ToId();
  }

  std::string LexNumber() {
    size_t start = pos_;
    if (text_[pos_] == '-' || text_[pos_] == '+') ++pos_;
    while (pos_ < text_.size() && IsDigit(text_[pos_])) ++pos_;
    std::string datatype = "xsd:integer";
    if (pos_ + 1 < text_.size() && text_[pos_] == '.' &&
        IsDigit(text_[pos_ + 1])) {
      ++pos_;
      while (pos_ < text_.size() && IsDigit(text_[pos_])) ++pos_;
      datatype = "xsd:decimal";
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      size_t save = pos_++;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) {
        ++pos_;
      }
      if (pos_ < text_.size() && IsDigit(text_[pos_])) {
        while (pos_ < text_.size() && IsDigit(text_[pos_])) ++pos_;
        datatype = "xsd:double";
      } else {
        pos_ = save;
      }
    }
    Literal lit{std::string(text_.substr(start, pos_ - start)), datatype, ""};
    return lit.ToId();
  }

  std::string_view text_;
  size_t pos_ = 0;
};

class Parser {
 public:
  Parser(std::string_view text, bool prefix_mode)
      : lexer_(text), prefix_mode_(prefix_mode) {
    current_ = lexer_.Next();
  }

  PrefixParse Parse() {
    SparqlQuery q;
    ParsePrologue(q);
    ParseSelect(q);
    ParseWhere(q);
    ParseModifiers(q);
    if (!prefix_mode_ && current_.kind != TokenKind::kEnd) {
      Fail("end of query");
    }
    ValidateQuery(q, current_.begin);
    return {std::move(q), last_end_};
  }

 private:
  const Token &Peek() const { return current_; }

  Token Take() {
    Token t = std::move(current_);
    last_end_ = t.end;
    if (lenient_) {
      try {
        current_ = lexer_.Next();
      } catch (const SyntaxError &) {
        current_ = Token{TokenKind::kEnd, "", last_end_, last_end_};
      }
    } else {
      current_ = lexer_.Next();
    }
    return t;
  }

  [[noreturn]] void Fail(std::string_view expected) const {
    throw SyntaxError(current_.begin, "expected " + std::string(expected) +
                                          " but found " + Describe(current_));
  }

  bool IsKeyword(std::string_view kw) const {
    return current_.kind == TokenKind::kName &&
           EqualsIgnoreCase(current_.text, kw);
  }

  bool IsPunct(char c) const {
    return current_.kind == TokenKind::kPunct && current_.text[0] == c;
  }

  bool IsOperator(std::string_view op) const {
    return current_.kind == TokenKind::kOperator && current_.text == op;
  }

  void ExpectKeyword(std::string_view kw) {
    if (!IsKeyword(kw)) Fail("'" + std::string(kw) + "'");
    Take();
  }

  void ExpectPunct(char c) {
    if (!IsPunct(c)) Fail("'" + std::string(1, c) + "'");
    Take();
  }

  std::string ExpectVariable() {
    if (current_.kind != TokenKind::kVariable) Fail("variable");
    return Take().text;
  }

  void ParsePrologue(SparqlQuery &q) {
    while (IsKeyword("PREFIX") || IsKeyword("BASE")) {
      if (IsKeyword("BASE")) throw Unsupported("BASE");
      Take();
      if (current_.kind != TokenKind::kName || current_.text.back() != ':') {
        Fail("prefix name");
      }
      std::string name = Take().text;
      name.pop_back();
      if (current_.kind != TokenKind::kIri) Fail("IRI");
      std::string iri = Take().text;
      if (iri == kFreebaseNamespace) freebase_prefixes_.insert(name);
      q.prefixes.push_back({std::move(name), std::move(iri)});
    }
  }

  void ParseSelect(SparqlQuery &q) {
    for (const char *kw : {"ASK", "CONSTRUCT", "DESCRIBE"}) {
      if (IsKeyword(kw)) throw Unsupported(std::string(kw) + " query");
    }
    ExpectKeyword("SELECT");
    if (IsKeyword("DISTINCT")) {
      Take();
      q.distinct = true;
    } else if (IsKeyword("REDUCED")) {
      throw Unsupported("REDUCED");
    }
    if (IsPunct('*')) throw Unsupported("SELECT *");
    for (;;) {
      if (current_.kind == TokenKind::kVariable) {
        q.projection.push_back(Take().text);
      } else if (IsPunct('(')) {
        Take();
        ParseCount(q);
        ExpectKeyword("AS");
        q.count->alias = ExpectVariable();
        ExpectPunct(')');
      } else if (IsKeyword("COUNT")) {
        ParseCount(q);
      } else if (current_.kind == TokenKind::kName && IsAggregateName()) {
        throw Unsupported(ToUpper(current_.text) + " aggregate");
      } else {
        break;
      }
    }
    if (q.projection.empty() && !q.count) Fail("projected variable");
    if (IsKeyword("FROM")) throw Unsupported("FROM");
  }

  static std::string ToUpper(std::string s) {
    for (char &c : s) {
      if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
    }
    return s;
  }

  bool IsAggregateName() const {
    for (const char *kw : {"SUM", "MIN", "MAX", "AVG", "SAMPLE",
                           "GROUP_CONCAT"}) {
      if (EqualsIgnoreCase(current_.text, kw)) return true;
    }
    return false;
  }

  void ParseCount(SparqlQuery &q) {
    if (current_.kind == TokenKind::kName && IsAggregateName()) {
      throw Unsupported(ToUpper(current_.text) + " aggregate");
    }
    ExpectKeyword("COUNT");
    if (q.count) throw Unsupported("multiple aggregates");
    ExpectPunct('(');
    CountAggregate count;
    if (IsKeyword("DISTINCT")) {
      Take();
      count.distinct = true;
    }
    if (IsPunct('*')) throw Unsupported("COUNT(*)");
    count.variable = ExpectVariable();
    ExpectPunct(')');
    q.count = std::move(count);
  }

  void ParseWhere(SparqlQuery &q) {
    if (IsKeyword("WHERE")) Take();
    ExpectPunct('{');
    for (;;) {
      if (IsPunct('}')) break;
      if (current_.kind == TokenKind::kEnd) Fail("'}'");
      if (IsPunct('{')) throw Unsupported("nested group pattern");
      for (const char *kw : {"OPTIONAL", "UNION", "MINUS", "BIND", "VALUES",
                             "GRAPH", "SERVICE"}) {
        if (IsKeyword(kw)) throw Unsupported(kw);
      }
      if (IsKeyword("SELECT")) throw Unsupported("subquery");
      if (IsKeyword("FILTER")) {
        Take();
        ParseFilter(q);
      } else {
        ParseTriple(q);
      }
      if (IsPunct('.')) Take();
    }
    // Whatever follows the closing brace may be free text in prefix mode.
    if (prefix_mode_) lenient_ = true;
    Take();
  }

  Term ParseNode(bool predicate_position) {
    const Token &t = Peek();
    switch (t.kind) {
      case TokenKind::kVariable:
        if (predicate_position) throw Unsupported("variable predicate");
        return Term::Var(Take().text);
      case TokenKind::kIri:
        return Term::Iri(IriValue(Take().text));
      case TokenKind::kName: {
        if (t.text.rfind("_:", 0) == 0) throw Unsupported("blank node");
        return Term::Iri(NameValue(Take().text));
      }
      case TokenKind::kLiteral:
        if (predicate_position) Fail("predicate");
        return Term{Term::Kind::kLiteral, Take().text};
      default:
        Fail(predicate_position ? "predicate" : "term");
    }
  }

  void ParseTriple(SparqlQuery &q) {
    TriplePattern tp;
    tp.subject = ParseNode(false);
    tp.predicate = ParseNode(true);
    tp.object = ParseNode(false);
    if (IsPunct(';') || IsPunct(',')) {
      throw Unsupported("predicate-object list");
    }
    q.patterns.push_back(std::move(tp));
  }

  std::string IriValue(const std::string &iri) const {
    if (iri.rfind(kFreebaseNamespace, 0) == 0) {
      return iri.substr(kFreebaseNamespace.size());
    }
    return "<" + iri + ">";
  }

  std::string NameValue(const std::string &name) const {
    size_t colon = name.find(':');
    if (colon != std::string::npos) {
      std::string prefix = name.substr(0, colon);
      if (prefix == "ns" || freebase_prefixes_.count(prefix)) {
        return name.substr(colon + 1);
      }
    }
    return name;
  }

  // One side of a comparison.
  struct Operand {
    FilterFunction function = FilterFunction::kNone;
    Term term;
  };

  Operand ParseOperand() {
    if (current_.kind == TokenKind::kName) {
      Token name = Take();
      if (IsPunct('(')) {
        FilterFunction fn;
        if (EqualsIgnoreCase(name.text, "str")) {
          fn = FilterFunction::kStr;
        } else if (EqualsIgnoreCase(name.text, "lang")) {
          fn = FilterFunction::kLang;
        } else {
          throw Unsupported("function " + name.text);
        }
        Take();
        std::string var = ExpectVariable();
        ExpectPunct(')');
        return {fn, Term::Var(std::move(var))};
      }
      if (EqualsIgnoreCase(name.text, "NOT") ||
          EqualsIgnoreCase(name.text, "EXISTS")) {
        throw Unsupported("NOT EXISTS");
      }
      return {FilterFunction::kNone, Term::Iri(NameValue(name.text))};
    }
    if (IsOperator("!")) throw Unsupported("negated FILTER");
    switch (current_.kind) {
      case TokenKind::kVariable:
        return {FilterFunction::kNone, Term::Var(Take().text)};
      case TokenKind::kIri:
        return {FilterFunction::kNone, Term::Iri(IriValue(Take().text))};
      case TokenKind::kLiteral:
        return {FilterFunction::kNone,
                Term{Term::Kind::kLiteral, Take().text}};
      default:
        Fail("filter operand");
    }
  }

  static std::optional<CompareOp> ToOp(const std::string &text) {
    if (text == "<") return CompareOp::kLt;
    if (text == ">") return CompareOp::kGt;
    if (text == "<=") return CompareOp::kLe;
    if (text == ">=") return CompareOp::kGe;
    if (text == "=") return CompareOp::kEq;
    if (text == "!=") return CompareOp::kNe;
    return std::nullopt;
  }

  static CompareOp Flip(CompareOp op) {
    switch (op) {
      case CompareOp::kLt: return CompareOp::kGt;
      case CompareOp::kGt: return CompareOp::kLt;
      case CompareOp::kLe: return CompareOp::kGe;
      case CompareOp::kGe: return CompareOp::kLe;
      default: return op;
    }
  }

  void ParseComparison(SparqlQuery &q) {
    if (IsPunct('(')) {
      Take();
      ParseConjunction(q);
      ExpectPunct(')');
      return;
    }
    Operand lhs = ParseOperand();
    std::optional<CompareOp> op;
    if (current_.kind == TokenKind::kOperator) op = ToOp(current_.text);
    if (!op) Fail("comparison operator");
    Take();
    Operand rhs = ParseOperand();
    auto is_subject = [](const Operand &o) {
      return o.function != FilterFunction::kNone || o.term.is_variable();
    };
    if (!is_subject(lhs)) {
      if (!is_subject(rhs)) throw Unsupported("comparison between constants");
      std::swap(lhs, rhs);
      op = Flip(*op);
    }
    if (rhs.function != FilterFunction::kNone) {
      throw Unsupported("function on both sides of a comparison");
    }
    Filter f;
    f.function = lhs.function;
    f.variable = lhs.term.value;
    f.op = *op;
    f.operand = std::move(rhs.term);
    q.filters.push_back(std::move(f));
  }

  void ParseConjunction(SparqlQuery &q) {
    ParseComparison(q);
    while (IsOperator("&&")) {
      Take();
      ParseComparison(q);
    }
    if (IsOperator("||")) throw Unsupported("disjunctive FILTER");
  }

  void ParseFilter(SparqlQuery &q) {
    if (IsKeyword("NOT") || IsKeyword("EXISTS")) throw Unsupported("NOT EXISTS");
    if (current_.kind == TokenKind::kName) {
      throw Unsupported("function " + current_.text);
    }
    ExpectPunct('(');
    ParseConjunction(q);
    ExpectPunct(')');
  }

  void ParseModifiers(SparqlQuery &q) {
    if (IsKeyword("GROUP")) throw Unsupported("GROUP BY");
    if (IsKeyword("HAVING")) throw Unsupported("HAVING");
    if (IsKeyword("ORDER")) {
      Take();
      ExpectKeyword("BY");
      OrderBy order;
      if (IsKeyword("ASC") || IsKeyword("DESC")) {
        order.descending = IsKeyword("DESC");
        Take();
        ExpectPunct('(');
        if (current_.kind == TokenKind::kName) {
          throw Unsupported("function " + current_.text + " in ORDER BY");
        }
        order.variable = ExpectVariable();
        ExpectPunct(')');
      } else {
        order.variable = ExpectVariable();
        if (IsKeyword("ASC") || IsKeyword("DESC")) {
          order.descending = IsKeyword("DESC");
          Take();
        }
      }
      if (current_.kind == TokenKind::kVariable || IsKeyword("ASC") ||
          IsKeyword("DESC")) {
        throw Unsupported("multi-key ORDER BY");
      }
      q.order_by = std::move(order);
    }
    if (IsKeyword("LIMIT")) {
      Take();
      size_t at = current_.begin;
      if (current_.kind != TokenKind::kLiteral) Fail("integer");
      auto lit = ParseLiteral(current_.text);
      if (!lit || lit->datatype != "xsd:integer") Fail("integer");
      int64_t n = 0;
      try {
        n = std::stoll(lit->lexical);
      } catch (const std::exception &) {
        throw SyntaxError(at, "LIMIT out of range");
      }
      if (n < 1) throw SyntaxError(at, "LIMIT must be at least 1");
      Take();
      q.limit = n;
    }
    if (IsKeyword("OFFSET")) throw Unsupported("OFFSET");
    if (!prefix_mode_ && IsKeyword("ORDER")) {
      throw Unsupported("ORDER BY after LIMIT");
    }
  }

  Lexer lexer_;
  Token current_;
  size_t last_end_ = 0;
  bool prefix_mode_;
  bool lenient_ = false;
  std::set<std::string> freebase_prefixes_;
};

}  // namespace

std::vector<std::string> SparqlQuery::PatternVariables() const {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const TriplePattern &tp : patterns) {
    for (const Term *t : {&tp.subject, &tp.predicate, &tp.object}) {
      if (t->is_variable() && seen.insert(t->value).second) {
        out.push_back(t->value);
      }
    }
  }
  return out;
}

void ValidateQuery(const SparqlQuery &q, size_t position) {
  if (q.patterns.empty()) {
    throw SyntaxError(position, "WHERE clause has no triple pattern");
  }
  std::vector<std::string> vars = q.PatternVariables();
  std::set<std::string> known(vars.begin(), vars.end());
  auto require = [&](const std::string &v, std::string_view where) {
    if (!known.count(v)) {
      throw SyntaxError(position, "variable ?" + v + " in " +
                                      std::string(where) +
                                      " does not occur in any triple pattern");
    }
  };
  for (const TriplePattern &tp : q.patterns) {
    if (tp.predicate.kind != Term::Kind::kIri) {
      throw SyntaxError(position, "predicate must be an IRI");
    }
  }
  std::set<std::string> projected;
  for (const std::string &v : q.projection) {
    require(v, "projection");
    if (!projected.insert(v).second) {
      throw SyntaxError(position, "variable ?" + v + " projected twice");
    }
  }
  if (q.projection.empty() && !q.count) {
    throw SyntaxError(position, "empty projection");
  }
  if (q.count) require(q.count->variable, "COUNT");
  for (const Filter &f : q.filters) {
    require(f.variable, "FILTER");
    if (f.operand.is_variable()) require(f.operand.value, "FILTER");
  }
  if (q.order_by) {
    require(q.order_by->variable, "ORDER BY");
    if (q.count) {
      throw Error(ErrorCode::kUnsupportedFeature,
                  "unsupported SPARQL construct: ORDER BY with COUNT");
    }
  }
  if (q.limit && *q.limit < 1) {
    throw SyntaxError(position, "LIMIT must be at least 1");
  }
}

SparqlQuery ParseQuery(std::string_view text) {
  return Parser(text, false).Parse().query;
}

PrefixParse ParseQueryPrefix(std::string_view text) {
  return Parser(text, true).Parse();
}

}  // namespace sparql2q
