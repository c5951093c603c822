#pragma once

// A corpus query language subset: sequences of bracketed token tests with
// optional numeric labels and bounded quantifiers.
//
//   query   := element+
//   element := (N ":")? "[" expr? "]" quant?
//   expr    := atom | "!" expr | expr "&" expr | expr "|" expr | "(" expr ")"
//   atom    := attr "=" "\"" regex "\""      attr in {word, lemma, tag}
//   quant   := "?" | "{" m "," n "}"         n <= 9
//
// "!" binds tighter than "&", which binds tighter than "|". Regexes are
// ECMAScript and always match the whole attribute value.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <optional>
#include <regex>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lexplain/corpus.hpp"
#include "lexplain/error.hpp"
#include "lexplain/parallel.hpp"

namespace lexplain::cql {

inline constexpr unsigned kMaxRepeat = 9;

struct Expr {
  enum class Kind { atom, negation, conjunction, disjunction };

  Kind kind = Kind::atom;
  Attribute attr = Attribute::word;  // atom only
  std::string regex;                 // atom only
  std::vector<Expr> operands;        // 1 for negation, 2 for binary

  static Expr atom(Attribute a, std::string re) {
    Expr e;
    e.attr = a;
    e.regex = std::move(re);
    return e;
  }
  static Expr negation(Expr x) {
    Expr e;
    e.kind = Kind::negation;
    e.operands.push_back(std::move(x));
    return e;
  }
  static Expr binary(Kind k, Expr l, Expr r) {
    Expr e;
    e.kind = k;
    e.operands.push_back(std::move(l));
    e.operands.push_back(std::move(r));
    return e;
  }

  friend bool operator==(const Expr&, const Expr&) = default;
};

struct Quantifier {
  unsigned min = 1;
  unsigned max = 1;

  bool exactly_one() const { return min == 1 && max == 1; }
  friend bool operator==(const Quantifier&, const Quantifier&) = default;
};

struct Element {
  std::optional<int> label;
  std::optional<Expr> test;  // empty: any token
  Quantifier quant;

  friend bool operator==(const Element&, const Element&) = default;
};

struct Query {
  std::vector<Element> elements;

  // Index of the element carrying `label`, if any.
  std::optional<std::size_t> element_of(int label) const {
    for (std::size_t i = 0; i < elements.size(); ++i) {
      if (elements[i].label == label) return i;
    }
    return std::nullopt;
  }

  friend bool operator==(const Query&, const Query&) = default;
};

struct Match {
  Position start = 0;
  Position end = 0;                                // exclusive
  std::vector<std::pair<int, Position>> bindings;  // sorted by label

  std::optional<Position> binding(int label) const {
    for (const auto& [l, p] : bindings) {
      if (l == label) return p;
    }
    return std::nullopt;
  }

  friend bool operator==(const Match&, const Match&) = default;
};

// Regex without metacharacters: matches exactly its own text.
inline bool is_literal_regex(std::string_view re) {
  return re.find_first_of(".^$|?*+()[]{}\\") == std::string_view::npos;
}

namespace detail {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Query parse() {
    Query q;
    skip_ws();
    if (at_end()) fail("empty query");
    while (!at_end()) {
      q.elements.push_back(element(q));
      skip_ws();
    }
    return q;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw QueryError(pos_, what); }
  [[noreturn]] void fail_at(std::size_t at, const std::string& what) const {
    throw QueryError(at, what);
  }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }
  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  void expect(char c) {
    skip_ws();
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  unsigned number() {
    skip_ws();
    const auto begin = pos_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    if (begin == pos_) fail("expected a number");
    if (pos_ - begin > 6) fail_at(begin, "number too large");
    return static_cast<unsigned>(std::stoul(std::string(text_.substr(begin, pos_ - begin))));
  }

  Element element(const Query& so_far) {
    Element e;
    std::size_t label_at = 0;
    if (std::isdigit(static_cast<unsigned char>(peek()))) {
      label_at = pos_;
      const auto n = number();
      if (n == 0) fail_at(label_at, "labels start at 1");
      expect(':');
      if (so_far.element_of(static_cast<int>(n))) fail_at(label_at, "duplicate label " + std::to_string(n));
      e.label = static_cast<int>(n);
    }
    expect('[');
    skip_ws();
    if (peek() != ']') e.test = disjunction();
    expect(']');
    e.quant = quantifier();
    if (e.label && !e.quant.exactly_one())
      fail_at(label_at, "label " + std::to_string(*e.label) + " on a quantified element");
    return e;
  }

  Quantifier quantifier() {
    if (peek() == '?') {
      ++pos_;
      return {0, 1};
    }
    if (peek() == '*' || peek() == '+') fail("unbounded quantifier; use {m,n} with n <= 9");
    if (peek() != '{') return {};
    const auto at = pos_;
    ++pos_;
    Quantifier q;
    q.min = number();
    expect(',');
    q.max = number();
    expect('}');
    if (q.min > q.max) fail_at(at, "repeat minimum exceeds maximum");
    if (q.max == 0) fail_at(at, "repeat maximum must be at least 1");
    if (q.max > kMaxRepeat) fail_at(at, "repeat maximum exceeds " + std::to_string(kMaxRepeat));
    return q;
  }

  Expr disjunction() {
    Expr left = conjunction();
    for (skip_ws(); peek() == '|'; skip_ws()) {
      ++pos_;
      left = Expr::binary(Expr::Kind::disjunction, std::move(left), conjunction());
    }
    return left;
  }

  Expr conjunction() {
    Expr left = unary();
    for (skip_ws(); peek() == '&'; skip_ws()) {
      ++pos_;
      left = Expr::binary(Expr::Kind::conjunction, std::move(left), unary());
    }
    return left;
  }

  Expr unary() {
    skip_ws();
    if (peek() == '!') {
      ++pos_;
      return Expr::negation(unary());
    }
    if (peek() == '(') {
      ++pos_;
      Expr inner = disjunction();
      expect(')');
      return inner;
    }
    return atom();
  }

  Expr atom() {
    skip_ws();
    const auto begin = pos_;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) ++pos_;
    if (begin == pos_) fail("expected an attribute test");
    const auto name = text_.substr(begin, pos_ - begin);
    const auto attr = try_parse_attribute(name);
    if (!attr) fail_at(begin, "unknown attribute '" + std::string(name) + "'");
    expect('=');
    skip_ws();
    const auto str_at = pos_;
    if (peek() != '"') fail("expected '\"'");
    ++pos_;
    std::string re;
    while (true) {
      if (at_end()) fail_at(str_at, "unterminated string");
      const char c = text_[pos_++];
      if (c == '"') break;
      if (c == '\\') {
        if (at_end()) fail_at(str_at, "unterminated string");
        const char next = text_[pos_++];
        if (next != '"') re.push_back('\\');
        re.push_back(next);
        continue;
      }
      re.push_back(c);
    }
    try {
      std::regex check(re, std::regex::ECMAScript);
    } catch (const std::regex_error& e) {
      fail_at(str_at, "invalid regex \"" + re + "\": " + e.what());
    }
    return Expr::atom(*attr, std::move(re));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

inline void print_expr(std::string& out, const Expr& e, bool top) {
  switch (e.kind) {
    case Expr::Kind::atom:
      out += to_string(e.attr);
      out += "=\"";
      for (char c : e.regex) {
        if (c == '"') out += '\\';
        out += c;
      }
      out += '"';
      return;
    case Expr::Kind::negation: {
      out += '!';
      const auto& x = e.operands.front();
      const bool wrap = x.kind == Expr::Kind::conjunction || x.kind == Expr::Kind::disjunction;
      if (wrap) out += '(';
      print_expr(out, x, true);
      if (wrap) out += ')';
      return;
    }
    case Expr::Kind::conjunction:
    case Expr::Kind::disjunction:
      if (!top) out += '(';
      print_expr(out, e.operands[0], false);
      out += e.kind == Expr::Kind::conjunction ? " & " : " | ";
      print_expr(out, e.operands[1], false);
      if (!top) out += ')';
      return;
  }
}

}  // namespace detail

inline Query parse_query(std::string_view text) { return detail::Parser(text).parse(); }

// Canonical text form; parse_query(to_string(q)) == q.
inline std::string to_string(const Query& q) {
  std::string out;
  for (const auto& e : q.elements) {
    if (!out.empty()) out += ' ';
    if (e.label) out += std::to_string(*e.label) + ":";
    out += '[';
    if (e.test) detail::print_expr(out, *e.test, true);
    out += ']';
    if (e.quant.min == 0 && e.quant.max == 1) {
      out += '?';
    } else if (!e.quant.exactly_one()) {
      out += '{' + std::to_string(e.quant.min) + ',' + std::to_string(e.quant.max) + '}';
    }
  }
  return out;
}

// Every regex atom of the query, in left-to-right order.
inline std::vector<const Expr*> atoms(const Query& q) {
  std::vector<const Expr*> out;
  auto walk = [&](auto&& self, const Expr& e) -> void {
    if (e.kind == Expr::Kind::atom) {
      out.push_back(&e);
      return;
    }
    for (const auto& o : e.operands) self(self, o);
  };
  for (const auto& el : q.elements) {
    if (el.test) walk(walk, *el.test);
  }
  return out;
}

// A Query bound to one corpus: every atom is resolved to an accept table over
// the attribute's lexicon, so per-token tests are id lookups.
class CompiledQuery {
 public:
  CompiledQuery(const Query& query, const Corpus& corpus) : corpus_(&corpus) {
    for (const auto& el : query.elements) {
      CompiledElement ce;
      ce.quant = el.quant;
      ce.label = el.label.value_or(0);
      if (el.test) ce.root = static_cast<int>(compile(*el.test));
      elements_.push_back(ce);
    }
  }

  // Calls sink(const Match&) for each match inside the sentence, in start order.
  template <typename Sink>
  void for_each_match(SentenceRange sentence, Sink&& sink) const {
    std::vector<Position> slot(elements_.size());
    for (Position s = sentence.start; s < sentence.end; ++s) {
      if (auto end = expand(0, s, s, sentence.end, slot)) {
        Match m;
        m.start = s;
        m.end = *end;
        for (std::size_t i = 0; i < elements_.size(); ++i) {
          if (elements_[i].label) m.bindings.emplace_back(elements_[i].label, slot[i]);
        }
        std::sort(m.bindings.begin(), m.bindings.end());
        sink(m);
      }
    }
  }

  bool test(std::size_t element, Position p) const {
    const int root = elements_[element].root;
    return root < 0 || eval(static_cast<std::size_t>(root), p);
  }

 private:
  struct Node {
    Expr::Kind kind = Expr::Kind::atom;
    Attribute attr = Attribute::word;
    std::vector<char> accept;  // indexed by lexicon id
    std::size_t left = 0, right = 0;
  };

  struct CompiledElement {
    Quantifier quant;
    int label = 0;
    int root = -1;
  };

  std::size_t compile(const Expr& e) {
    Node n;
    n.kind = e.kind;
    switch (e.kind) {
      case Expr::Kind::atom: {
        n.attr = e.attr;
        const auto& lex = corpus_->lexicon(e.attr);
        n.accept.assign(lex.size(), 0);
        if (is_literal_regex(e.regex)) {
          if (auto id = lex.find(e.regex)) n.accept[*id] = 1;
        } else {
          const std::regex re(e.regex, std::regex::ECMAScript | std::regex::optimize);
          for (LexId id = 0; id < lex.size(); ++id) n.accept[id] = std::regex_match(lex.str(id), re);
        }
        break;
      }
      case Expr::Kind::negation:
        n.left = compile(e.operands[0]);
        break;
      case Expr::Kind::conjunction:
      case Expr::Kind::disjunction:
        n.left = compile(e.operands[0]);
        n.right = compile(e.operands[1]);
        break;
    }
    nodes_.push_back(std::move(n));
    return nodes_.size() - 1;
  }

  bool eval(std::size_t node, Position p) const {
    const Node& n = nodes_[node];
    switch (n.kind) {
      case Expr::Kind::atom: return n.accept[corpus_->id_at(n.attr, p)] != 0;
      case Expr::Kind::negation: return !eval(n.left, p);
      case Expr::Kind::conjunction: return eval(n.left, p) && eval(n.right, p);
      case Expr::Kind::disjunction: return eval(n.left, p) || eval(n.right, p);
    }
    return false;
  }

  // Greedy with backtracking: each element takes as many tokens as it can,
  // giving them back one at a time when the rest of the query fails.
  std::optional<Position> expand(std::size_t i, Position pos, Position start, Position limit,
                                 std::vector<Position>& slot) const {
    if (i == elements_.size()) {
      if (pos == start) return std::nullopt;  // empty matches are not reported
      return pos;
    }
    const auto& el = elements_[i];
    unsigned avail = 0;
    while (avail < el.quant.max && pos + avail < limit && test(i, pos + avail)) ++avail;
    if (avail < el.quant.min) return std::nullopt;
    slot[i] = pos;
    for (unsigned c = avail + 1; c-- > el.quant.min;) {
      if (auto end = expand(i + 1, pos + c, start, limit, slot)) return end;
    }
    return std::nullopt;
  }

  const Corpus* corpus_;
  std::vector<Node> nodes_;
  std::vector<CompiledElement> elements_;
};

// All matches in corpus order. With jobs > 1 sentences are split across
// threads; output order does not depend on jobs.
inline std::vector<Match> find_matches(const Query& query, const Corpus& corpus, unsigned jobs = 1) {
  const auto& sentences = corpus.sentences();
  std::vector<std::vector<Match>> parts(std::max(1u, jobs));
  const auto used = parallel_chunks(sentences.size(), jobs, [&](std::size_t c, std::size_t b, std::size_t e) {
    const CompiledQuery compiled(query, corpus);
    for (std::size_t s = b; s < e; ++s) {
      compiled.for_each_match(sentences[s], [&](const Match& m) { parts[c].push_back(m); });
    }
  });
  std::vector<Match> out;
  for (std::size_t c = 0; c < used; ++c) {
    out.insert(out.end(), std::make_move_iterator(parts[c].begin()),
               std::make_move_iterator(parts[c].end()));
  }
  return out;
}

}  // namespace lexplain::cql
