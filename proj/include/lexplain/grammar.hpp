#pragma once

// Sketch grammars: named, directed relations, each a list of CQL queries in
// which label 1 marks the headword and label 2 the collocate.
//
//   # comment
//   =relation_name
//   *HEADPOS N
//   *COLLPOS J
//   *GLOSS can_be
//   2:[tag="JJ.*"] 1:[tag="NN.*"]

#include <cstddef>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "lexplain/corpus.hpp"
#include "lexplain/cql.hpp"
#include "lexplain/error.hpp"

namespace lexplain {

inline constexpr int kHeadLabel = 1;
inline constexpr int kCollocateLabel = 2;

struct Relation {
  std::string name;
  CoarsePos head_pos = CoarsePos::other;
  CoarsePos collocate_pos = CoarsePos::other;
  std::vector<cql::Query> queries;
  std::string gloss_key;

  friend bool operator==(const Relation&, const Relation&) = default;
};

struct Grammar {
  std::vector<Relation> relations;

  const Relation* find(std::string_view name) const {
    for (const auto& r : relations) {
      if (r.name == name) return &r;
    }
    return nullptr;
  }

  friend bool operator==(const Grammar&, const Grammar&) = default;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

// Cuts a '#' comment, ignoring '#' inside double-quoted regexes.
inline std::string_view strip_comment(std::string_view line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted && c == '\\') {
      ++i;
    } else if (c == '"') {
      quoted = !quoted;
    } else if (c == '#' && !quoted) {
      return line.substr(0, i);
    }
  }
  return line;
}

}  // namespace detail

inline Grammar parse_grammar(std::string_view text) {
  Grammar g;
  std::set<std::string, std::less<>> names;
  std::size_t relation_line = 0;
  bool head_set = false;

  auto finish = [&] {
    if (g.relations.empty()) return;
    auto& r = g.relations.back();
    if (!head_set) throw GrammarError(relation_line, r.name, "relation lacks *HEADPOS");
    if (r.queries.empty()) throw GrammarError(relation_line, r.name, "relation has no queries");
    if (r.gloss_key.empty()) r.gloss_key = r.name;
  };

  std::size_t lineno = 0;
  std::size_t at = 0;
  while (at <= text.size()) {
    auto nl = text.find('\n', at);
    if (nl == std::string_view::npos) nl = text.size();
    const auto line = detail::trim(detail::strip_comment(text.substr(at, nl - at)));
    at = nl + 1;
    ++lineno;
    if (line.empty()) continue;

    if (line.front() == '=') {
      finish();
      const auto name = detail::trim(line.substr(1));
      if (name.empty()) throw GrammarError(lineno, "", "missing relation name after '='");
      if (!names.emplace(name).second)
        throw GrammarError(lineno, std::string(name), "duplicate relation name");
      relation_line = lineno;
      head_set = false;
      Relation r;
      r.name = std::string(name);
      g.relations.push_back(std::move(r));
      continue;
    }
    if (g.relations.empty()) throw GrammarError(lineno, "", "content before the first '=relation'");
    auto& rel = g.relations.back();

    if (line.front() == '*') {
      const auto body = line.substr(1);
      const auto sp = body.find_first_of(" \t");
      const auto key = body.substr(0, sp);
      const auto value = sp == std::string_view::npos ? std::string_view{} : detail::trim(body.substr(sp));
      if (value.empty()) throw GrammarError(lineno, rel.name, "directive *" + std::string(key) + " needs a value");
      if (key == "HEADPOS" || key == "COLLPOS") {
        const auto pos = try_parse_coarse_pos(value);
        if (!pos) throw GrammarError(lineno, rel.name, "unknown POS '" + std::string(value) + "'");
        (key == "HEADPOS" ? rel.head_pos : rel.collocate_pos) = *pos;
        head_set = head_set || key == "HEADPOS";
      } else if (key == "GLOSS") {
        rel.gloss_key = std::string(value);
      } else {
        throw GrammarError(lineno, rel.name, "unknown directive *" + std::string(key));
      }
      continue;
    }

    cql::Query q;
    try {
      q = cql::parse_query(line);
    } catch (const QueryError& e) {
      throw GrammarError(lineno, rel.name, e.what());
    }
    for (int label : {kHeadLabel, kCollocateLabel}) {
      if (!q.element_of(label))
        throw GrammarError(lineno, rel.name, "query lacks label " + std::to_string(label));
    }
    rel.queries.push_back(std::move(q));
  }
  finish();
  return g;
}

inline std::string to_string(const Grammar& g) {
  std::ostringstream out;
  for (const auto& r : g.relations) {
    out << '=' << r.name << '\n'
        << "*HEADPOS " << to_string(r.head_pos) << '\n'
        << "*COLLPOS " << to_string(r.collocate_pos) << '\n'
        << "*GLOSS " << r.gloss_key << '\n';
    for (const auto& q : r.queries) out << cql::to_string(q) << '\n';
    out << '\n';
  }
  return out.str();
}

// One warning per (relation, tag regex) that matches no tag in the corpus.
inline std::vector<std::string> validate_against(const Grammar& g, const Corpus& corpus) {
  std::vector<std::string> warnings;
  const auto& tags = corpus.lexicon(Attribute::tag).strings();
  for (const auto& r : g.relations) {
    std::set<std::string> seen;
    for (const auto& q : r.queries) {
      for (const auto* atom : cql::atoms(q)) {
        if (atom->attr != Attribute::tag || !seen.insert(atom->regex).second) continue;
        const std::regex re(atom->regex, std::regex::ECMAScript);
        bool any = false;
        for (const auto& t : tags) {
          if (std::regex_match(t, re)) {
            any = true;
            break;
          }
        }
        if (!any)
          warnings.push_back("relation '" + r.name + "': tag pattern \"" + atom->regex +
                             "\" matches no tag in the corpus");
      }
    }
  }
  return warnings;
}

}  // namespace lexplain
