#pragma once

// Templated explanations. A schema lists, per POS, the lines of an
// explanation in display order; each line names its gloss pattern and the
// sources whose top-k results are merged into it.
//
// Schema file:
//
//   # comment
//   POS N
//   can_be | adj_modifier | %(head) can be %(items)
//   can_have | meronym_have meronym_contain | %(head) can have/contain (a/an) %(items)
//
// Source tokens: `rel` (collocates of the head in rel), `~rel` (heads that
// have the headword as collocate in rel), `@thesaurus` (distributional
// neighbours). Any token may carry an explicit quota as `:k`; otherwise the
// relation or thesaurus default applies.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "lexplain/error.hpp"
#include "lexplain/grammar.hpp"
#include "lexplain/sketches.hpp"
#include "lexplain/thesaurus.hpp"

namespace lexplain {

inline constexpr int kExplanationFormatVersion = 1;
inline constexpr std::string_view kThesaurusSource = "thesaurus";

struct SourceSpec {
  enum class Kind { relation, inverse_relation, thesaurus };

  Kind kind = Kind::relation;
  std::string relation;  // empty for the thesaurus
  std::optional<std::size_t> top_k;

  // Name recorded in ExplanationLine::sources.
  std::string name() const {
    switch (kind) {
      case Kind::relation: return relation;
      case Kind::inverse_relation: return "~" + relation;
      case Kind::thesaurus: return std::string(kThesaurusSource);
    }
    return relation;
  }

  friend bool operator==(const SourceSpec&, const SourceSpec&) = default;
};

struct LineTemplate {
  std::string key;
  std::vector<SourceSpec> sources;
  std::string pattern;

  friend bool operator==(const LineTemplate&, const LineTemplate&) = default;
};

struct Schema {
  CoarsePos pos = CoarsePos::N;
  std::vector<LineTemplate> lines;

  friend bool operator==(const Schema&, const Schema&) = default;
};

struct Quotas {
  std::size_t relation_top_k = 3;
  std::size_t thesaurus_top_k = 5;
};

struct ExplanationLine {
  std::string key;
  std::string pattern;
  std::vector<std::string> items;
  std::vector<std::string> sources;

  friend bool operator==(const ExplanationLine&, const ExplanationLine&) = default;
};

struct Explanation {
  LemmaPos headword;
  std::vector<ExplanationLine> lines;

  friend bool operator==(const Explanation&, const Explanation&) = default;
};

// ---------------------------------------------------------------------------
// Schemas

inline SourceSpec parse_source(std::string_view token) {
  SourceSpec s;
  std::string_view name = token;
  if (auto colon = token.rfind(':'); colon != std::string_view::npos) {
    const auto k = token.substr(colon + 1);
    std::size_t v = 0;
    if (k.empty() || k.find_first_not_of("0123456789") != std::string_view::npos || k.size() > 6 ||
        (v = std::stoul(std::string(k))) == 0)
      throw DataError("bad quota in source '" + std::string(token) + "'");
    s.top_k = v;
    name = token.substr(0, colon);
  }
  if (name == "@thesaurus") {
    s.kind = SourceSpec::Kind::thesaurus;
  } else if (!name.empty() && name.front() == '~') {
    s.kind = SourceSpec::Kind::inverse_relation;
    s.relation = std::string(name.substr(1));
  } else {
    s.relation = std::string(name);
  }
  if (s.kind != SourceSpec::Kind::thesaurus && (s.relation.empty() || s.relation.front() == '@'))
    throw DataError("bad source '" + std::string(token) + "'");
  return s;
}

inline std::string to_string(const SourceSpec& s) {
  std::string out = s.kind == SourceSpec::Kind::thesaurus ? "@thesaurus" : s.name();
  if (s.top_k) out += ":" + std::to_string(*s.top_k);
  return out;
}

inline Schema parse_schema(std::string_view text) {
  Schema schema;
  bool have_pos = false;
  std::size_t lineno = 0, at = 0;
  auto fail = [&](const std::string& what) -> DataError {
    return DataError("schema line " + std::to_string(lineno) + ": " + what);
  };
  while (at <= text.size()) {
    auto nl = text.find('\n', at);
    if (nl == std::string_view::npos) nl = text.size();
    const auto line = detail::trim(text.substr(at, nl - at));
    at = nl + 1;
    ++lineno;
    if (line.empty() || line.front() == '#') continue;
    if (line.starts_with("POS ") || line.starts_with("POS\t")) {
      const auto pos = try_parse_coarse_pos(detail::trim(line.substr(4)));
      if (!pos) throw fail("unknown POS");
      schema.pos = *pos;
      have_pos = true;
      continue;
    }
    const auto bar1 = line.find('|');
    const auto bar2 = bar1 == std::string_view::npos ? bar1 : line.find('|', bar1 + 1);
    if (bar2 == std::string_view::npos) throw fail("expected 'key | sources | pattern'");
    LineTemplate lt;
    lt.key = std::string(detail::trim(line.substr(0, bar1)));
    const auto sources = detail::trim(line.substr(bar1 + 1, bar2 - bar1 - 1));
    lt.pattern = std::string(detail::trim(line.substr(bar2 + 1)));
    if (lt.key.empty()) throw fail("empty line key");
    if (lt.pattern.find("%(items)") == std::string::npos) throw fail("pattern lacks %(items)");
    std::istringstream tokens{std::string(sources)};
    for (std::string tok; tokens >> tok;) {
      try {
        lt.sources.push_back(parse_source(tok));
      } catch (const DataError& e) {
        throw fail(e.what());
      }
    }
    if (lt.sources.empty()) throw fail("line '" + lt.key + "' has no sources");
    for (const auto& other : schema.lines) {
      if (other.key == lt.key) throw fail("duplicate line key '" + lt.key + "'");
    }
    schema.lines.push_back(std::move(lt));
  }
  if (!have_pos) throw DataError("schema lacks a POS line");
  return schema;
}

inline std::string to_string(const Schema& schema) {
  std::string out = "POS " + std::string(to_string(schema.pos)) + "\n";
  for (const auto& l : schema.lines) {
    out += l.key + " |";
    for (const auto& s : l.sources) out += " " + to_string(s);
    out += " | " + l.pattern + "\n";
  }
  return out;
}

// Built-in schemas; the shipped data/templates files carry the same text.
inline constexpr std::string_view kNounSchemaText =
    "POS N\n"
    "similar_meaning | coordination hypernym_of @thesaurus | similar meaning as a/an %(head) can have (a/an) %(items)\n"
    "can_be | adj_modifier | %(head) can be %(items)\n"
    "for_example | hyponym_example | for example (a/an) %(items)\n"
    "can_have | meronym_have meronym_contain | %(head) can have/contain (a/an) %(items)\n"
    "contained_in | holonym_have | (a/an) %(items) can have/contain (a/an) %(head)\n"
    "can_do | subject_verb | %(head) can %(items)\n"
    "done_to | object_verb | sth/sb can %(items) a/an %(head)\n"
    "of_noun | noun_of | %(head) of (a/an) %(items)\n"
    "with_noun | noun_with | %(head) with (a/an) %(items)\n";

inline constexpr std::string_view kAdjectiveSchemaText =
    "POS J\n"
    "similar_meaning | @thesaurus | similar meaning as %(head): %(items)\n"
    "opposite | opposite_not | not %(items)\n"
    "such_as | as_noun | %(head) as (a/an) %(items)\n"
    "describes | ~adj_modifier | (a/an) %(items) can be %(head)\n";

inline constexpr std::string_view kVerbSchemaText =
    "POS V\n"
    "similar_meaning | @thesaurus | similar meaning as %(head): %(items)\n"
    "typical_subject | ~subject_verb | (a/an) %(items) can %(head)\n"
    "typical_object | ~object_verb | sth/sb can %(head) a/an %(items)\n"
    "how | adv_modifier | sth/sb can %(head) %(items)\n"
    "with_prep | verb_prep | sth/sb can %(head) %(items) sth/sb\n";

inline Schema default_schema(CoarsePos pos) {
  switch (pos) {
    case CoarsePos::N: return parse_schema(kNounSchemaText);
    case CoarsePos::J: return parse_schema(kAdjectiveSchemaText);
    case CoarsePos::V: return parse_schema(kVerbSchemaText);
    default: throw UsageError("no explanation schema for POS " + std::string(to_string(pos)));
  }
}

// ---------------------------------------------------------------------------
// Composition

// Candidates a source offers for head, already cut to its quota.
inline std::vector<std::string> source_candidates(const SourceSpec& src, const LemmaPos& head,
                                                  const SketchIndex& index, const Thesaurus& thes,
                                                  const Quotas& quotas) {
  std::vector<std::string> out;
  switch (src.kind) {
    case SourceSpec::Kind::relation:
      for (const auto& t : word_sketch(index, head, src.relation, src.top_k.value_or(quotas.relation_top_k)))
        out.push_back(t.collocate.lemma);
      break;
    case SourceSpec::Kind::inverse_relation:
      for (const auto& t : inverse_word_sketch(index, head, src.relation, src.top_k.value_or(quotas.relation_top_k)))
        out.push_back(t.head.lemma);
      break;
    case SourceSpec::Kind::thesaurus:
      for (const auto& r : thes.similar(head, src.top_k.value_or(quotas.thesaurus_top_k)))
        out.push_back(r.neighbor.lemma);
      break;
  }
  return out;
}

// Builds the explanation of head following schema. Returns nullopt ("no
// data") when the head takes part in no sketch triple at all; an
// Explanation with zero lines is possible when only unused relations have data.
inline std::optional<Explanation> compose(const LemmaPos& head, const SketchIndex& index,
                                          const Thesaurus& thes, const Schema& schema,
                                          const Quotas& quotas = {}) {
  if (head.pos != schema.pos)
    throw UsageError("schema for POS " + std::string(to_string(schema.pos)) + " cannot explain " +
                     to_string(head));
  for (const auto& line : schema.lines) {
    for (const auto& src : line.sources) {
      if (src.kind != SourceSpec::Kind::thesaurus && !index.relation(src.relation))
        throw UsageError("schema line '" + line.key + "' refers to relation '" + src.relation +
                         "' which the grammar does not define");
    }
  }
  if (!index.has_data(head)) return std::nullopt;

  Explanation expl;
  expl.headword = head;
  for (const auto& lt : schema.lines) {
    ExplanationLine line{lt.key, lt.pattern, {}, {}};
    for (const auto& src : lt.sources) {
      bool contributed = false;
      for (auto& lemma : source_candidates(src, head, index, thes, quotas)) {
        if (lemma == head.lemma) continue;
        if (std::find(line.items.begin(), line.items.end(), lemma) != line.items.end()) continue;
        line.items.push_back(std::move(lemma));
        contributed = true;
      }
      if (contributed) line.sources.push_back(src.name());
    }
    if (!line.items.empty()) expl.lines.push_back(std::move(line));
  }
  return expl;
}

inline std::optional<Explanation> compose_noun(const LemmaPos& head, const SketchIndex& index,
                                               const Thesaurus& thes, const Quotas& quotas = {}) {
  return compose(head, index, thes, default_schema(CoarsePos::N), quotas);
}

inline std::optional<Explanation> compose_adjective(const LemmaPos& head, const SketchIndex& index,
                                                    const Thesaurus& thes, const Quotas& quotas = {}) {
  return compose(head, index, thes, default_schema(CoarsePos::J), quotas);
}

inline std::optional<Explanation> compose_verb(const LemmaPos& head, const SketchIndex& index,
                                               const Thesaurus& thes, const Quotas& quotas = {}) {
  return compose(head, index, thes, default_schema(CoarsePos::V), quotas);
}

// ---------------------------------------------------------------------------
// Rendering

inline constexpr std::string_view kNoDataLine = "no data";

inline std::string fill_pattern(const ExplanationLine& line, std::string_view head) {
  std::string items;
  for (const auto& it : line.items) {
    if (!items.empty()) items += ", ";
    items += it;
  }
  std::string out;
  std::string_view p = line.pattern;
  while (!p.empty()) {
    if (p.starts_with("%(head)")) {
      out += head;
      p.remove_prefix(7);
    } else if (p.starts_with("%(items)")) {
      out += items;
      p.remove_prefix(8);
    } else {
      out += p.front();
      p.remove_prefix(1);
    }
  }
  return out;
}

// Headword line, then one numbered line per explanation line.
inline std::string render_text(const Explanation& expl) {
  std::string out = expl.headword.lemma + ":\n";
  if (expl.lines.empty()) {
    out += kNoDataLine;
    out += '\n';
    return out;
  }
  for (std::size_t i = 0; i < expl.lines.size(); ++i)
    out += std::to_string(i + 1) + ". " + fill_pattern(expl.lines[i], expl.headword.lemma) + "\n";
  return out;
}

inline nlohmann::ordered_json to_json(const Explanation& expl) {
  nlohmann::ordered_json doc;
  doc["format_version"] = kExplanationFormatVersion;
  doc["headword"] = expl.headword.lemma;
  doc["pos"] = std::string(to_string(expl.headword.pos));
  doc["lines"] = nlohmann::ordered_json::array();
  for (const auto& l : expl.lines) {
    nlohmann::ordered_json line;
    line["key"] = l.key;
    line["pattern"] = l.pattern;
    line["items"] = l.items;
    line["sources"] = l.sources;
    doc["lines"].push_back(std::move(line));
  }
  return doc;
}

inline std::string render_structured(const Explanation& expl) { return to_json(expl).dump(2) + "\n"; }

inline Explanation explanation_from_json(const nlohmann::json& doc) {
  try {
    if (doc.at("format_version").get<int>() != kExplanationFormatVersion)
      throw DataError("unsupported explanation format_version");
    Explanation e;
    e.headword.lemma = doc.at("headword").get<std::string>();
    const auto pos = try_parse_coarse_pos(doc.at("pos").get<std::string>());
    if (!pos) throw DataError("explanation: bad pos");
    e.headword.pos = *pos;
    for (const auto& l : doc.at("lines")) {
      e.lines.push_back({l.at("key").get<std::string>(), l.at("pattern").get<std::string>(),
                         l.at("items").get<std::vector<std::string>>(),
                         l.at("sources").get<std::vector<std::string>>()});
    }
    return e;
  } catch (const nlohmann::json::exception& ex) {
    throw DataError(std::string("explanation: ") + ex.what());
  }
}

inline Explanation parse_structured(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& ex) {
    throw DataError(std::string("explanation: ") + ex.what());
  }
  return explanation_from_json(doc);
}

}  // namespace lexplain
