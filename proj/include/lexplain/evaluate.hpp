#pragma once

// Indicator detection over composed explanations, ingestion of manual quality
// annotations, and the ratio tables built from both.

#include <algorithm>
#include <array>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "lexplain/corpus.hpp"
#include "lexplain/error.hpp"
#include "lexplain/explain.hpp"

namespace lexplain {

enum class Indicator : std::uint8_t {
  synonym,
  j_modifier,
  subject,
  object,
  hypernym,
  hyponym,
  meronym,
  holonym,
  a_modifier,
  such_as,
  troponym,
  opposite,
  pp,
  infrequent,
  data_issues,
};

inline constexpr std::array<Indicator, 15> kIndicators{
    Indicator::synonym,   Indicator::j_modifier, Indicator::subject,  Indicator::object,
    Indicator::hypernym,  Indicator::hyponym,    Indicator::meronym,  Indicator::holonym,
    Indicator::a_modifier, Indicator::such_as,   Indicator::troponym, Indicator::opposite,
    Indicator::pp,        Indicator::infrequent, Indicator::data_issues};

inline std::string_view to_string(Indicator i) {
  static constexpr std::array<std::string_view, 15> names{
      "synonym",  "j_modifier", "subject",  "object", "hypernym",   "hyponym",
      "meronym",  "holonym",    "a_modifier", "such_as", "troponym", "opposite",
      "pp",       "infrequent", "data_issues"};
  return names[static_cast<std::size_t>(i)];
}

// Which indicators are meaningful for a POS; the rest are never reported.
inline bool applicable(Indicator i, CoarsePos pos) {
  using I = Indicator;
  if (i == I::synonym || i == I::infrequent || i == I::data_issues)
    return pos == CoarsePos::N || pos == CoarsePos::J || pos == CoarsePos::V;
  switch (pos) {
    case CoarsePos::N:
      return i == I::j_modifier || i == I::subject || i == I::object || i == I::hypernym ||
             i == I::hyponym || i == I::meronym || i == I::holonym;
    case CoarsePos::J:
      return i == I::a_modifier || i == I::such_as || i == I::opposite;
    case CoarsePos::V:
      return i == I::subject || i == I::object || i == I::a_modifier || i == I::troponym || i == I::pp;
    default:
      return false;
  }
}

struct IndicatorSet {
  LemmaPos headword;
  std::string language;
  std::map<Indicator, bool> flags;  // only applicable indicators with a known value

  std::optional<bool> flag(Indicator i) const {
    auto it = flags.find(i);
    if (it == flags.end()) return std::nullopt;
    return it->second;
  }

  friend bool operator==(const IndicatorSet&, const IndicatorSet&) = default;
};

enum class Quality : std::uint8_t { good, post_edit, bad };
inline constexpr std::array<Quality, 3> kQualities{Quality::good, Quality::post_edit, Quality::bad};

inline std::string_view to_string(Quality q) {
  switch (q) {
    case Quality::good: return "good";
    case Quality::post_edit: return "post-edit";
    case Quality::bad: return "bad";
  }
  return "?";
}

inline std::optional<Quality> try_parse_quality(std::string_view s) {
  if (s == "good") return Quality::good;
  if (s == "post-edit") return Quality::post_edit;
  if (s == "bad") return Quality::bad;
  return std::nullopt;
}

struct AnnotationRecord {
  std::string headword;
  CoarsePos pos = CoarsePos::N;
  Quality quality = Quality::good;
  bool data_issues = false;
  std::string notes;
  std::optional<bool> troponym;  // optional sixth column

  friend bool operator==(const AnnotationRecord&, const AnnotationRecord&) = default;
};

namespace detail {

inline std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  while (true) {
    const auto tab = line.find('\t');
    out.push_back(line.substr(0, tab));
    if (tab == std::string_view::npos) break;
    line.remove_prefix(tab + 1);
  }
  return out;
}

inline std::optional<bool> parse_bool(std::string_view s) {
  if (s == "1" || s == "true" || s == "yes") return true;
  if (s == "0" || s == "false" || s == "no") return false;
  return std::nullopt;
}

}  // namespace detail

// TSV with header "headword pos quality data_issues notes" (tab separated),
// optionally followed by a "troponym" column.
inline std::vector<AnnotationRecord> parse_annotations(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  auto fail = [&](const std::string& what) {
    return DataError("annotations line " + std::to_string(lineno) + ": " + what);
  };
  bool has_troponym = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto header = detail::split_tabs(line);
    static constexpr std::array<std::string_view, 5> expected{"headword", "pos", "quality", "data_issues",
                                                              "notes"};
    if (header.size() < expected.size() || !std::equal(expected.begin(), expected.end(), header.begin()))
      throw fail("expected header 'headword<TAB>pos<TAB>quality<TAB>data_issues<TAB>notes'");
    if (header.size() == 6 && header[5] == "troponym") {
      has_troponym = true;
    } else if (header.size() != 5) {
      throw fail("unexpected extra header columns");
    }
    break;
  }
  if (lineno == 0) throw DataError("annotations: empty file");

  std::vector<AnnotationRecord> out;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = detail::split_tabs(line);
    if (f.size() < 4 || f.size() > (has_troponym ? 6u : 5u)) throw fail("wrong number of fields");
    AnnotationRecord r;
    r.headword = std::string(f[0]);
    if (r.headword.empty()) throw fail("empty headword");
    const auto pos = try_parse_coarse_pos(f[1]);
    if (!pos) throw fail("bad pos '" + std::string(f[1]) + "'");
    r.pos = *pos;
    const auto q = try_parse_quality(f[2]);
    if (!q) throw fail("quality must be good, post-edit or bad");
    r.quality = *q;
    const auto di = detail::parse_bool(f[3]);
    if (!di) throw fail("data_issues must be 0/1");
    r.data_issues = *di;
    if (f.size() > 4) r.notes = std::string(f[4]);
    if (f.size() > 5 && !f[5].empty()) {
      r.troponym = detail::parse_bool(f[5]);
      if (!r.troponym) throw fail("troponym must be 0/1");
    }
    out.push_back(std::move(r));
  }
  return out;
}

struct DetectOptions {
  double infrequency_per_million = 5.0;
  std::string language;
};

// Presence flags read off line keys and contributing sources. Troponym and
// data_issues come from the annotation when one is given and stay unknown
// otherwise.
inline IndicatorSet detect_indicators(const Explanation& expl, const Corpus& corpus,
                                      const DetectOptions& options = {},
                                      const AnnotationRecord* annotation = nullptr) {
  using I = Indicator;
  const auto pos = expl.headword.pos;
  std::set<std::string> keys, sources;
  for (const auto& l : expl.lines) {
    keys.insert(l.key);
    sources.insert(l.sources.begin(), l.sources.end());
  }
  if (corpus.freq(Attribute::lemma, expl.headword.lemma) == 0)
    throw DataError("explanation headword '" + expl.headword.lemma + "' does not occur in the corpus");

  bool infrequent = false;
  const double tokens = static_cast<double>(corpus.size());
  for (const auto& l : expl.lines) {
    for (const auto& item : l.items) {
      const auto f = corpus.freq(Attribute::lemma, item);
      if (f == 0)
        throw DataError("explanation item '" + item + "' of '" + expl.headword.lemma +
                        "' does not occur in the corpus");
      if (static_cast<double>(f) * 1e6 < options.infrequency_per_million * tokens) infrequent = true;
    }
  }

  auto has_key = [&](std::string_view k) { return keys.contains(std::string(k)); };
  auto has_source = [&](std::string_view s) { return sources.contains(std::string(s)); };

  std::map<I, bool> values{
      {I::synonym, has_source(kThesaurusSource)},
      {I::j_modifier, has_key("can_be")},
      {I::subject, pos == CoarsePos::V ? has_key("typical_subject") : has_key("can_do")},
      {I::object, pos == CoarsePos::V ? has_key("typical_object") : has_key("done_to")},
      {I::hypernym, has_source("hypernym_of")},
      {I::hyponym, has_source("hyponym_example")},
      {I::meronym, has_source("meronym_have") || has_source("meronym_contain")},
      {I::holonym, has_source("holonym_have")},
      {I::a_modifier, has_key("how")},
      {I::such_as, has_key("such_as")},
      {I::opposite, has_key("opposite")},
      {I::pp, has_key("with_prep")},
      {I::infrequent, infrequent},
  };
  if (annotation) {
    values[I::data_issues] = annotation->data_issues;
    if (annotation->troponym) values[I::troponym] = *annotation->troponym;
  }

  IndicatorSet out{expl.headword, options.language, {}};
  for (const auto& [i, v] : values) {
    if (applicable(i, pos)) out.flags[i] = v;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Ratio tables

struct Ratio {
  std::uint64_t numerator = 0;
  std::uint64_t denominator = 0;

  // 100 * numerator / denominator in hundredths, rounded half up.
  std::uint64_t hundredths() const {
    if (denominator == 0) throw DataError("ratio with zero denominator");
    return (2 * numerator * 10000 + denominator) / (2 * denominator);
  }

  std::string percent() const {
    const auto h = hundredths();
    const auto frac = h % 100;
    return std::to_string(h / 100) + "." + (frac < 10 ? "0" : "") + std::to_string(frac);
  }

  friend bool operator==(const Ratio&, const Ratio&) = default;
};

struct RatioTable {
  struct Row {
    std::string name;
    std::vector<std::optional<Ratio>> cells;  // nullopt renders as "-"
  };

  std::string title;
  std::vector<std::string> columns;
  std::vector<Row> rows;

  const Row* row(std::string_view name) const {
    for (const auto& r : rows) {
      if (r.name == name) return &r;
    }
    return nullptr;
  }

  std::optional<Ratio> cell(std::string_view row_name, std::string_view column) const {
    const auto* r = row(row_name);
    if (!r) return std::nullopt;
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (columns[c] == column) return r->cells[c];
    }
    return std::nullopt;
  }
};

inline constexpr std::array<CoarsePos, 3> kTablePos{CoarsePos::N, CoarsePos::J, CoarsePos::V};

// Indicator rows by POS columns: share of explanations of that POS whose flag is true.
inline RatioTable aggregate_indicators(const std::vector<IndicatorSet>& sets) {
  RatioTable t;
  t.title = "Indicators";
  if (sets.empty()) return t;
  for (const auto& s : sets) {
    if (s.language != sets.front().language)
      throw DataError("indicator sets mix languages '" + sets.front().language + "' and '" + s.language + "'");
  }
  if (!sets.front().language.empty()) t.title += " (" + sets.front().language + ")";
  std::map<CoarsePos, std::uint64_t> per_pos;
  std::map<std::pair<Indicator, CoarsePos>, std::uint64_t> hits;
  for (const auto& s : sets) {
    ++per_pos[s.headword.pos];
    for (const auto& [i, v] : s.flags) {
      if (v) ++hits[{i, s.headword.pos}];
    }
  }
  for (auto p : kTablePos) t.columns.emplace_back(to_string(p));
  for (auto i : kIndicators) {
    RatioTable::Row row{std::string(to_string(i)), {}};
    for (auto p : kTablePos) {
      const auto den = per_pos[p];
      if (den == 0 || !applicable(i, p)) {
        row.cells.emplace_back();
      } else {
        row.cells.push_back(Ratio{hits[{i, p}], den});
      }
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

// POS rows by good / post-edit / bad columns.
inline RatioTable aggregate_quality(const std::vector<AnnotationRecord>& records) {
  RatioTable t;
  t.title = "Quality";
  for (auto q : kQualities) t.columns.emplace_back(to_string(q));
  std::set<std::pair<std::string, CoarsePos>> seen;
  std::map<CoarsePos, std::array<std::uint64_t, 3>> counts;
  for (const auto& r : records) {
    if (!seen.emplace(r.headword, r.pos).second)
      throw DataError("duplicate annotation for " + r.headword + "/" + std::string(to_string(r.pos)));
    ++counts[r.pos][static_cast<std::size_t>(r.quality)];
  }
  for (const auto& [pos, c] : counts) {
    const auto den = c[0] + c[1] + c[2];
    RatioTable::Row row{std::string(to_string(pos)), {}};
    for (auto n : c) row.cells.push_back(Ratio{n, den});
    t.rows.push_back(std::move(row));
  }
  return t;
}

// Share of headwords for which an explanation with data was produced.
inline Ratio coverage_rate(const std::vector<bool>& produced) {
  if (produced.empty()) throw DataError("coverage: empty headword list");
  return Ratio{static_cast<std::uint64_t>(std::count(produced.begin(), produced.end(), true)), produced.size()};
}

// ---------------------------------------------------------------------------
// Report output

inline nlohmann::ordered_json to_json(const Ratio& r) {
  nlohmann::ordered_json j;
  j["percent"] = r.percent();
  j["numerator"] = r.numerator;
  j["denominator"] = r.denominator;
  return j;
}

inline nlohmann::ordered_json to_json(const RatioTable& t) {
  nlohmann::ordered_json j;
  j["title"] = t.title;
  j["columns"] = t.columns;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : t.rows) {
    nlohmann::ordered_json row;
    row["name"] = r.name;
    nlohmann::ordered_json cells = nlohmann::ordered_json::object();
    for (std::size_t c = 0; c < t.columns.size(); ++c)
      cells[t.columns[c]] = r.cells[c] ? to_json(*r.cells[c]) : nlohmann::ordered_json(nullptr);
    row["cells"] = std::move(cells);
    j["rows"].push_back(std::move(row));
  }
  return j;
}

inline nlohmann::ordered_json to_json(const IndicatorSet& s) {
  nlohmann::ordered_json j;
  j["headword"] = s.headword.lemma;
  j["pos"] = std::string(to_string(s.headword.pos));
  nlohmann::ordered_json flags = nlohmann::ordered_json::object();
  for (const auto& [i, v] : s.flags) flags[std::string(to_string(i))] = v;
  j["flags"] = std::move(flags);
  return j;
}

// Aligned plain-text table: percentages with a "%" sign, "-" where a cell does not apply.
inline std::string render_table_text(const RatioTable& t) {
  std::size_t name_w = 0;
  for (const auto& r : t.rows) name_w = std::max(name_w, r.name.size());
  std::vector<std::size_t> col_w;
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    std::size_t w = std::max<std::size_t>(t.columns[c].size(), 1);
    for (const auto& r : t.rows) w = std::max(w, r.cells[c] ? r.cells[c]->percent().size() + 1 : 1);
    col_w.push_back(w);
  }
  auto pad_left = [](const std::string& s, std::size_t w) { return std::string(w - std::min(w, s.size()), ' ') + s; };
  auto pad_right = [](const std::string& s, std::size_t w) { return s + std::string(w - std::min(w, s.size()), ' '); };

  std::ostringstream out;
  out << t.title << '\n';
  out << pad_right("", name_w);
  for (std::size_t c = 0; c < t.columns.size(); ++c) out << "  " << pad_left(t.columns[c], col_w[c]);
  out << '\n';
  for (const auto& r : t.rows) {
    out << pad_right(r.name, name_w);
    for (std::size_t c = 0; c < t.columns.size(); ++c)
      out << "  " << pad_left(r.cells[c] ? r.cells[c]->percent() + "%" : "-", col_w[c]);
    out << '\n';
  }
  return out.str();
}

}  // namespace lexplain
