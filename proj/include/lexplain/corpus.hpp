#pragma once

// Immutable token store for word/lemma/tag corpora in vertical format, with
// per-attribute lexicons and positional postings, plus the LXPC binary index.

#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <regex>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lexplain/error.hpp"

namespace lexplain {

using Position = std::uint32_t;
using LexId = std::uint32_t;

enum class Attribute : std::uint8_t { word = 0, lemma = 1, tag = 2 };
inline constexpr std::array<Attribute, 3> kAttributes{Attribute::word, Attribute::lemma,
                                                      Attribute::tag};

inline std::string_view to_string(Attribute a) {
  switch (a) {
    case Attribute::word: return "word";
    case Attribute::lemma: return "lemma";
    case Attribute::tag: return "tag";
  }
  return "?";
}

inline std::optional<Attribute> try_parse_attribute(std::string_view name) {
  if (name == "word") return Attribute::word;
  if (name == "lemma") return Attribute::lemma;
  if (name == "tag") return Attribute::tag;
  return std::nullopt;
}

inline Attribute parse_attribute(std::string_view name) {
  if (auto a = try_parse_attribute(name)) return *a;
  throw UsageError("unknown attribute '" + std::string(name) + "' (expected word, lemma or tag)");
}

// Coarse part of speech: noun, adjective, verb, adverb, anything else.
enum class CoarsePos : std::uint8_t { N = 0, J = 1, V = 2, A = 3, other = 4 };

inline std::string_view to_string(CoarsePos p) {
  switch (p) {
    case CoarsePos::N: return "N";
    case CoarsePos::J: return "J";
    case CoarsePos::V: return "V";
    case CoarsePos::A: return "A";
    case CoarsePos::other: return "other";
  }
  return "other";
}

inline std::optional<CoarsePos> try_parse_coarse_pos(std::string_view s) {
  if (s == "N") return CoarsePos::N;
  if (s == "J") return CoarsePos::J;
  if (s == "V") return CoarsePos::V;
  if (s == "A") return CoarsePos::A;
  if (s == "other") return CoarsePos::other;
  return std::nullopt;
}

inline CoarsePos parse_coarse_pos(std::string_view s) {
  if (auto p = try_parse_coarse_pos(s)) return *p;
  throw UsageError("unknown coarse POS '" + std::string(s) + "' (expected N, J, V, A or other)");
}

struct Token {
  std::string word;
  std::string lemma;
  std::string tag;

  friend bool operator==(const Token&, const Token&) = default;
};

struct SentenceRange {
  Position start = 0;
  Position end = 0;  // exclusive

  Position size() const { return end - start; }
  friend bool operator==(const SentenceRange&, const SentenceRange&) = default;
};

// Ordered tag-regex -> coarse POS mapping. Regexes match the whole tag.
class PosMap {
 public:
  struct Entry {
    std::string pattern;
    CoarsePos pos;
  };

  PosMap() = default;
  PosMap(std::initializer_list<Entry> entries) {
    for (const auto& e : entries) add(e.pattern, e.pos);
  }

  // Penn Treebank style defaults.
  static PosMap penn() {
    return {{"NN.*", CoarsePos::N}, {"JJ.*", CoarsePos::J}, {"VB.*", CoarsePos::V},
            {"RB.*", CoarsePos::A}};
  }

  void add(std::string pattern, CoarsePos pos) {
    try {
      compiled_.emplace_back(pattern, std::regex::ECMAScript | std::regex::optimize);
    } catch (const std::regex_error& e) {
      throw UsageError("invalid pos_map regex '" + pattern + "': " + e.what());
    }
    entries_.push_back({std::move(pattern), pos});
  }

  // First matching entry wins; no match gives CoarsePos::other.
  CoarsePos classify(std::string_view tag) const {
    for (std::size_t i = 0; i < compiled_.size(); ++i) {
      if (std::regex_match(tag.begin(), tag.end(), compiled_[i])) return entries_[i].pos;
    }
    return CoarsePos::other;
  }

  const std::vector<Entry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  friend bool operator==(const PosMap& a, const PosMap& b) {
    if (a.entries_.size() != b.entries_.size()) return false;
    for (std::size_t i = 0; i < a.entries_.size(); ++i) {
      if (a.entries_[i].pattern != b.entries_[i].pattern || a.entries_[i].pos != b.entries_[i].pos)
        return false;
    }
    return true;
  }

 private:
  std::vector<Entry> entries_;
  std::vector<std::regex> compiled_;
};

// Dense string <-> id mapping; ids follow first-occurrence order.
class Lexicon {
 public:
  LexId intern(std::string_view s) {
    if (auto it = ids_.find(s); it != ids_.end()) return it->second;
    auto id = static_cast<LexId>(strings_.size());
    strings_.emplace_back(s);
    ids_.emplace(strings_.back(), id);
    return id;
  }

  std::optional<LexId> find(std::string_view s) const {
    if (auto it = ids_.find(s); it != ids_.end()) return it->second;
    return std::nullopt;
  }

  const std::string& str(LexId id) const { return strings_.at(id); }
  std::size_t size() const { return strings_.size(); }
  const std::vector<std::string>& strings() const { return strings_; }

 private:
  std::vector<std::string> strings_;
  std::map<std::string, LexId, std::less<>> ids_;
};

class CorpusBuilder;
class Corpus;
Corpus load_index(std::istream& in);

class Corpus {
 public:
  std::size_t size() const { return attr(Attribute::word).ids.size(); }
  const std::vector<SentenceRange>& sentences() const { return sentences_; }

  Token token(Position p) const {
    return {std::string(value_at(Attribute::word, p)), std::string(value_at(Attribute::lemma, p)),
            std::string(value_at(Attribute::tag, p))};
  }

  const Lexicon& lexicon(Attribute a) const { return attr(a).lexicon; }
  LexId id_at(Attribute a, Position p) const { return attr(a).ids[p]; }
  const std::string& value_at(Attribute a, Position p) const {
    const auto& d = attr(a);
    return d.lexicon.str(d.ids[p]);
  }

  // Strictly increasing positions carrying the given value id.
  std::span<const Position> postings(Attribute a, LexId id) const { return attr(a).postings.at(id); }
  std::span<const Position> postings(Attribute a, std::string_view value) const {
    if (auto id = attr(a).lexicon.find(value)) return postings(a, *id);
    return {};
  }

  std::size_t freq(Attribute a, std::string_view value) const { return postings(a, value).size(); }
  std::size_t freq(std::string_view attr_name, std::string_view value) const {
    return freq(parse_attribute(attr_name), value);
  }

  const PosMap& pos_map() const { return pos_map_; }
  CoarsePos coarse_pos(std::string_view tag) const {
    if (auto id = lexicon(Attribute::tag).find(tag)) return tag_pos_[*id];
    return pos_map_.classify(tag);
  }
  CoarsePos coarse_pos_at(Position p) const { return tag_pos_[id_at(Attribute::tag, p)]; }

 private:
  friend class CorpusBuilder;
  friend Corpus load_index(std::istream& in);

  struct AttributeData {
    Lexicon lexicon;
    std::vector<LexId> ids;
    std::vector<std::vector<Position>> postings;
  };

  const AttributeData& attr(Attribute a) const { return attrs_[static_cast<std::size_t>(a)]; }
  AttributeData& attr(Attribute a) { return attrs_[static_cast<std::size_t>(a)]; }

  void finish_tagset() {
    tag_pos_.clear();
    for (const auto& t : lexicon(Attribute::tag).strings()) tag_pos_.push_back(pos_map_.classify(t));
  }

  std::array<AttributeData, 3> attrs_;
  std::vector<SentenceRange> sentences_;
  PosMap pos_map_;
  std::vector<CoarsePos> tag_pos_;
};

// Single-writer construction of a Corpus. Tokens added outside an explicit
// sentence open an implicit one.
class CorpusBuilder {
 public:
  explicit CorpusBuilder(PosMap pos_map = PosMap::penn()) { corpus_.pos_map_ = std::move(pos_map); }

  void begin_sentence() {
    end_sentence();
    open_ = true;
    start_ = position();
  }

  void end_sentence() {
    if (open_ && position() > start_) corpus_.sentences_.push_back({start_, position()});
    open_ = false;
  }

  void add(std::string_view word, std::string_view lemma, std::string_view tag) {
    if (!open_) begin_sentence();
    const Position p = position();
    push(Attribute::word, word, p);
    push(Attribute::lemma, lemma, p);
    push(Attribute::tag, tag, p);
  }

  void add(const Token& t) { add(t.word, t.lemma, t.tag); }

  void add_sentence(std::span<const Token> tokens) {
    begin_sentence();
    for (const auto& t : tokens) add(t);
    end_sentence();
  }

  Corpus finish() && {
    end_sentence();
    corpus_.finish_tagset();
    return std::move(corpus_);
  }

 private:
  Position position() const { return static_cast<Position>(corpus_.size()); }

  void push(Attribute a, std::string_view value, Position p) {
    auto& d = corpus_.attr(a);
    const LexId id = d.lexicon.intern(value);
    if (id == d.postings.size()) d.postings.emplace_back();
    d.postings[id].push_back(p);
    d.ids.push_back(id);
  }

  Corpus corpus_;
  bool open_ = false;
  Position start_ = 0;
};

// Reads vertical format: one token per line, word<TAB>lemma<TAB>tag.
// "<s>"/"</s>" delimit sentences; "<doc"/"</doc" lines close an implicit
// sentence; every other structural line is ignored. Blank lines are skipped.
inline Corpus ingest_vertical(std::istream& in, PosMap pos_map = PosMap::penn()) {
  CorpusBuilder builder(std::move(pos_map));
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '<') {
      std::string_view s(line);
      if (s == "<s>" || s.starts_with("<s ")) {
        builder.begin_sentence();
      } else if (s == "</s>") {
        builder.end_sentence();
      } else if (s.starts_with("<doc") || s.starts_with("</doc")) {
        builder.end_sentence();
      }
      continue;
    }
    std::array<std::string_view, 3> fields;
    std::size_t n = 0;
    std::string_view rest(line);
    while (true) {
      auto tab = rest.find('\t');
      if (n < 3) fields[n] = rest.substr(0, tab);
      ++n;
      if (tab == std::string_view::npos) break;
      rest.remove_prefix(tab + 1);
    }
    if (n != 3)
      throw IngestError(lineno, "expected 3 tab-separated fields (word, lemma, tag), found " +
                                    std::to_string(n));
    for (std::size_t i = 0; i < 3; ++i) {
      if (fields[i].empty())
        throw IngestError(lineno, "empty " + std::string(to_string(kAttributes[i])) + " field");
    }
    builder.add(fields[0], fields[1], fields[2]);
  }
  return std::move(builder).finish();
}

// ---------------------------------------------------------------------------
// LXPC binary index. All integers little-endian.
//
//   "LXPC" | u8 version
//   u32 token_count
//   u32 sentence_count | sentence_count x (u32 start, u32 end)
//   u32 pos_map_count  | pos_map_count x (u8 coarse_pos, u32 len, bytes)
//   lexicon blocks:  for word, lemma, tag: u32 size | size x (u32 len, bytes)
//   postings blocks: for word, lemma, tag, for each id: u32 n | n x u32 position
// ---------------------------------------------------------------------------

inline constexpr std::array<char, 4> kIndexMagic{'L', 'X', 'P', 'C'};
inline constexpr std::uint8_t kIndexVersion = 1;

namespace detail {

inline void put_u32(std::ostream& out, std::uint32_t v) {
  const char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                     static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
  out.write(b, 4);
}

inline void put_string(std::ostream& out, std::string_view s) {
  put_u32(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

inline std::uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) throw DataError("index truncated");
  return std::uint32_t(b[0]) | (std::uint32_t(b[1]) << 8) | (std::uint32_t(b[2]) << 16) |
         (std::uint32_t(b[3]) << 24);
}

inline std::uint8_t get_u8(std::istream& in) {
  char c;
  if (!in.get(c)) throw DataError("index truncated");
  return static_cast<std::uint8_t>(c);
}

inline std::string get_string(std::istream& in) {
  const auto n = get_u32(in);
  std::string s(n, '\0');
  if (n && !in.read(s.data(), n)) throw DataError("index truncated");
  return s;
}

}  // namespace detail

inline void save_index(const Corpus& corpus, std::ostream& out) {
  using detail::put_u32;
  out.write(kIndexMagic.data(), kIndexMagic.size());
  out.put(static_cast<char>(kIndexVersion));
  put_u32(out, static_cast<std::uint32_t>(corpus.size()));
  put_u32(out, static_cast<std::uint32_t>(corpus.sentences().size()));
  for (const auto& s : corpus.sentences()) {
    put_u32(out, s.start);
    put_u32(out, s.end);
  }
  const auto& pm = corpus.pos_map().entries();
  put_u32(out, static_cast<std::uint32_t>(pm.size()));
  for (const auto& e : pm) {
    out.put(static_cast<char>(e.pos));
    detail::put_string(out, e.pattern);
  }
  for (auto a : kAttributes) {
    const auto& lex = corpus.lexicon(a);
    put_u32(out, static_cast<std::uint32_t>(lex.size()));
    for (const auto& s : lex.strings()) detail::put_string(out, s);
  }
  for (auto a : kAttributes) {
    const auto n = corpus.lexicon(a).size();
    for (LexId id = 0; id < n; ++id) {
      auto p = corpus.postings(a, id);
      put_u32(out, static_cast<std::uint32_t>(p.size()));
      for (auto pos : p) put_u32(out, pos);
    }
  }
  if (!out) throw DataError("failed to write index");
}

inline Corpus load_index(std::istream& in) {
  using detail::get_u32;
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), 4) || magic != kIndexMagic) throw DataError("not an LXPC index file");
  if (const auto v = detail::get_u8(in); v != kIndexVersion)
    throw DataError("unsupported index version " + std::to_string(v));

  Corpus c;
  const auto tokens = get_u32(in);
  const auto nsent = get_u32(in);
  Position expect = 0;
  for (std::uint32_t i = 0; i < nsent; ++i) {
    SentenceRange r{get_u32(in), get_u32(in)};
    if (r.start != expect || r.end <= r.start || r.end > tokens)
      throw DataError("index: sentence ranges are not a partition of the token positions");
    expect = r.end;
    c.sentences_.push_back(r);
  }
  if (expect != tokens) throw DataError("index: sentences do not cover every token");

  const auto npm = get_u32(in);
  for (std::uint32_t i = 0; i < npm; ++i) {
    const auto pos = detail::get_u8(in);
    if (pos > static_cast<std::uint8_t>(CoarsePos::other)) throw DataError("index: bad coarse POS");
    auto pattern = detail::get_string(in);
    c.pos_map_.add(std::move(pattern), static_cast<CoarsePos>(pos));
  }
  for (auto a : kAttributes) {
    const auto n = get_u32(in);
    auto& d = c.attr(a);
    for (std::uint32_t i = 0; i < n; ++i) {
      auto s = detail::get_string(in);
      if (d.lexicon.intern(s) != i) throw DataError("index: duplicate lexicon entry '" + s + "'");
    }
  }
  for (auto a : kAttributes) {
    auto& d = c.attr(a);
    constexpr LexId unset = ~LexId{0};
    d.ids.assign(tokens, unset);
    d.postings.resize(d.lexicon.size());
    for (LexId id = 0; id < d.lexicon.size(); ++id) {
      const auto n = get_u32(in);
      auto& list = d.postings[id];
      list.reserve(n);
      for (std::uint32_t k = 0; k < n; ++k) {
        const auto p = get_u32(in);
        if (p >= tokens || d.ids[p] != unset || (!list.empty() && p <= list.back()))
          throw DataError("index: corrupt postings for " + std::string(to_string(a)));
        d.ids[p] = id;
        list.push_back(p);
      }
    }
    for (auto id : d.ids) {
      if (id == unset) throw DataError("index: postings do not cover every position");
    }
  }
  c.finish_tagset();
  return c;
}

// Opens either an LXPC index or a vertical text file, by magic number.
inline Corpus load_corpus(const std::filesystem::path& path, const PosMap& pos_map = PosMap::penn()) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open corpus '" + path.string() + "'");
  std::array<char, 4> magic{};
  in.read(magic.data(), magic.size());
  const bool is_index = in.gcount() == 4 && magic == kIndexMagic;
  in.clear();
  in.seekg(0);
  if (is_index) return load_index(in);
  return ingest_vertical(in, pos_map);
}

}  // namespace lexplain
