#pragma once

// Word sketches: (head, relation, collocate) triples counted over all grammar
// matches, scored with logDice and ranked per (head, relation).

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "lexplain/corpus.hpp"
#include "lexplain/cql.hpp"
#include "lexplain/error.hpp"
#include "lexplain/grammar.hpp"
#include "lexplain/parallel.hpp"

namespace lexplain {

struct LemmaPos {
  std::string lemma;
  CoarsePos pos = CoarsePos::other;

  friend auto operator<=>(const LemmaPos&, const LemmaPos&) = default;
};

inline std::string to_string(const LemmaPos& lp) { return lp.lemma + "/" + std::string(to_string(lp.pos)); }

// logDice = 14 + log2(2 f_xy / (f_x + f_y)). At most 14, reached iff
// f_xy == f_x == f_y.
inline double log_dice(std::uint64_t f_xy, std::uint64_t f_x, std::uint64_t f_y) {
  if (f_xy < 1 || f_x < 1 || f_y < 1)
    throw CountingError("log_dice: frequencies must be positive (f_xy=" + std::to_string(f_xy) +
                        ", f_x=" + std::to_string(f_x) + ", f_y=" + std::to_string(f_y) + ")");
  if (f_xy > f_x || f_xy > f_y)
    throw CountingError("log_dice: pair frequency " + std::to_string(f_xy) +
                        " exceeds a marginal (f_x=" + std::to_string(f_x) +
                        ", f_y=" + std::to_string(f_y) + ")");
  return 14.0 + std::log2(2.0 * static_cast<double>(f_xy) / (static_cast<double>(f_x) + static_cast<double>(f_y)));
}

enum class ScoreMode { logdice, rawfreq };

inline std::string_view to_string(ScoreMode m) { return m == ScoreMode::logdice ? "logdice" : "rawfreq"; }

inline ScoreMode parse_score_mode(std::string_view s) {
  if (s == "logdice") return ScoreMode::logdice;
  if (s == "rawfreq") return ScoreMode::rawfreq;
  throw UsageError("unknown score mode '" + std::string(s) + "' (expected logdice or rawfreq)");
}

struct SketchTriple {
  LemmaPos head;
  std::string relation;
  LemmaPos collocate;
  std::uint64_t pair_freq = 0;
  double score = 0.0;

  friend bool operator==(const SketchTriple&, const SketchTriple&) = default;
};

struct SketchOptions {
  std::uint64_t min_pair_freq = 2;
  ScoreMode mode = ScoreMode::logdice;
  unsigned jobs = 1;
};

struct RelationInfo {
  std::string name;
  CoarsePos head_pos = CoarsePos::other;
  CoarsePos collocate_pos = CoarsePos::other;
  std::string gloss_key;
};

class SketchIndex;
SketchIndex build_sketches(const Corpus& corpus, const Grammar& grammar, const SketchOptions& options);

class SketchIndex {
 public:
  SketchIndex() = default;

  // Assembles an index from explicit triples; scores are taken as given.
  // Used for building indices that did not come from a corpus.
  static SketchIndex from_triples(std::vector<RelationInfo> relations, std::vector<SketchTriple> triples,
                                  std::map<LemmaPos, std::uint64_t> marginals,
                                  ScoreMode mode = ScoreMode::logdice) {
    SketchIndex idx;
    idx.relations_ = std::move(relations);
    idx.triples_ = std::move(triples);
    idx.marginals_ = std::move(marginals);
    idx.mode_ = mode;
    idx.organize();
    return idx;
  }

  ScoreMode mode() const { return mode_; }
  const std::vector<RelationInfo>& relations() const { return relations_; }
  const RelationInfo* relation(std::string_view name) const {
    for (const auto& r : relations_) {
      if (r.name == name) return &r;
    }
    return nullptr;
  }

  // All triples, grouped by (relation, head), each group in rank order.
  const std::vector<SketchTriple>& triples() const { return triples_; }

  // Ranked collocates of `head` in `relation`. Unknown heads give an empty span.
  std::span<const SketchTriple> group(const LemmaPos& head, std::string_view relation) const {
    const auto r = relation_index(relation);
    auto it = groups_.find(Key{head, r});
    if (it == groups_.end()) return {};
    return std::span<const SketchTriple>(triples_).subspan(it->second.first, it->second.second - it->second.first);
  }

  // Triples in which `collocate` is the collocate of `relation`, ranked by
  // the same order with the head lemma as the final tie-break.
  std::vector<const SketchTriple*> inverse_group(const LemmaPos& collocate, std::string_view relation) const {
    const auto r = relation_index(relation);
    std::vector<const SketchTriple*> out;
    if (auto it = inverse_.find(Key{collocate, r}); it != inverse_.end()) {
      for (auto i : it->second) out.push_back(&triples_[i]);
    }
    return out;
  }

  std::uint64_t marginal(const LemmaPos& lp) const {
    auto it = marginals_.find(lp);
    return it == marginals_.end() ? 0 : it->second;
  }
  const std::map<LemmaPos, std::uint64_t>& marginals() const { return marginals_; }

  // True when the word takes part in at least one triple, on either side.
  bool has_data(const LemmaPos& lp) const { return participants_.contains(lp); }

  // Rank order within a group: higher score first, then higher frequency,
  // then lemma. rawfreq mode swaps the first two keys.
  bool ranks_before(const SketchTriple& a, const SketchTriple& b, bool by_head = false) const {
    const auto& la = by_head ? a.head : a.collocate;
    const auto& lb = by_head ? b.head : b.collocate;
    if (mode_ == ScoreMode::logdice) {
      if (a.score != b.score) return a.score > b.score;
      if (a.pair_freq != b.pair_freq) return a.pair_freq > b.pair_freq;
    } else {
      if (a.pair_freq != b.pair_freq) return a.pair_freq > b.pair_freq;
      if (a.score != b.score) return a.score > b.score;
    }
    return la < lb;
  }

 private:
  friend SketchIndex build_sketches(const Corpus&, const Grammar&, const SketchOptions&);

  using Key = std::pair<LemmaPos, std::size_t>;

  std::size_t relation_index(std::string_view name) const {
    for (std::size_t i = 0; i < relations_.size(); ++i) {
      if (relations_[i].name == name) return i;
    }
    throw UsageError("unknown relation '" + std::string(name) + "'");
  }

  void organize() {
    std::vector<std::size_t> rel_of(triples_.size());
    for (std::size_t i = 0; i < triples_.size(); ++i) rel_of[i] = relation_index(triples_[i].relation);
    std::vector<std::size_t> order(triples_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
      const auto& a = triples_[x];
      const auto& b = triples_[y];
      if (rel_of[x] != rel_of[y]) return rel_of[x] < rel_of[y];
      if (a.head != b.head) return a.head < b.head;
      return ranks_before(a, b);
    });
    std::vector<SketchTriple> sorted;
    sorted.reserve(triples_.size());
    std::vector<std::size_t> sorted_rel;
    for (auto i : order) {
      sorted.push_back(std::move(triples_[i]));
      sorted_rel.push_back(rel_of[i]);
    }
    triples_ = std::move(sorted);

    groups_.clear();
    inverse_.clear();
    participants_.clear();
    for (std::size_t i = 0; i < triples_.size(); ++i) {
      const auto& t = triples_[i];
      auto [it, fresh] = groups_.try_emplace(Key{t.head, sorted_rel[i]}, i, i + 1);
      if (!fresh) it->second.second = i + 1;
      inverse_[Key{t.collocate, sorted_rel[i]}].push_back(i);
      participants_.insert(t.head);
      participants_.insert(t.collocate);
    }
    for (auto& [key, list] : inverse_) {
      std::sort(list.begin(), list.end(), [&](std::size_t x, std::size_t y) {
        return ranks_before(triples_[x], triples_[y], true);
      });
    }
  }

  std::vector<RelationInfo> relations_;
  std::vector<SketchTriple> triples_;
  std::map<LemmaPos, std::uint64_t> marginals_;
  ScoreMode mode_ = ScoreMode::logdice;
  std::map<Key, std::pair<std::size_t, std::size_t>> groups_;
  std::map<Key, std::vector<std::size_t>> inverse_;
  std::set<LemmaPos> participants_;
};

// Corpus-wide (lemma, coarse POS) frequencies.
inline std::map<LemmaPos, std::uint64_t> lemma_pos_frequencies(const Corpus& corpus) {
  std::map<std::pair<LexId, CoarsePos>, std::uint64_t> by_id;
  for (Position p = 0; p < corpus.size(); ++p) ++by_id[{corpus.id_at(Attribute::lemma, p), corpus.coarse_pos_at(p)}];
  std::map<LemmaPos, std::uint64_t> out;
  const auto& lex = corpus.lexicon(Attribute::lemma);
  for (const auto& [key, n] : by_id) out[LemmaPos{lex.str(key.first), key.second}] = n;
  return out;
}

// Counting unit: one distinct (head position, collocate position) pair per
// relation, whichever of the relation's queries found it. Matches whose
// head token has the wrong coarse POS are skipped.
inline SketchIndex build_sketches(const Corpus& corpus, const Grammar& grammar,
                                  const SketchOptions& options = {}) {
  SketchIndex idx;
  idx.mode_ = options.mode;
  for (const auto& r : grammar.relations)
    idx.relations_.push_back({r.name, r.head_pos, r.collocate_pos, r.gloss_key});
  idx.marginals_ = lemma_pos_frequencies(corpus);

  // (relation, head lemma id, head pos, collocate lemma id, collocate pos)
  using TallyKey = std::tuple<std::size_t, LexId, CoarsePos, LexId, CoarsePos>;
  using Tally = std::map<TallyKey, std::uint64_t>;

  const auto& sentences = corpus.sentences();
  const unsigned jobs = std::max(1u, options.jobs);
  std::vector<Tally> tallies(jobs);
  const auto used = parallel_chunks(sentences.size(), jobs, [&](std::size_t c, std::size_t b, std::size_t e) {
    Tally& tally = tallies[c];
    for (std::size_t r = 0; r < grammar.relations.size(); ++r) {
      const auto& rel = grammar.relations[r];
      std::vector<cql::CompiledQuery> compiled;
      for (const auto& q : rel.queries) compiled.emplace_back(q, corpus);
      std::vector<std::pair<Position, Position>> pairs;
      for (std::size_t s = b; s < e; ++s) {
        pairs.clear();
        for (const auto& cq : compiled) {
          cq.for_each_match(sentences[s], [&](const cql::Match& m) {
            const auto head = m.binding(kHeadLabel);
            const auto coll = m.binding(kCollocateLabel);
            if (!head || !coll) return;
            if (corpus.coarse_pos_at(*head) != rel.head_pos) return;
            pairs.emplace_back(*head, *coll);
          });
        }
        std::sort(pairs.begin(), pairs.end());
        pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
        for (const auto& [h, k] : pairs) {
          ++tally[TallyKey{r, corpus.id_at(Attribute::lemma, h), corpus.coarse_pos_at(h),
                           corpus.id_at(Attribute::lemma, k), corpus.coarse_pos_at(k)}];
        }
      }
    }
  });
  Tally merged;
  for (std::size_t c = 0; c < used; ++c) {
    for (const auto& [k, n] : tallies[c]) merged[k] += n;
  }

  const auto& lex = corpus.lexicon(Attribute::lemma);
  for (const auto& [key, n] : merged) {
    if (n < options.min_pair_freq) continue;
    const auto& [r, hl, hp, cl, cp] = key;
    SketchTriple t{LemmaPos{lex.str(hl), hp}, grammar.relations[r].name, LemmaPos{lex.str(cl), cp}, n, 0.0};
    // A head occurrence can pair with several occurrences of the same
    // collocate, so a marginal may fall below the pair count; it is raised to
    // the pair count to keep the score within its bound.
    const auto fx = std::max(idx.marginal(t.head), n);
    const auto fy = std::max(idx.marginal(t.collocate), n);
    t.score = log_dice(n, fx, fy);
    idx.triples_.push_back(std::move(t));
  }
  idx.organize();
  return idx;
}

// Top `limit` collocates of head in relation, in rank order.
inline std::vector<SketchTriple> word_sketch(const SketchIndex& index, const LemmaPos& head,
                                             std::string_view relation, std::size_t limit = 3) {
  const auto g = index.group(head, relation);
  const auto n = std::min(limit, g.size());
  return {g.begin(), g.begin() + static_cast<std::ptrdiff_t>(n)};
}

// Top `limit` heads having `collocate` in relation, in rank order.
inline std::vector<SketchTriple> inverse_word_sketch(const SketchIndex& index, const LemmaPos& collocate,
                                                     std::string_view relation, std::size_t limit = 3) {
  std::vector<SketchTriple> out;
  for (const auto* t : index.inverse_group(collocate, relation)) {
    if (out.size() >= limit) break;
    out.push_back(*t);
  }
  return out;
}

}  // namespace lexplain
