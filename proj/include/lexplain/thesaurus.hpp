#pragma once

// Distributional thesaurus over sketch contexts. A word's context vector maps
// each (relation, direction, other word) it takes part in to its association
// score, floored at 0. Two words of the same POS are compared with
//
//   sim(w1, w2) = max(0, sum_shared(AS1 + AS2 - (AS1 - AS2)^2 / 50))
//                 / (sum AS1 + sum AS2)

#include <algorithm>
#include <compare>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "lexplain/error.hpp"
#include "lexplain/sketches.hpp"

namespace lexplain {

struct Context {
  std::string relation;
  bool inverse = false;  // the owner is the collocate, `other` the head
  LemmaPos other;

  friend auto operator<=>(const Context&, const Context&) = default;
};

using ContextVector = std::map<Context, double>;

struct SimilarityResult {
  LemmaPos neighbor;
  double similarity = 0.0;

  friend bool operator==(const SimilarityResult&, const SimilarityResult&) = default;
};

struct ThesaurusOptions {
  std::size_t min_shared_contexts = 2;
  double penalty_divisor = 50.0;
};

// Similarity of two explicit context vectors, without the shared-context
// minimum. Empty or all-zero vectors give 0.
inline double context_similarity(const ContextVector& a, const ContextVector& b,
                                 double penalty_divisor = 50.0) {
  // each side summed on its own so that swapping a and b is bit-exact
  double num = 0.0, sum_a = 0.0, sum_b = 0.0;
  for (const auto& [c, v] : a) sum_a += v;
  for (const auto& [c, v] : b) sum_b += v;
  const double den = sum_a + sum_b;
  // Both maps are ordered by context, so shared entries come out of a merge.
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      const double d = ia->second - ib->second;
      num += ia->second + ib->second - d * d / penalty_divisor;
      ++ia;
      ++ib;
    }
  }
  if (den <= 0.0) return 0.0;
  return std::max(0.0, num) / den;
}

class Thesaurus {
 public:
  explicit Thesaurus(const SketchIndex& index, ThesaurusOptions options = {}) : options_(options) {
    for (const auto& t : index.triples()) {
      const double as = std::max(t.score, 0.0);
      add(t.head, Context{t.relation, false, t.collocate}, as);
      add(t.collocate, Context{t.relation, true, t.head}, as);
    }
  }

  const ContextVector* vector_of(const LemmaPos& w) const {
    auto it = vectors_.find(w);
    return it == vectors_.end() ? nullptr : &it->second;
  }

  std::size_t shared_contexts(const LemmaPos& a, const LemmaPos& b) const {
    const auto* va = vector_of(a);
    const auto* vb = vector_of(b);
    if (!va || !vb) return 0;
    std::size_t n = 0;
    for (const auto& [c, v] : *va) n += vb->contains(c);
    return n;
  }

  double similarity(const LemmaPos& a, const LemmaPos& b) const {
    const auto* va = vector_of(a);
    const auto* vb = vector_of(b);
    if (!va || !vb) return 0.0;
    return context_similarity(*va, *vb, options_.penalty_divisor);
  }

  // Same-POS neighbours sharing enough contexts with head, best first.
  // Zero similarities are dropped; the head itself never appears.
  std::vector<SimilarityResult> similar(const LemmaPos& head, std::size_t limit) const {
    if (head.pos != CoarsePos::N && head.pos != CoarsePos::J && head.pos != CoarsePos::V)
      throw UsageError("thesaurus: POS must be N, J or V, got " + std::string(to_string(head.pos)));
    std::vector<SimilarityResult> out;
    const auto* vh = vector_of(head);
    if (!vh) return out;

    std::map<LemmaPos, std::size_t> shared;
    for (const auto& [c, v] : *vh) {
      auto it = owners_.find(c);
      if (it == owners_.end()) continue;
      for (const auto& w : it->second) {
        if (w.pos == head.pos && w != head) ++shared[w];
      }
    }
    for (const auto& [w, n] : shared) {
      if (n < options_.min_shared_contexts) continue;
      const double s = context_similarity(*vh, vectors_.at(w), options_.penalty_divisor);
      if (s > 0.0) out.push_back({w, s});
    }
    std::sort(out.begin(), out.end(), [](const SimilarityResult& a, const SimilarityResult& b) {
      if (a.similarity != b.similarity) return a.similarity > b.similarity;
      return a.neighbor < b.neighbor;
    });
    if (out.size() > limit) out.resize(limit);
    return out;
  }

  const std::map<LemmaPos, ContextVector>& vectors() const { return vectors_; }

 private:
  void add(const LemmaPos& owner, Context c, double as) {
    auto& owners = owners_[c];
    if (owners.empty() || owners.back() != owner) owners.push_back(owner);
    vectors_[owner].insert_or_assign(std::move(c), as);
  }

  ThesaurusOptions options_;
  std::map<LemmaPos, ContextVector> vectors_;
  std::map<Context, std::vector<LemmaPos>> owners_;
};

inline std::vector<SimilarityResult> similar(const SketchIndex& index, const LemmaPos& head, std::size_t limit) {
  return Thesaurus(index).similar(head, limit);
}

}  // namespace lexplain
