#pragma once

// Test-only helpers: reference implementations that share no code with the
// library beyond the plain data types, plus random input generators.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "lexplain/lexplain.hpp"

namespace lxtest {

using namespace lexplain;

inline std::filesystem::path data_dir() { return LEXPLAIN_DATA_DIR; }
inline std::filesystem::path tests_dir() { return LEXPLAIN_TESTS_DIR; }

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Corpus corpus_from_text(const std::string& text) {
  std::istringstream in(text);
  return ingest_vertical(in);
}

inline const Corpus& bone_corpus() {
  static const Corpus c = load_corpus(data_dir() / "corpora" / "bone.vert");
  return c;
}
inline const Corpus& synthetic_corpus() {
  static const Corpus c = load_corpus(data_dir() / "corpora" / "synthetic.vert");
  return c;
}
inline const Grammar& default_grammar() {
  static const Grammar g = parse_grammar(slurp(data_dir() / "grammars" / "en_noun_verb_adj.sg"));
  return g;
}

// --- CQL reference -------------------------------------------------------

// Evaluates a test expression against token strings; no lexicon ids
// involved. Regex outcomes are memoized per (regex, value) string pair.
struct ExprEvaluator {
  std::map<std::pair<std::string, std::string>, bool> memo;
  std::map<std::string, std::regex> compiled;

  bool atom(const std::string& re, const std::string& v) {
    auto [it, fresh] = memo.try_emplace({re, v}, false);
    if (fresh) {
      auto c = compiled.find(re);
      if (c == compiled.end()) c = compiled.emplace(re, std::regex(re, std::regex::ECMAScript)).first;
      it->second = std::regex_match(v, c->second);
    }
    return it->second;
  }

  bool eval(const cql::Expr& e, const Corpus& c, Position p) {
    using K = cql::Expr::Kind;
    switch (e.kind) {
      case K::atom: {
        const auto t = c.token(p);
        return atom(e.regex, e.attr == Attribute::word ? t.word : e.attr == Attribute::lemma ? t.lemma : t.tag);
      }
      case K::negation: return !eval(e.operands[0], c, p);
      case K::conjunction: return eval(e.operands[0], c, p) && eval(e.operands[1], c, p);
      case K::disjunction: return eval(e.operands[0], c, p) || eval(e.operands[1], c, p);
    }
    return false;
  }
};

// Brute force: for each start, enumerate every tuple of repeat counts in
// greedy order (first element's count largest first, and so on) and keep
// the first tuple that fits the sentence, passes every token test and is
// non-empty.
inline std::vector<cql::Match> brute_force_matches(const cql::Query& q, const Corpus& c) {
  const std::size_t n = q.elements.size();
  std::vector<std::vector<unsigned>> tuples;
  std::vector<unsigned> cur(n);
  auto gen = [&](auto&& self, std::size_t i) -> void {
    if (i == n) {
      tuples.push_back(cur);
      return;
    }
    const auto& qu = q.elements[i].quant;
    for (unsigned k = qu.max + 1; k-- > qu.min;) {
      cur[i] = k;
      self(self, i + 1);
    }
  };
  gen(gen, 0);

  ExprEvaluator ev;
  std::vector<std::vector<char>> ok_at(n, std::vector<char>(c.size()));
  for (std::size_t i = 0; i < n; ++i) {
    for (Position p = 0; p < c.size(); ++p)
      ok_at[i][p] = !q.elements[i].test || ev.eval(*q.elements[i].test, c, p);
  }

  std::vector<cql::Match> out;
  for (const auto& sent : c.sentences()) {
    for (Position s = sent.start; s < sent.end; ++s) {
      for (const auto& tup : tuples) {
        unsigned total = 0;
        for (auto k : tup) total += k;
        if (total == 0 || s + total > sent.end) continue;
        bool ok = true;
        Position p = s;
        std::vector<std::pair<int, Position>> binds;
        for (std::size_t i = 0; i < n && ok; ++i) {
          const auto& el = q.elements[i];
          if (el.label) binds.emplace_back(*el.label, p);
          for (unsigned k = 0; k < tup[i] && ok; ++k, ++p) {
            if (!ok_at[i][p]) ok = false;
          }
        }
        if (!ok) continue;
        std::sort(binds.begin(), binds.end());
        out.push_back(cql::Match{s, s + total, binds});
        break;
      }
    }
  }
  return out;
}

// --- random generation -----------------------------------------------------

struct RandomCorpusSpec {
  std::vector<std::string> words{"a", "b", "c", "d", "ab", "ba"};
  std::vector<std::string> tags{"NN", "NNS", "JJ", "VB", "VBZ", "DT", "RB"};
};

inline Corpus random_corpus(std::mt19937_64& rng, std::size_t tokens, const RandomCorpusSpec& spec = {}) {
  CorpusBuilder b;
  std::uniform_int_distribution<std::size_t> w(0, spec.words.size() - 1), t(0, spec.tags.size() - 1),
      len(1, 12);
  std::size_t left = tokens;
  while (left > 0) {
    const auto n = std::min(left, len(rng));
    b.begin_sentence();
    for (std::size_t i = 0; i < n; ++i) {
      const auto& word = spec.words[w(rng)];
      std::string lemma = word.substr(0, 1);
      b.add(word, lemma, spec.tags[t(rng)]);
    }
    b.end_sentence();
    left -= n;
  }
  return std::move(b).finish();
}

inline cql::Expr random_expr(std::mt19937_64& rng, int depth) {
  static const std::vector<std::string> word_res{"a", "b", "ab", "a.*", "[ab]", "b|c", "d", "zz", ".", ".b"};
  static const std::vector<std::string> tag_res{"NN", "NN.*", "JJ|RB", "VB.?", "DT", "X"};
  std::uniform_int_distribution<int> pick(0, 9);
  const int r = pick(rng);
  if (depth <= 0 || r < 5) {
    std::uniform_int_distribution<int> attr(0, 2);
    const auto a = static_cast<Attribute>(attr(rng));
    if (a == Attribute::tag) return cql::Expr::atom(a, tag_res[rng() % tag_res.size()]);
    return cql::Expr::atom(a, word_res[rng() % word_res.size()]);
  }
  if (r < 7) return cql::Expr::negation(random_expr(rng, depth - 1));
  const auto k = r < 9 ? cql::Expr::Kind::conjunction : cql::Expr::Kind::disjunction;
  return cql::Expr::binary(k, random_expr(rng, depth - 1), random_expr(rng, depth - 1));
}

inline cql::Query random_query(std::mt19937_64& rng, std::size_t max_elements = 4) {
  cql::Query q;
  const auto n = 1 + rng() % max_elements;
  int next_label = 1;
  for (std::size_t i = 0; i < n; ++i) {
    cql::Element e;
    if (rng() % 5 != 0) e.test = random_expr(rng, 2);
    switch (rng() % 6) {
      case 0: e.quant = {0, 1}; break;
      case 1: e.quant = {static_cast<unsigned>(rng() % 2), static_cast<unsigned>(1 + rng() % 3)}; break;
      default: break;
    }
    if (e.quant.exactly_one() && rng() % 2 == 0) e.label = next_label++;
    q.elements.push_back(std::move(e));
  }
  return q;
}

// --- sketch reference ------------------------------------------------------

using TripleKey = std::tuple<std::string, std::string, std::string, std::string, std::string>;

struct NaiveTriple {
  std::uint64_t freq;
  double score;
};

// find_matches per query, then a plain tally keyed by strings.
inline std::map<TripleKey, NaiveTriple> naive_sketches(const Corpus& c, const Grammar& g,
                                                       std::uint64_t min_pair_freq = 2) {
  std::map<std::pair<std::string, std::string>, std::uint64_t> marg;
  for (Position p = 0; p < c.size(); ++p) {
    const auto t = c.token(p);
    ++marg[{t.lemma, std::string(to_string(c.coarse_pos(t.tag)))}];
  }
  std::map<TripleKey, std::uint64_t> tally;
  for (const auto& rel : g.relations) {
    std::set<std::pair<Position, Position>> pairs;
    for (const auto& q : rel.queries) {
      for (const auto& m : cql::find_matches(q, c)) {
        const auto h = m.binding(kHeadLabel), k = m.binding(kCollocateLabel);
        if (!h || !k) continue;
        if (c.coarse_pos(c.token(*h).tag) != rel.head_pos) continue;
        pairs.emplace(*h, *k);
      }
    }
    for (const auto& [h, k] : pairs) {
      const auto th = c.token(h), tk = c.token(k);
      ++tally[{rel.name, th.lemma, std::string(to_string(c.coarse_pos(th.tag))), tk.lemma,
               std::string(to_string(c.coarse_pos(tk.tag)))}];
    }
  }
  std::map<TripleKey, NaiveTriple> out;
  for (const auto& [key, n] : tally) {
    if (n < min_pair_freq) continue;
    const auto fx = std::max<std::uint64_t>(marg[{std::get<1>(key), std::get<2>(key)}], n);
    const auto fy = std::max<std::uint64_t>(marg[{std::get<3>(key), std::get<4>(key)}], n);
    out[key] = {n, 14.0 + std::log2(2.0 * double(n) / (double(fx) + double(fy)))};
  }
  return out;
}

inline std::map<TripleKey, NaiveTriple> index_as_map(const SketchIndex& idx) {
  std::map<TripleKey, NaiveTriple> out;
  for (const auto& t : idx.triples()) {
    out[{t.relation, t.head.lemma, std::string(to_string(t.head.pos)), t.collocate.lemma,
         std::string(to_string(t.collocate.pos))}] = {t.pair_freq, t.score};
  }
  return out;
}

// Random sketch index over a small vocabulary, for explanation properties.
inline SketchIndex random_index(std::mt19937_64& rng, const std::vector<RelationInfo>& rels,
                                const std::vector<LemmaPos>& vocab) {
  std::vector<SketchTriple> triples;
  std::set<std::tuple<std::string, LemmaPos, LemmaPos>> seen;
  const auto n = 20 + rng() % 200;
  std::uniform_int_distribution<std::size_t> pick(0, vocab.size() - 1);
  std::uniform_int_distribution<int> freq(2, 40);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& r = rels[rng() % rels.size()];
    LemmaPos h = vocab[pick(rng)];
    h.pos = r.head_pos;
    LemmaPos k = vocab[pick(rng)];
    k.pos = r.collocate_pos;
    if (!seen.emplace(r.name, h, k).second) continue;
    const int f = freq(rng);
    // ties on score are common on purpose
    const double score = double(rng() % 8) + (rng() % 3 == 0 ? 0.5 : 0.0);
    triples.push_back({h, r.name, k, static_cast<std::uint64_t>(f), score});
  }
  std::map<LemmaPos, std::uint64_t> marg;
  for (const auto& t : triples) {
    marg[t.head] += t.pair_freq;
    marg[t.collocate] += t.pair_freq;
  }
  return SketchIndex::from_triples(rels, std::move(triples), std::move(marg));
}

}  // namespace lxtest
