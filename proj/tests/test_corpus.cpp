#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "support.hpp"

using namespace lexplain;
using lxtest::corpus_from_text;

namespace {

const char* kSmall =
    "<doc id=\"x\">\n"
    "<s>\n"
    "The\tthe\tDT\n"
    "bones\tbone\tNNS\n"
    "heal\theal\tVBP\n"
    "</s>\n"
    "\n"
    "<s n=\"2\">\n"
    "Dry\tdry\tJJ\n"
    "bone\tbone\tNN\n"
    "</s>\n"
    "stray\tstray\tJJ\n"
    "token\ttoken\tNN\n"
    "</doc>\n";

}  // namespace

TEST(Ingest, TokensAndSentences) {
  const auto c = corpus_from_text(kSmall);
  ASSERT_EQ(c.size(), 7u);
  ASSERT_EQ(c.sentences().size(), 3u);
  EXPECT_EQ(c.sentences()[0], (SentenceRange{0, 3}));
  EXPECT_EQ(c.sentences()[1], (SentenceRange{3, 5}));
  // tokens outside <s> form their own sentence, closed by </doc>
  EXPECT_EQ(c.sentences()[2], (SentenceRange{5, 7}));
  EXPECT_EQ(c.token(1), (Token{"bones", "bone", "NNS"}));
  EXPECT_EQ(c.value_at(Attribute::lemma, 4), "bone");
}

TEST(Ingest, CrLfAndBlankLines) {
  const auto c = corpus_from_text("<s>\r\na\ta\tDT\r\n\r\nb\tb\tNN\r\n</s>\r\n");
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c.token(1).tag, "NN");
}

TEST(Ingest, EmptySentencesVanish) {
  const auto c = corpus_from_text("<s>\n</s>\n<s>\nx\tx\tNN\n</s>\n<s>\n</s>\n");
  ASSERT_EQ(c.sentences().size(), 1u);
}

TEST(Ingest, MalformedLineReportsLineNumber) {
  try {
    corpus_from_text("<s>\na\ta\tDT\nb\tNN\n</s>\n");
    FAIL() << "expected IngestError";
  } catch (const IngestError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  EXPECT_THROW(corpus_from_text("a\ta\tDT\textra\n"), IngestError);
  EXPECT_THROW(corpus_from_text("a\t\tDT\n"), IngestError);
  EXPECT_THROW(corpus_from_text(lxtest::slurp(lxtest::tests_dir() / "fixtures" / "malformed.vert")), DataError);
}

TEST(Ingest, FreqMatchesFullScan) {
  const auto& c = lxtest::synthetic_corpus();
  for (auto a : kAttributes) {
    std::map<std::string, std::size_t> scan;
    for (Position p = 0; p < c.size(); ++p) ++scan[c.value_at(a, p)];
    ASSERT_EQ(scan.size(), c.lexicon(a).size());
    for (const auto& [v, n] : scan) ASSERT_EQ(c.freq(a, v), n) << v;
  }
  EXPECT_EQ(c.freq("lemma", "no-such-lemma"), 0u);
  EXPECT_THROW(c.freq("colour", "red"), UsageError);
}

TEST(Ingest, PostingsAreSortedAndPartitionPositions) {
  const auto& c = lxtest::synthetic_corpus();
  for (auto a : kAttributes) {
    std::vector<int> seen(c.size(), 0);
    for (LexId id = 0; id < c.lexicon(a).size(); ++id) {
      const auto post = c.postings(a, id);
      ASSERT_FALSE(post.empty());
      for (std::size_t i = 0; i < post.size(); ++i) {
        if (i) {
          ASSERT_LT(post[i - 1], post[i]);
        }
        ASSERT_EQ(c.id_at(a, post[i]), id);
        ++seen[post[i]];
      }
    }
    for (auto n : seen) ASSERT_EQ(n, 1);
  }
  // sentences partition [0, size)
  Position expect = 0;
  for (const auto& s : c.sentences()) {
    ASSERT_EQ(s.start, expect);
    ASSERT_GT(s.end, s.start);
    expect = s.end;
  }
  EXPECT_EQ(expect, c.size());
}

TEST(PosMapping, PennDefaultsAndHistogram) {
  const auto pm = PosMap::penn();
  EXPECT_EQ(pm.classify("NN"), CoarsePos::N);
  EXPECT_EQ(pm.classify("NNPS"), CoarsePos::N);
  EXPECT_EQ(pm.classify("JJR"), CoarsePos::J);
  EXPECT_EQ(pm.classify("VBD"), CoarsePos::V);
  EXPECT_EQ(pm.classify("RB"), CoarsePos::A);
  EXPECT_EQ(pm.classify("DT"), CoarsePos::other);
  EXPECT_EQ(pm.classify("XNN"), CoarsePos::other);  // anchored

  const auto& c = lxtest::synthetic_corpus();
  std::map<CoarsePos, std::size_t> hist, oracle;
  for (Position p = 0; p < c.size(); ++p) ++hist[c.coarse_pos_at(p)];
  for (Position p = 0; p < c.size(); ++p) {
    const auto& tag = c.token(p).tag;
    CoarsePos want = CoarsePos::other;
    if (tag.rfind("NN", 0) == 0) want = CoarsePos::N;
    else if (tag.rfind("JJ", 0) == 0) want = CoarsePos::J;
    else if (tag.rfind("VB", 0) == 0) want = CoarsePos::V;
    else if (tag.rfind("RB", 0) == 0) want = CoarsePos::A;
    ++oracle[want];
  }
  EXPECT_EQ(hist, oracle);
}

TEST(PosMapping, FirstMatchWins) {
  PosMap pm;
  pm.add("N.*", CoarsePos::V);
  pm.add("NN", CoarsePos::N);
  EXPECT_EQ(pm.classify("NN"), CoarsePos::V);
}

TEST(Index, RoundTripIsIdentical) {
  std::mt19937_64 rng(7);
  for (int round = 0; round < 5; ++round) {
    const auto c = lxtest::random_corpus(rng, 500 + round * 300);
    std::stringstream buf;
    save_index(c, buf);
    const auto d = load_index(buf);
    ASSERT_EQ(d.size(), c.size());
    ASSERT_EQ(d.sentences(), c.sentences());
    for (Position p = 0; p < c.size(); ++p) {
      ASSERT_EQ(d.token(p), c.token(p));
      ASSERT_EQ(d.coarse_pos_at(p), c.coarse_pos_at(p));
    }
    std::stringstream again;
    save_index(d, again);
    std::stringstream first;
    save_index(c, first);
    ASSERT_EQ(again.str(), first.str());
  }
}

TEST(Index, RejectsCorruption) {
  const auto c = corpus_from_text(kSmall);
  std::stringstream buf;
  save_index(c, buf);
  const auto bytes = buf.str();

  std::string bad_magic = bytes;
  bad_magic[0] = 'X';
  std::istringstream in1(bad_magic);
  EXPECT_THROW(load_index(in1), DataError);

  std::string bad_version = bytes;
  bad_version[4] = 9;
  std::istringstream in2(bad_version);
  EXPECT_THROW(load_index(in2), DataError);

  std::istringstream in3(bytes.substr(0, bytes.size() - 3));
  EXPECT_THROW(load_index(in3), DataError);
}

TEST(Index, LoadCorpusDetectsFormat) {
  const auto dir = std::filesystem::temp_directory_path() / "lexplain_index_test";
  std::filesystem::create_directories(dir);
  const auto& c = lxtest::bone_corpus();
  {
    std::ofstream out(dir / "bone.lxpc", std::ios::binary);
    save_index(c, out);
  }
  const auto d = load_corpus(dir / "bone.lxpc");
  EXPECT_EQ(d.size(), c.size());
  EXPECT_EQ(d.freq(Attribute::lemma, "bone"), c.freq(Attribute::lemma, "bone"));
  EXPECT_THROW(load_corpus(dir / "missing.vert"), DataError);
  std::filesystem::remove_all(dir);
}
