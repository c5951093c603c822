#include <gtest/gtest.h>

#include "lexplain/cli.hpp"
#include "support.hpp"

using namespace lexplain;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "lexplain");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string data(const char* rel) { return (lxtest::data_dir() / rel).string(); }

class TempDir {
 public:
  TempDir() {
    path_ = std::filesystem::temp_directory_path() /
            ("lexplain_cli_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  std::filesystem::path operator/(const std::string& s) const { return path_ / s; }
  std::string str() const { return path_.string(); }

 private:
  std::filesystem::path path_;
};

}  // namespace

TEST(Config, DefaultsAndRoundTrip) {
  const Config d;
  const auto text = dump_config(d);
  const auto again = parse_config(text);
  EXPECT_EQ(dump_config(again), text);

  const auto shipped = load_config(lxtest::data_dir() / "config" / "default.conf");
  EXPECT_EQ(shipped.min_pair_freq, 2u);
  EXPECT_EQ(shipped.quotas.relation_top_k, 3u);
  EXPECT_EQ(shipped.quotas.thesaurus_top_k, 5u);
  for (auto p : {CoarsePos::N, CoarsePos::J, CoarsePos::V}) EXPECT_EQ(shipped.schema(p), default_schema(p));
  EXPECT_EQ(dump_config(parse_config(dump_config(shipped))), dump_config(shipped));
}

TEST(Config, Overrides) {
  const auto c = parse_config("# x\nmin_pair_freq = 3\nrelation_top_k=4\nscore_mode = rawfreq\n"
                              "infrequency_per_million = 0.5\npos_map = N.* => N\nlanguage = cs\n");
  EXPECT_EQ(c.min_pair_freq, 3u);
  EXPECT_EQ(c.quotas.relation_top_k, 4u);
  EXPECT_EQ(c.score_mode, ScoreMode::rawfreq);
  EXPECT_EQ(c.infrequency_per_million, 0.5);
  EXPECT_EQ(c.language, "cs");
  ASSERT_EQ(c.pos_map.entries().size(), 1u);  // first pos_map line replaces the defaults
  EXPECT_EQ(c.pos_map.classify("VB"), CoarsePos::other);
}

TEST(Config, Rejects) {
  for (const char* bad : {"min_pair_freq = 0", "min_pair_freq = x", "relation_top_k = -1", "bogus = 1",
                          "no equals sign", "score_mode = mi", "infrequency_per_million = 0", "pos_map = NN",
                          "pos_map = NN => Q", "template.N = /no/such/file.tpl"}) {
    EXPECT_ANY_THROW(parse_config(bad)) << bad;
  }
  EXPECT_THROW(parse_config("template.N = builtin\ntemplate.J = " + data("templates/noun.tpl")), UsageError);
}

TEST(Cli, VersionAndUsage) {
  auto r = run({"version"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, std::string("lexplain ") + std::string(kVersion) + "\n");
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"frobnicate"}).code, 1);
  EXPECT_EQ(run({"sketch", "--corpus", data("corpora/bone.vert")}).code, 1);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, MalformedIngestIsDataError) {
  TempDir tmp;
  const auto r = run({"ingest", "--input", (lxtest::tests_dir() / "fixtures" / "malformed.vert").string(), "--output",
                      (tmp / "x.lxpc").string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("line 3"), std::string::npos) << r.err;
  EXPECT_TRUE(r.out.empty());
}

TEST(Cli, IngestThenExplainFromIndex) {
  TempDir tmp;
  const auto idx = (tmp / "bone.lxpc").string();
  ASSERT_EQ(run({"ingest", "--input", data("corpora/bone.vert"), "--output", idx}).code, 0);
  const auto r = run({"explain", "--corpus", idx, "--grammar", data("grammars/en_noun_verb_adj.sg"), "--head", "bone",
                      "--pos", "N"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, lxtest::slurp(lxtest::tests_dir() / "golden" / "bone.N.txt"));
}

TEST(Cli, GrammarCheck) {
  auto r = run({"grammar-check", "--grammar", data("grammars/en_noun_verb_adj.sg"), "--corpus", data("corpora/bone.vert")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "15 relations\n");
  EXPECT_TRUE(r.err.empty()) << r.err;
  r = run({"grammar-check", "--grammar",
           (lxtest::tests_dir() / "fixtures" / "grammars" / "invalid" / "missing_label2.sg").string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("relation 'r'"), std::string::npos);
}

TEST(Cli, CqlTsv) {
  TempDir tmp;
  const auto vert = tmp / "t.vert";
  std::ofstream(vert) << "<s>\nbig\tbig\tJJ\ndog\tdog\tNN\nruns\trun\tVBZ\n</s>\n";
  auto r = run({"cql", "--corpus", vert.string(), "--query", R"(2:[tag="JJ"] 1:[tag="NN"])"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "0\t2\t1\t0\n");
  r = run({"cql", "--corpus", vert.string(), "--query", R"([tag="NN"] [])"});
  EXPECT_EQ(r.out, "1\t3\t-\t-\n");
  r = run({"cql", "--corpus", vert.string(), "--query", R"([tag="NN")"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("offset"), std::string::npos);
}

TEST(Cli, SketchAndThesaurus) {
  auto r = run({"sketch", "--corpus", data("corpora/bone.vert"), "--grammar", data("grammars/en_noun_verb_adj.sg"),
                "--head", "bone", "--pos", "N", "--relation", "adj_modifier"});
  EXPECT_EQ(r.code, 0) << r.err;
  std::istringstream lines(r.out);
  std::vector<std::string> cols;
  for (std::string line; std::getline(lines, line);) cols.push_back(line.substr(0, line.find('\t', 13)));
  EXPECT_EQ(cols, (std::vector<std::string>{"adj_modifier\tbare", "adj_modifier\tpubic", "adj_modifier\tbrittle"}));
  r = run({"sketch", "--corpus", data("corpora/bone.vert"), "--grammar", data("grammars/en_noun_verb_adj.sg"),
           "--head", "bone", "--pos", "N", "--relation", "nope"});
  EXPECT_EQ(r.code, 1);
  r = run({"thesaurus", "--corpus", data("corpora/bone.vert"), "--grammar", data("grammars/en_noun_verb_adj.sg"),
           "--head", "bone", "--pos", "N", "--limit", "2"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.substr(0, r.out.find('\t')), "osteoporosis");
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 2);
}

TEST(Cli, DumpConfigRoundTrip) {
  TempDir tmp;
  const auto r = run({"--config", data("config/default.conf"), "--dump-config"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ofstream(tmp / "dumped.conf") << r.out;
  const auto again = run({"--config", (tmp / "dumped.conf").string(), "--dump-config"});
  EXPECT_EQ(again.out, r.out);
  const auto a = run({"--config", data("config/default.conf"), "explain", "--corpus", data("corpora/bone.vert"),
                      "--grammar", data("grammars/en_noun_verb_adj.sg"), "--head", "bone", "--pos", "N"});
  const auto b = run({"--config", (tmp / "dumped.conf").string(), "explain", "--corpus", data("corpora/bone.vert"),
                      "--grammar", data("grammars/en_noun_verb_adj.sg"), "--head", "bone", "--pos", "N"});
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.code, 0);
}

TEST(Cli, BatchAndEvaluate) {
  TempDir tmp;
  const auto outdir = (tmp / "expl").string();
  auto r = run({"explain", "--corpus", data("corpora/bone.vert"), "--grammar", data("grammars/en_noun_verb_adj.sg"),
                "--headlist", data("samples/headlist.txt"), "--outdir", outdir, "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::size_t files = 0;
  for (const auto& e : std::filesystem::directory_iterator(outdir)) files += e.path().extension() == ".json";
  EXPECT_EQ(files, 7u);
  EXPECT_TRUE(std::filesystem::exists(tmp / "expl" / "bone.N.json"));
  EXPECT_FALSE(std::filesystem::exists(tmp / "expl" / "zebra.N.json"));
  const auto idx = lxtest::slurp(tmp / "expl" / "index.tsv");
  EXPECT_NE(idx.find("zebra\tN\tno_data\n"), std::string::npos);

  r = run({"evaluate", "--corpus", data("corpora/bone.vert"), "--explanations", outdir, "--annotations",
           data("samples/annotations.tsv"), "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  // file-count oracle for coverage
  EXPECT_EQ(doc["coverage"]["all"]["numerator"], files);
  EXPECT_EQ(doc["coverage"]["all"]["denominator"], 8);
  EXPECT_EQ(doc["coverage"]["all"]["percent"], "87.50");
}

TEST(Cli, ExplainNoDataAndBadPos) {
  auto r = run({"explain", "--corpus", data("corpora/bone.vert"), "--grammar", data("grammars/en_noun_verb_adj.sg"),
                "--head", "zebra", "--pos", "N"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "zebra:\nno data\n");
  r = run({"explain", "--corpus", data("corpora/bone.vert"), "--grammar", data("grammars/en_noun_verb_adj.sg"),
           "--head", "bone", "--pos", "Q"});
  EXPECT_EQ(r.code, 1);
  r = run({"explain", "--corpus", data("corpora/missing.vert"), "--grammar", data("grammars/en_noun_verb_adj.sg"),
           "--head", "bone", "--pos", "N"});
  EXPECT_EQ(r.code, 2);
}
