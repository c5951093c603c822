#pragma once

// The lexplain command line: one binary, one subcommand per pipeline stage.
// Exit codes: 0 success, 1 usage error, 2 data or format error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lexplain/config.hpp"
#include "lexplain/corpus.hpp"
#include "lexplain/cql.hpp"
#include "lexplain/evaluate.hpp"
#include "lexplain/explain.hpp"
#include "lexplain/grammar.hpp"
#include "lexplain/sketches.hpp"
#include "lexplain/thesaurus.hpp"
#include "lexplain/version.hpp"

namespace lexplain::cli {

namespace fs = std::filesystem;

inline std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

// Writes to --output when given, otherwise to out.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw DataError("cannot write '" + path + "'");
      stream_ = &file_;
    }
  }
  std::ostream& operator*() { return *stream_; }
  void close() {
    stream_->flush();
    if (!*stream_) throw DataError("write failed");
  }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

inline void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << content)) throw DataError("cannot write '" + path.string() + "'");
}

struct HeadSpec {
  std::string lemma;
  CoarsePos pos;
};

// One headword per line: lemma and POS separated by a tab or spaces.
inline std::vector<HeadSpec> read_headlist(const std::string& path) {
  std::istringstream in(read_file(path));
  std::vector<HeadSpec> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto t = detail::trim(line);
    if (t.empty() || t.front() == '#') continue;
    std::istringstream fields{std::string(t)};
    std::string lemma, pos, extra;
    fields >> lemma >> pos;
    if (pos.empty() || (fields >> extra))
      throw DataError("headlist line " + std::to_string(lineno) + ": expected 'lemma POS'");
    const auto p = try_parse_coarse_pos(pos);
    if (!p) throw DataError("headlist line " + std::to_string(lineno) + ": bad POS '" + pos + "'");
    out.push_back({lemma, *p});
  }
  if (out.empty()) throw DataError("headlist '" + path + "' is empty");
  return out;
}

inline std::string file_stem_for(const LemmaPos& lp) {
  std::string s = lp.lemma;
  for (char& c : s) {
    if (c == '/' || c == '\\' || c == '\0') c = '_';
  }
  return s + "." + std::string(to_string(lp.pos));
}

struct Loaded {
  Corpus corpus;
  Grammar grammar;
  SketchIndex index;
};

inline Loaded load_all(const Config& config, const std::string& corpus_path, const std::string& grammar_path,
                       unsigned jobs) {
  Loaded l{load_corpus(corpus_path, config.pos_map), parse_grammar(read_file(grammar_path)), {}};
  l.index = build_sketches(l.corpus, l.grammar, {config.min_pair_freq, config.score_mode, jobs});
  return l;
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Builds word explanations from word sketches of an annotated corpus.", "lexplain"};
  app.require_subcommand(0, 1);

  std::string config_path;
  unsigned jobs = 1;
  bool dump = false;
  app.add_option("--config", config_path, "Configuration file (key = value)")->check(CLI::ExistingFile);
  app.add_option("--jobs", jobs, "Worker threads")->check(CLI::Range(1u, 256u));
  app.add_flag("--dump-config", dump, "Print the effective configuration and exit");

  std::string corpus_path, grammar_path, output, input, query, head, pos_text, relation, format = "text";
  std::string headlist, outdir, explanations_dir, annotations_path;
  std::size_t limit = 3, thes_limit = 10;

  auto* version = app.add_subcommand("version", "Print the version");

  auto* ingest = app.add_subcommand("ingest", "Index a vertical-format corpus");
  ingest->add_option("--input", input, "Vertical text file")->required();
  ingest->add_option("--output", output, "Index file to write")->required();

  auto* gcheck = app.add_subcommand("grammar-check", "Parse a sketch grammar and report problems");
  gcheck->add_option("--grammar", grammar_path)->required();
  gcheck->add_option("--corpus", corpus_path, "Check tag patterns against this corpus");

  auto* cqlcmd = app.add_subcommand("cql", "Print matches of a CQL query as TSV");
  cqlcmd->add_option("--corpus", corpus_path)->required();
  cqlcmd->add_option("--query", query)->required();
  cqlcmd->add_option("--output", output);

  auto* sketch = app.add_subcommand("sketch", "Print the word sketch of a headword as TSV");
  sketch->add_option("--corpus", corpus_path)->required();
  sketch->add_option("--grammar", grammar_path)->required();
  sketch->add_option("--head", head)->required();
  sketch->add_option("--pos", pos_text)->required();
  sketch->add_option("--relation", relation, "Only this relation");
  sketch->add_option("--limit", limit, "Collocates per relation")->check(CLI::PositiveNumber);
  sketch->add_option("--output", output);

  auto* thes = app.add_subcommand("thesaurus", "Print distributional neighbours as TSV");
  thes->add_option("--corpus", corpus_path)->required();
  thes->add_option("--grammar", grammar_path)->required();
  thes->add_option("--head", head)->required();
  thes->add_option("--pos", pos_text)->required();
  thes->add_option("--limit", thes_limit)->check(CLI::PositiveNumber);
  thes->add_option("--output", output);

  auto* expl = app.add_subcommand("explain", "Compose explanations");
  expl->add_option("--corpus", corpus_path)->required();
  expl->add_option("--grammar", grammar_path)->required();
  auto* head_opt = expl->add_option("--head", head);
  auto* pos_opt = expl->add_option("--pos", pos_text);
  auto* list_opt = expl->add_option("--headlist", headlist, "File of 'lemma POS' lines");
  auto* dir_opt = expl->add_option("--outdir", outdir, "Directory for batch output");
  expl->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));
  expl->add_option("--output", output);
  head_opt->needs(pos_opt)->excludes(list_opt);
  list_opt->needs(dir_opt);

  auto* eval = app.add_subcommand("evaluate", "Indicator and quality reports over a batch of explanations");
  eval->add_option("--corpus", corpus_path)->required();
  eval->add_option("--explanations", explanations_dir, "Batch output directory (JSON format)")->required();
  eval->add_option("--annotations", annotations_path, "Manual annotation TSV");
  eval->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));
  eval->add_option("--output", output);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    Config config = config_path.empty() ? Config{} : load_config(config_path);
    if (dump) {
      out << dump_config(config);
      return 0;
    }

    if (*version) {
      out << "lexplain " << kVersion << '\n';
      return 0;
    }

    if (*ingest) {
      std::ifstream in(input, std::ios::binary);
      if (!in) throw DataError("cannot open '" + input + "'");
      const Corpus corpus = ingest_vertical(in, config.pos_map);
      std::ofstream f(output, std::ios::binary);
      if (!f) throw DataError("cannot write '" + output + "'");
      save_index(corpus, f);
      err << "indexed " << corpus.size() << " tokens, " << corpus.sentences().size() << " sentences\n";
      return 0;
    }

    if (*gcheck) {
      const Grammar g = parse_grammar(read_file(grammar_path));
      out << g.relations.size() << (g.relations.size() == 1 ? " relation\n" : " relations\n");
      if (!corpus_path.empty()) {
        const auto warnings = validate_against(g, load_corpus(corpus_path, config.pos_map));
        for (const auto& w : warnings) err << "warning: " << w << '\n';
      }
      return 0;
    }

    if (*cqlcmd) {
      const Corpus corpus = load_corpus(corpus_path, config.pos_map);
      const auto q = cql::parse_query(query);
      Sink sink(output, out);
      for (const auto& m : cql::find_matches(q, corpus, jobs)) {
        auto label = [&](int l) {
          const auto p = m.binding(l);
          return p ? std::to_string(*p) : std::string("-");
        };
        *sink << m.start << '\t' << m.end << '\t' << label(kHeadLabel) << '\t' << label(kCollocateLabel) << '\n';
      }
      sink.close();
      return 0;
    }

    if (*sketch) {
      const auto l = load_all(config, corpus_path, grammar_path, jobs);
      const LemmaPos hw{head, parse_coarse_pos(pos_text)};
      std::vector<std::string> relations;
      if (!relation.empty()) {
        if (!l.index.relation(relation)) throw UsageError("unknown relation '" + relation + "'");
        relations.push_back(relation);
      } else {
        for (const auto& r : l.index.relations()) {
          if (r.head_pos == hw.pos) relations.push_back(r.name);
        }
      }
      Sink sink(output, out);
      for (const auto& r : relations) {
        for (const auto& t : word_sketch(l.index, hw, r, limit))
          *sink << r << '\t' << t.collocate.lemma << '\t' << t.pair_freq << '\t' << fixed(t.score, 4) << '\n';
      }
      sink.close();
      return 0;
    }

    if (*thes) {
      const auto l = load_all(config, corpus_path, grammar_path, jobs);
      const LemmaPos hw{head, parse_coarse_pos(pos_text)};
      Sink sink(output, out);
      for (const auto& r : Thesaurus(l.index).similar(hw, thes_limit))
        *sink << r.neighbor.lemma << '\t' << fixed(r.similarity, 4) << '\n';
      sink.close();
      return 0;
    }

    if (*expl) {
      if (head.empty() && headlist.empty()) throw UsageError("explain needs --head/--pos or --headlist/--outdir");
      const auto l = load_all(config, corpus_path, grammar_path, jobs);
      const Thesaurus thesaurus(l.index);
      auto render = [&](const Explanation& e) {
        return format == "json" ? render_structured(e) : render_text(e);
      };

      if (!head.empty()) {
        const LemmaPos hw{head, parse_coarse_pos(pos_text)};
        const auto e = compose(hw, l.index, thesaurus, config.schema(hw.pos), config.quotas);
        if (!e) err << "no data for " << to_string(hw) << '\n';
        Sink sink(output, out);
        *sink << render(e.value_or(Explanation{hw, {}}));
        sink.close();
        return 0;
      }

      const auto heads = read_headlist(headlist);
      fs::create_directories(outdir);
      std::string index_tsv = "headword\tpos\tstatus\n";
      std::size_t produced = 0;
      for (const auto& h : heads) {
        const LemmaPos hw{h.lemma, h.pos};
        const auto e = compose(hw, l.index, thesaurus, config.schema(hw.pos), config.quotas);
        index_tsv += hw.lemma + "\t" + std::string(to_string(hw.pos)) + "\t" + (e ? "ok" : "no_data") + "\n";
        if (!e) continue;
        ++produced;
        write_file(fs::path(outdir) / (file_stem_for(hw) + (format == "json" ? ".json" : ".txt")), render(*e));
      }
      write_file(fs::path(outdir) / "index.tsv", index_tsv);
      err << produced << " of " << heads.size() << " headwords explained\n";
      return 0;
    }

    if (*eval) {
      const Corpus corpus = load_corpus(corpus_path, config.pos_map);
      const fs::path dir(explanations_dir);
      std::istringstream idx(read_file(dir / "index.tsv"));
      std::string line;
      std::getline(idx, line);
      if (line != "headword\tpos\tstatus") throw DataError("'" + (dir / "index.tsv").string() + "' has no header");

      std::vector<AnnotationRecord> annotations;
      if (!annotations_path.empty()) {
        std::istringstream a(read_file(annotations_path));
        annotations = parse_annotations(a);
      }
      auto find_annotation = [&](const LemmaPos& hw) -> const AnnotationRecord* {
        for (const auto& a : annotations) {
          if (a.headword == hw.lemma && a.pos == hw.pos) return &a;
        }
        return nullptr;
      };

      std::vector<bool> produced;
      std::map<CoarsePos, std::vector<bool>> produced_by_pos;
      std::vector<IndicatorSet> sets;
      const DetectOptions detect{config.infrequency_per_million, config.language};
      while (std::getline(idx, line)) {
        if (line.empty()) continue;
        const auto f = detail::split_tabs(line);
        if (f.size() != 3) throw DataError("index.tsv: malformed line '" + line + "'");
        const LemmaPos hw{std::string(f[0]), parse_coarse_pos(f[1])};
        const bool ok = f[2] == "ok";
        produced.push_back(ok);
        produced_by_pos[hw.pos].push_back(ok);
        if (!ok) continue;
        const auto e = parse_structured(read_file(dir / (file_stem_for(hw) + ".json")));
        sets.push_back(detect_indicators(e, corpus, detect, find_annotation(hw)));
      }

      const auto indicators = aggregate_indicators(sets);
      std::optional<RatioTable> quality;
      if (!annotations_path.empty()) quality = aggregate_quality(annotations);
      const auto coverage = coverage_rate(produced);

      Sink sink(output, out);
      if (format == "json") {
        nlohmann::ordered_json doc;
        doc["language"] = config.language;
        doc["coverage"]["all"] = to_json(coverage);
        for (const auto& [p, v] : produced_by_pos) doc["coverage"][std::string(to_string(p))] = to_json(coverage_rate(v));
        doc["indicators"] = to_json(indicators);
        doc["quality"] = quality ? to_json(*quality) : nlohmann::ordered_json(nullptr);
        doc["explanations"] = nlohmann::ordered_json::array();
        for (const auto& s : sets) doc["explanations"].push_back(to_json(s));
        *sink << doc.dump(2) << '\n';
      } else {
        *sink << "Coverage: " << coverage.percent() << "% (" << coverage.numerator << "/" << coverage.denominator
              << ")\n";
        for (const auto& [p, v] : produced_by_pos) {
          const auto r = coverage_rate(v);
          *sink << "  " << to_string(p) << ": " << r.percent() << "% (" << r.numerator << "/" << r.denominator << ")\n";
        }
        *sink << '\n' << render_table_text(indicators);
        if (quality) *sink << '\n' << render_table_text(*quality);
      }
      sink.close();
      return 0;
    }

    out << app.help();
    return 1;
  } catch (const UsageError& e) {
    err << "lexplain: " << e.what() << '\n';
    return 1;
  } catch (const DataError& e) {
    err << "lexplain: " << e.what() << '\n';
    return 2;
  } catch (const fs::filesystem_error& e) {
    err << "lexplain: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace lexplain::cli
