#pragma once

// Flat key = value configuration shared by every CLI subcommand.
//
//   # comments start with '#'
//   pos_map = NN.* => N          repeatable, ordered; first match wins
//   min_pair_freq = 2
//   relation_top_k = 3
//   thesaurus_top_k = 5
//   infrequency_per_million = 5
//   score_mode = logdice         or rawfreq
//   language = en
//   template.N = builtin         or a schema file path, relative to this file

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>

#include "lexplain/corpus.hpp"
#include "lexplain/error.hpp"
#include "lexplain/explain.hpp"
#include "lexplain/grammar.hpp"
#include "lexplain/sketches.hpp"

namespace lexplain {

inline constexpr std::string_view kBuiltinTemplate = "builtin";

struct Config {
  PosMap pos_map = PosMap::penn();
  std::uint64_t min_pair_freq = 2;
  Quotas quotas;
  double infrequency_per_million = 5.0;
  ScoreMode score_mode = ScoreMode::logdice;
  std::string language = "en";
  std::map<CoarsePos, std::string> template_paths{{CoarsePos::N, std::string(kBuiltinTemplate)},
                                                  {CoarsePos::J, std::string(kBuiltinTemplate)},
                                                  {CoarsePos::V, std::string(kBuiltinTemplate)}};
  std::map<CoarsePos, Schema> schemas{{CoarsePos::N, default_schema(CoarsePos::N)},
                                      {CoarsePos::J, default_schema(CoarsePos::J)},
                                      {CoarsePos::V, default_schema(CoarsePos::V)}};

  const Schema& schema(CoarsePos pos) const {
    auto it = schemas.find(pos);
    if (it == schemas.end())
      throw UsageError("no explanation schema configured for POS " + std::string(to_string(pos)));
    return it->second;
  }
};

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace detail {

inline std::uint64_t parse_count(std::string_view key, std::string_view v) {
  std::uint64_t n = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), n);
  if (ec != std::errc() || p != v.data() + v.size() || n < 1)
    throw UsageError("config: " + std::string(key) + " must be an integer >= 1, got '" + std::string(v) + "'");
  return n;
}

inline std::string format_double(double d) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, d);
  return std::string(buf, p);
}

}  // namespace detail

inline Schema load_schema(const std::string& path, CoarsePos pos) {
  if (path == kBuiltinTemplate) return default_schema(pos);
  Schema s = parse_schema(read_file(path));
  if (s.pos != pos)
    throw UsageError("template '" + path + "' declares POS " + std::string(to_string(s.pos)) + ", expected " +
                     std::string(to_string(pos)));
  return s;
}

// Relative template paths resolve against base_dir.
inline Config parse_config(std::string_view text, const std::filesystem::path& base_dir = {}) {
  Config c;
  bool pos_map_seen = false;
  std::size_t lineno = 0, at = 0;
  while (at <= text.size()) {
    auto nl = text.find('\n', at);
    if (nl == std::string_view::npos) nl = text.size();
    const auto line = detail::trim(text.substr(at, nl - at));
    at = nl + 1;
    ++lineno;
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw UsageError("config line " + std::to_string(lineno) + ": expected key = value");
    const auto key = detail::trim(line.substr(0, eq));
    const auto value = detail::trim(line.substr(eq + 1));

    if (key == "pos_map") {
      const auto arrow = value.rfind("=>");
      if (arrow == std::string_view::npos)
        throw UsageError("config line " + std::to_string(lineno) + ": pos_map needs 'REGEX => POS'");
      if (!pos_map_seen) c.pos_map = PosMap{};
      pos_map_seen = true;
      c.pos_map.add(std::string(detail::trim(value.substr(0, arrow))),
                    parse_coarse_pos(detail::trim(value.substr(arrow + 2))));
    } else if (key == "min_pair_freq") {
      c.min_pair_freq = detail::parse_count(key, value);
    } else if (key == "relation_top_k") {
      c.quotas.relation_top_k = detail::parse_count(key, value);
    } else if (key == "thesaurus_top_k") {
      c.quotas.thesaurus_top_k = detail::parse_count(key, value);
    } else if (key == "infrequency_per_million") {
      double d = 0;
      auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), d);
      if (ec != std::errc() || p != value.data() + value.size() || !(d > 0))
        throw UsageError("config: infrequency_per_million must be a number > 0");
      c.infrequency_per_million = d;
    } else if (key == "score_mode") {
      c.score_mode = parse_score_mode(value);
    } else if (key == "language") {
      c.language = std::string(value);
    } else if (key.starts_with("template.")) {
      const auto pos = parse_coarse_pos(key.substr(9));
      std::string path(value);
      if (path != kBuiltinTemplate) {
        std::filesystem::path p(path);
        if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
        path = std::filesystem::absolute(p).lexically_normal().string();
      }
      c.schemas[pos] = load_schema(path, pos);
      c.template_paths[pos] = path;
    } else {
      throw UsageError("config line " + std::to_string(lineno) + ": unknown key '" + std::string(key) + "'");
    }
  }
  return c;
}

inline Config load_config(const std::filesystem::path& path) {
  return parse_config(read_file(path), path.parent_path());
}

// Effective configuration in the same format; parse_config(dump_config(c))
// reproduces c.
inline std::string dump_config(const Config& c) {
  std::ostringstream out;
  out << "# lexplain effective configuration\n";
  for (const auto& e : c.pos_map.entries()) out << "pos_map = " << e.pattern << " => " << to_string(e.pos) << '\n';
  out << "min_pair_freq = " << c.min_pair_freq << '\n'
      << "relation_top_k = " << c.quotas.relation_top_k << '\n'
      << "thesaurus_top_k = " << c.quotas.thesaurus_top_k << '\n'
      << "infrequency_per_million = " << detail::format_double(c.infrequency_per_million) << '\n'
      << "score_mode = " << to_string(c.score_mode) << '\n'
      << "language = " << c.language << '\n';
  for (const auto& [pos, path] : c.template_paths) out << "template." << to_string(pos) << " = " << path << '\n';
  return out.str();
}

}  // namespace lexplain
