#pragma once

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"
#include "instance.hpp"

namespace mpsanneal {

// Shortest decimal text that parses back to the same double.
inline std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

inline std::optional<double> parse_double(std::string_view s) {
  double v = 0.0;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size()) return std::nullopt;
  return v;
}

inline std::optional<long> parse_long(std::string_view s) {
  long v = 0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size()) return std::nullopt;
  return v;
}

// Instance file:
//   ising v1 N=<n> topology=<chain|ladder16> delta=<f>
//   h <i> <value>          one per site
//   J <i> <j> <value>      one per edge
inline std::string serialize(const IsingInstance& instance) {
  std::string out = "ising v1 N=" + std::to_string(instance.size()) +
                    " topology=" + std::string(to_string(instance.topology())) +
                    " delta=" + format_double(instance.delta()) + "\n";
  for (std::size_t i = 0; i < instance.size(); ++i)
    out += "h " + std::to_string(i) + " " + format_double(instance.field(i)) + "\n";
  for (const auto& e : instance.edges())
    out += "J " + std::to_string(e.i) + " " + std::to_string(e.j) + " " +
           format_double(e.coupling) + "\n";
  return out;
}

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t' || line[pos] == '\r')) ++pos;
    std::size_t end = pos;
    while (end < line.size() && line[end] != ' ' && line[end] != '\t' && line[end] != '\r') ++end;
    if (end > pos) tokens.push_back(line.substr(pos, end - pos));
    pos = end;
  }
  return tokens;
}

inline std::string_view key_value(std::string_view token, std::string_view key, std::size_t line) {
  if (token.size() <= key.size() || token.substr(0, key.size()) != key || token[key.size()] != '=')
    throw ParseError(line, "expected " + std::string(key) + "=<value>, got '" + std::string(token) + "'");
  return token.substr(key.size() + 1);
}

}  // namespace detail

// Blank lines and lines starting with '#' are ignored.
inline IsingInstance parse_instance(std::string_view text) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool have_header = false;
  long n = 0;
  Topology topology = Topology::chain;
  double delta = 1.0;
  std::vector<std::optional<double>> fields;
  std::vector<Edge> edges;
  std::map<std::pair<long, long>, std::size_t> edge_lines;

  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    const auto tok = detail::split_ws(line);
    if (tok.empty() || tok[0].front() == '#') continue;

    if (!have_header) {
      if (tok.size() != 5 || tok[0] != "ising" || tok[1] != "v1")
        throw ParseError(line_no, "expected header 'ising v1 N=<n> topology=<t> delta=<f>'");
      auto nv = parse_long(detail::key_value(tok[2], "N", line_no));
      if (!nv || *nv < 1) throw ParseError(line_no, "N must be a positive integer");
      n = *nv;
      try {
        topology = topology_from_string(detail::key_value(tok[3], "topology", line_no));
      } catch (const ArgumentError& e) {
        throw ParseError(line_no, e.what());
      }
      auto dv = parse_double(detail::key_value(tok[4], "delta", line_no));
      if (!dv) throw ParseError(line_no, "delta is not a number");
      if (!(*dv > 0.0)) throw RangeError("line " + std::to_string(line_no) + ": delta must be positive");
      delta = *dv;
      fields.assign(static_cast<std::size_t>(n), std::nullopt);
      have_header = true;
      continue;
    }

    if (tok[0] == "h") {
      if (tok.size() != 3) throw ParseError(line_no, "expected 'h <i> <value>'");
      auto i = parse_long(tok[1]);
      auto v = parse_double(tok[2]);
      if (!i || !v) throw ParseError(line_no, "malformed field record");
      if (*i < 0 || *i >= n) throw StructureError("line " + std::to_string(line_no) + ": site index out of range");
      if (std::abs(*v) > max_abs_field || !std::isfinite(*v))
        throw RangeError("line " + std::to_string(line_no) + ": |h| exceeds 2");
      if (fields[*i]) throw StructureError("line " + std::to_string(line_no) + ": duplicate field record");
      fields[*i] = *v;
    } else if (tok[0] == "J") {
      if (tok.size() != 4) throw ParseError(line_no, "expected 'J <i> <j> <value>'");
      auto i = parse_long(tok[1]);
      auto j = parse_long(tok[2]);
      auto v = parse_double(tok[3]);
      if (!i || !j || !v) throw ParseError(line_no, "malformed coupling record");
      if (*i < 0 || *i >= n || *j < 0 || *j >= n)
        throw StructureError("line " + std::to_string(line_no) + ": site index out of range");
      if (std::abs(*v) > max_abs_coupling || !std::isfinite(*v))
        throw RangeError("line " + std::to_string(line_no) + ": |J| exceeds 1");
      const auto key = std::pair(std::min(*i, *j), std::max(*i, *j));
      if (auto it = edge_lines.find(key); it != edge_lines.end())
        throw StructureError("line " + std::to_string(line_no) + ": duplicate edge (first on line " +
                             std::to_string(it->second) + ")");
      edge_lines.emplace(key, line_no);
      edges.push_back({static_cast<int>(*i), static_cast<int>(*j), *v});
    } else {
      throw ParseError(line_no, "unknown record '" + std::string(tok[0]) + "'");
    }
  }
  if (!have_header) throw ParseError(line_no, "missing header");
  std::vector<double> h;
  h.reserve(fields.size());
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (!fields[i]) throw ParseError(line_no, "missing field record for site " + std::to_string(i));
    h.push_back(*fields[i]);
  }
  return IsingInstance(topology, std::move(h), std::move(edges), delta);
}

inline IsingInstance load_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path, "cannot open instance file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_instance(ss.str());
}

inline void save_instance(const IsingInstance& instance, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path, "cannot write instance file");
  out << serialize(instance);
  if (!out) throw IoError(path, "write failed");
}

}  // namespace mpsanneal
