#pragma once

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "pmelab/errors.hpp"
#include "pmelab/field.hpp"
#include "pmelab/graph.hpp"
#include "pmelab/solver.hpp"

namespace pmelab {

/// Decimal text with 17 significant digits; round-trips doubles.
inline std::string format_double(double x)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace detail {

inline double parse_double(std::string_view s, const std::string& what)
{
  std::string tmp(s);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(tmp, &used);
  } catch (const std::exception&) {
    throw ValidationError(what + ": cannot parse number '" + tmp + "'");
  }
  if (used != tmp.size())
    throw ValidationError(what + ": trailing characters in number '" + tmp + "'");
  return v;
}

inline int parse_int(std::string_view s, const std::string& what)
{
  int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw ValidationError(what + ": cannot parse integer '" + std::string(s) + "'");
  return v;
}

/// Splits non-comment content of a line into whitespace-separated tokens.
inline std::vector<std::string> tokens(const std::string& line)
{
  std::string body = line.substr(0, line.find('#'));
  std::istringstream in(body);
  std::vector<std::string> out;
  for (std::string t; in >> t;)
    out.push_back(t);
  return out;
}

inline std::ifstream open_input(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    throw ValidationError("cannot open '" + path + "'");
  return in;
}

} // namespace detail

/// Edge list: one `<vertex> <vertex> <weight>` per line, `#` starts a comment.
inline Graph read_edge_list(std::istream& in, bool symmetrize)
{
  std::vector<Edge> edges;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    const auto t = detail::tokens(line);
    if (t.empty())
      continue;
    if (t.size() != 3)
      throw ValidationError("edge list line " + std::to_string(lineno) +
                            ": expected '<vertex> <vertex> <weight>'");
    edges.push_back({t[0], t[1], detail::parse_double(t[2], "edge list line " +
                                                                  std::to_string(lineno))});
  }
  return build_graph(edges, symmetrize);
}

inline Graph load_edge_list(const std::string& path, bool symmetrize)
{
  auto in = detail::open_input(path);
  return read_edge_list(in, symmetrize);
}

/// Writes every positive kernel entry as a directed edge, preceded by one
/// zero-weight declaration per vertex so that reading the file back without
/// symmetrization reproduces vertex order and kernel exactly.
inline void write_edge_list(std::ostream& out, const Graph& g)
{
  out << "# " << g.size() << " vertices, " << g.directed_edge_count() << " kernel entries\n";
  for (Vertex x = 0; x < g.size(); ++x)
    out << g.id(x) << ' ' << g.id(x) << " 0\n";
  for (Vertex x = 0; x < g.size(); ++x)
    for (const auto& [y, w] : g.neighbors(x))
      out << g.id(x) << ' ' << g.id(y) << ' ' << format_double(w) << '\n';
}

/// `complete:D`, `path:n`, `square`, `zwindow:r`, or an edge-list file path.
inline Graph graph_from_spec(const std::string& spec, bool symmetrize = true)
{
  auto arg = [&](std::string_view prefix) -> std::optional<int> {
    if (spec.rfind(prefix, 0) != 0)
      return std::nullopt;
    return detail::parse_int(std::string_view(spec).substr(prefix.size()), "graph spec");
  };
  if (auto d = arg("complete:"))
    return complete_graph(*d);
  if (auto n = arg("path:"))
    return path_graph(*n);
  if (auto r = arg("zwindow:"))
    return lattice_window(*r);
  if (spec == "square")
    return square_graph();
  return load_edge_list(spec, symmetrize);
}

/// Initial data: `const:c`, `values:a,b,...` (vertex order), `random:lo:hi`
/// (seeded, uniform) or `file:path` with `<vertex> <value>` lines.
inline PositiveField parse_u0(const std::string& spec, const Graph& g, std::uint64_t seed)
{
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (kind == "const") {
    return PositiveField(g.size(), detail::parse_double(rest, "u0 const"));
  }
  if (kind == "values") {
    std::vector<double> v;
    std::stringstream ss(rest);
    for (std::string item; std::getline(ss, item, ',');)
      v.push_back(detail::parse_double(item, "u0 values"));
    if (v.size() != g.size())
      throw ValidationError("u0 values: expected " + std::to_string(g.size()) + " values, got " +
                            std::to_string(v.size()));
    return PositiveField(std::move(v));
  }
  if (kind == "random") {
    const auto c2 = rest.find(':');
    if (c2 == std::string::npos)
      throw ValidationError("u0 random: expected random:lo:hi");
    const double lo = detail::parse_double(rest.substr(0, c2), "u0 random");
    const double hi = detail::parse_double(rest.substr(c2 + 1), "u0 random");
    if (!(lo > 0.0) || !(lo <= hi))
      throw ValidationError("u0 random: need 0 < lo <= hi");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(lo, hi);
    std::vector<double> v(g.size());
    for (double& x : v)
      x = dist(rng);
    return PositiveField(std::move(v));
  }
  if (kind == "file") {
    auto in = detail::open_input(rest);
    std::vector<double> v(g.size(), -1.0);
    std::string line;
    for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
      const auto t = detail::tokens(line);
      if (t.empty())
        continue;
      if (t.size() != 2)
        throw ValidationError("u0 file line " + std::to_string(lineno) +
                              ": expected '<vertex> <value>'");
      v[g.index(t[0])] = detail::parse_double(t[1], "u0 file line " + std::to_string(lineno));
    }
    for (Vertex x = 0; x < g.size(); ++x)
      if (v[x] < 0.0)
        throw ValidationError("u0 file: no value for vertex '" + g.id(x) + "'");
    return PositiveField(std::move(v));
  }
  throw ValidationError("u0: unknown spec '" + spec +
                        "' (use const:c, values:a,b,.., random:lo:hi or file:path)");
}

/// Header `t,<vertex ids...>`, one row per reported time.
inline void write_trajectory_csv(std::ostream& out, const Trajectory& traj)
{
  out << 't';
  for (const auto& id : traj.graph().ids())
    out << ',' << id;
  out << '\n';
  for (std::size_t i = 0; i < traj.size(); ++i) {
    out << format_double(traj.times()[i]);
    for (double v : traj.states()[i])
      out << ',' << format_double(v);
    out << '\n';
  }
}

} // namespace pmelab
