#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <deque>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "pmelab/errors.hpp"

namespace pmelab {

/// Dense index of a vertex inside a Graph (position in insertion order).
using Vertex = std::size_t;
using VertexId = std::string;

struct Edge
{
  VertexId from;
  VertexId to;
  double weight = 1.0;
};

struct Neighbor
{
  Vertex vertex;
  double weight;
};

/// Finite weighted directed graph given by a nonnegative kernel k(x, y).
///
/// Vertices carry opaque string ids and are indexed in insertion order. The
/// kernel is stored as sorted adjacency lists holding only positive entries;
/// k(x, x) is always zero. Immutable after construction.
class Graph
{
public:
  Graph(std::vector<VertexId> ids, std::vector<std::vector<Neighbor>> adjacency)
    : ids_(std::move(ids)), adjacency_(std::move(adjacency))
  {
    if (ids_.size() != adjacency_.size())
      throw ValidationError("graph: id list and adjacency list differ in size");
    for (Vertex i = 0; i < ids_.size(); ++i) {
      if (!index_.emplace(ids_[i], i).second)
        throw ValidationError("graph: duplicate vertex id '" + ids_[i] + "'");
    }
    bool nontrivial = false;
    for (Vertex x = 0; x < adjacency_.size(); ++x) {
      auto& row = adjacency_[x];
      std::sort(row.begin(), row.end(),
                [](const Neighbor& a, const Neighbor& b) { return a.vertex < b.vertex; });
      for (std::size_t j = 0; j < row.size(); ++j) {
        const auto& [y, w] = row[j];
        if (y >= ids_.size())
          throw ValidationError("graph: neighbor index out of range");
        if (!std::isfinite(w) || w <= 0.0)
          throw ValidationError("graph: adjacency weights must be finite and positive");
        if (y == x)
          throw ValidationError("graph: positive self-loop at '" + ids_[x] + "'");
        if (j > 0 && row[j - 1].vertex == y)
          throw ValidationError("graph: repeated adjacency entry");
      }
      nontrivial = nontrivial || !row.empty();
    }
    if (!nontrivial)
      throw ValidationError("graph: kernel is identically zero");

    symmetric_ = true;
    for (Vertex x = 0; x < adjacency_.size() && symmetric_; ++x) {
      for (const auto& [y, w] : adjacency_[x]) {
        if (kernel(y, x) != w) {
          symmetric_ = false;
          break;
        }
      }
    }
  }

  std::size_t size() const noexcept { return ids_.size(); }
  const std::vector<VertexId>& ids() const noexcept { return ids_; }
  const VertexId& id(Vertex x) const { return ids_.at(x); }

  std::optional<Vertex> find(std::string_view id) const
  {
    auto it = index_.find(std::string(id));
    if (it == index_.end())
      return std::nullopt;
    return it->second;
  }

  Vertex index(std::string_view id) const
  {
    if (auto v = find(id))
      return *v;
    throw ValidationError("graph: unknown vertex '" + std::string(id) + "'");
  }

  std::span<const Neighbor> neighbors(Vertex x) const { return adjacency_.at(x); }

  double kernel(Vertex x, Vertex y) const
  {
    const auto& row = adjacency_.at(x);
    auto it = std::lower_bound(row.begin(), row.end(), y,
                               [](const Neighbor& n, Vertex v) { return n.vertex < v; });
    return (it != row.end() && it->vertex == y) ? it->weight : 0.0;
  }

  double degree(Vertex x) const
  {
    double s = 0.0;
    for (const auto& n : neighbors(x))
      s += n.weight;
    return s;
  }

  bool symmetric() const noexcept { return symmetric_; }

  /// Number of positive kernel entries k(x, y).
  std::size_t directed_edge_count() const noexcept
  {
    std::size_t n = 0;
    for (const auto& row : adjacency_)
      n += row.size();
    return n;
  }

  /// Number of unordered pairs {x, y} with k(x, y) > 0 or k(y, x) > 0.
  std::size_t undirected_edge_count() const
  {
    std::size_t n = 0;
    for (Vertex x = 0; x < size(); ++x)
      for (const auto& [y, w] : adjacency_[x])
        if (x < y || kernel(y, x) == 0.0)
          ++n;
    return n;
  }

private:
  std::vector<VertexId> ids_;
  std::vector<std::vector<Neighbor>> adjacency_;
  std::unordered_map<std::string, Vertex> index_;
  bool symmetric_ = false;
};

/// Builds a graph from an edge list. Vertices are numbered in order of first
/// appearance. Later entries for the same ordered pair overwrite earlier ones;
/// with `symmetrize` every listed edge also assigns k(to, from). Zero weights
/// only declare vertices.
inline Graph build_graph(std::span<const Edge> edges, bool symmetrize)
{
  std::vector<VertexId> ids;
  std::unordered_map<std::string, Vertex> index;
  auto intern = [&](const VertexId& id) {
    if (id.empty())
      throw ValidationError("build_graph: empty vertex id");
    for (char c : id)
      if (std::isspace(static_cast<unsigned char>(c)) || c == '#')
        throw ValidationError("build_graph: vertex id '" + id + "' contains whitespace or '#'");
    auto [it, inserted] = index.emplace(id, ids.size());
    if (inserted)
      ids.push_back(id);
    return it->second;
  };

  std::vector<std::unordered_map<Vertex, double>> rows;
  for (const auto& e : edges) {
    if (!std::isfinite(e.weight) || e.weight < 0.0)
      throw ValidationError("build_graph: weight of edge (" + e.from + ", " + e.to +
                            ") must be finite and nonnegative");
    const Vertex a = intern(e.from);
    const Vertex b = intern(e.to);
    if (a == b) {
      if (e.weight > 0.0)
        throw ValidationError("build_graph: positive self-loop at '" + e.from + "'");
      continue;
    }
    rows.resize(ids.size());
    rows[a][b] = e.weight;
    if (symmetrize)
      rows[b][a] = e.weight;
  }
  rows.resize(ids.size());

  std::vector<std::vector<Neighbor>> adjacency(ids.size());
  for (Vertex x = 0; x < ids.size(); ++x)
    for (const auto& [y, w] : rows[x])
      if (w > 0.0)
        adjacency[x].push_back({y, w});
  return Graph(std::move(ids), std::move(adjacency));
}

inline Graph build_graph(std::initializer_list<Edge> edges, bool symmetrize)
{
  return build_graph(std::span<const Edge>(edges.begin(), edges.size()), symmetrize);
}

/// Unweighted complete graph on vertices x1..xD.
inline Graph complete_graph(int D)
{
  if (D < 2)
    throw ValidationError("complete_graph: need D >= 2");
  std::vector<Edge> edges;
  for (int i = 1; i <= D; ++i)
    for (int j = i + 1; j <= D; ++j)
      edges.push_back({"x" + std::to_string(i), "x" + std::to_string(j), 1.0});
  return build_graph(edges, true);
}

/// Unweighted chain 1 - 2 - ... - n.
inline Graph path_graph(int n)
{
  if (n < 2)
    throw ValidationError("path_graph: need n >= 2");
  std::vector<Edge> edges;
  for (int i = 1; i < n; ++i)
    edges.push_back({std::to_string(i), std::to_string(i + 1), 1.0});
  return build_graph(edges, true);
}

/// The 4-cycle x - y1 - z - y2 - x.
inline Graph square_graph()
{
  return build_graph({{"x", "y1", 1.0}, {"x", "y2", 1.0}, {"z", "y1", 1.0}, {"z", "y2", 1.0}},
                     true);
}

/// Window {-r, ..., r} of the integer lattice with unit nearest-neighbor
/// edges. Only the center vertex "0" sees its full two-hop neighborhood.
inline Graph lattice_window(int radius)
{
  if (radius < 2)
    throw ValidationError("lattice_window: need radius >= 2");
  std::vector<Edge> edges;
  for (int i = -radius; i < radius; ++i)
    edges.push_back({std::to_string(i), std::to_string(i + 1), 1.0});
  return build_graph(edges, true);
}

/// BFS hop counts from `source` along positive kernel entries; -1 marks
/// unreachable vertices.
inline std::vector<int> hop_distances(const Graph& g, Vertex source)
{
  std::vector<int> dist(g.size(), -1);
  std::deque<Vertex> queue{source};
  dist.at(source) = 0;
  while (!queue.empty()) {
    const Vertex x = queue.front();
    queue.pop_front();
    for (const auto& [y, w] : g.neighbors(x)) {
      if (dist[y] < 0) {
        dist[y] = dist[x] + 1;
        queue.push_back(y);
      }
    }
  }
  return dist;
}

inline bool is_connected(const Graph& g)
{
  const auto dist = hop_distances(g, 0);
  return std::none_of(dist.begin(), dist.end(), [](int d) { return d < 0; });
}

/// Minimal number of edges on a path from x to y in a symmetric graph.
inline int graph_distance(const Graph& g, Vertex x, Vertex y)
{
  if (!g.symmetric())
    throw ValidationError("graph_distance: graph must be symmetric");
  const int d = hop_distances(g, x).at(y);
  if (d < 0)
    throw NoPathError("graph_distance: no path from '" + g.id(x) + "' to '" + g.id(y) + "'");
  return d;
}

/// Smallest positive kernel entry.
inline double k_min(const Graph& g)
{
  double best = std::numeric_limits<double>::infinity();
  for (Vertex x = 0; x < g.size(); ++x)
    for (const auto& n : g.neighbors(x))
      best = std::min(best, n.weight);
  return best;
}

/// {x} together with all vertices reachable from x in at most two steps;
/// exactly the support of the curvature operators at x. Sorted by index.
inline std::vector<Vertex> two_hop_ball(const Graph& g, Vertex x)
{
  std::vector<char> in(g.size(), 0);
  in.at(x) = 1;
  for (const auto& [y, w] : g.neighbors(x)) {
    in[y] = 1;
    for (const auto& n : g.neighbors(y))
      in[n.vertex] = 1;
  }
  std::vector<Vertex> ball;
  for (Vertex v = 0; v < g.size(); ++v)
    if (in[v])
      ball.push_back(v);
  return ball;
}

/// Sequence y0, ..., yN of pairwise distinct vertices with k(y_{i-1}, y_i) > 0.
class VertexPath
{
public:
  VertexPath(const Graph& g, std::vector<Vertex> points) : points_(std::move(points))
  {
    if (points_.size() < 2)
      throw ValidationError("VertexPath: need at least one edge");
    std::vector<Vertex> sorted = points_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw ValidationError("VertexPath: points must be pairwise distinct");
    for (std::size_t i = 1; i < points_.size(); ++i) {
      if (points_[i] >= g.size() || g.kernel(points_[i - 1], points_[i]) <= 0.0)
        throw ValidationError("VertexPath: consecutive points must be joined by an edge");
    }
  }

  std::span<const Vertex> points() const noexcept { return points_; }
  std::size_t length() const noexcept { return points_.size() - 1; }
  Vertex front() const noexcept { return points_.front(); }
  Vertex back() const noexcept { return points_.back(); }

private:
  std::vector<Vertex> points_;
};

/// All simple paths from `from` to `to` with at most `max_length` edges.
inline std::vector<VertexPath> simple_paths(const Graph& g, Vertex from, Vertex to,
                                            std::size_t max_length)
{
  std::vector<VertexPath> out;
  if (from == to)
    return out;
  std::vector<Vertex> stack{from};
  std::vector<char> used(g.size(), 0);
  used.at(from) = 1;
  std::function<void()> extend = [&]() {
    const Vertex tip = stack.back();
    for (const auto& [y, w] : g.neighbors(tip)) {
      if (used[y])
        continue;
      if (y == to) {
        stack.push_back(y);
        out.emplace_back(g, stack);
        stack.pop_back();
        continue;
      }
      if (stack.size() < max_length) {
        used[y] = 1;
        stack.push_back(y);
        extend();
        stack.pop_back();
        used[y] = 0;
      }
    }
  };
  if (max_length >= 1)
    extend();
  return out;
}

} // namespace pmelab
