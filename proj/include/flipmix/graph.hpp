#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace flipmix {

using Vertex = std::uint32_t;

/// Undirected edge, stored with u < v.
struct Edge {
  Vertex u = 0;
  Vertex v = 0;

  auto operator<=>(const Edge&) const = default;
};

/**
 * Simple connected undirected graph on vertices 0..n-1.
 *
 * Edges are canonicalized to (min, max) and sorted, so two graphs compare
 * equal exactly when they have the same vertex count and edge set. The
 * constructor rejects self-loops, duplicate edges, out-of-range endpoints,
 * edgeless graphs, and disconnected graphs.
 */
class Graph {
 public:
  Graph(std::size_t n, std::vector<Edge> edges);

  std::size_t num_vertices() const noexcept { return n_; }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  std::span<const Edge> edges() const noexcept { return edges_; }
  std::span<const Vertex> neighbors(Vertex v) const { return adjacency_.at(v); }
  std::size_t degree(Vertex v) const { return adjacency_.at(v).size(); }

  bool operator==(const Graph& other) const noexcept {
    return n_ == other.n_ && edges_ == other.edges_;
  }

 private:
  std::size_t n_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Vertex>> adjacency_;
};

/// Parses "n m" followed by m lines "u v". Blank lines are ignored.
Graph parse_graph(std::string_view text);

/// Canonical text form accepted by parse_graph.
std::string render_graph(const Graph& g);

Graph complete_graph(std::size_t n);
Graph cycle_graph(std::size_t n);
Graph path_graph(std::size_t n);
Graph complete_bipartite(std::size_t a, std::size_t b);
/// k-regular graph from the pairing model, restarting on loops, multi-edges
/// and disconnected outcomes. Deterministic in seed.
Graph random_regular(std::size_t n, std::size_t k, std::uint64_t seed);
/// Connected graph with m edges drawn uniformly without replacement,
/// restarting on disconnected outcomes. Deterministic in seed.
Graph random_connected(std::size_t n, std::size_t m, std::uint64_t seed);

/**
 * Builds a graph from a generator spec:
 *   complete:n  cycle:n  path:n  bipartite:a,b
 *   random_regular:n,k,seed  random_connected:n,m,seed
 */
Graph generate(std::string_view spec);

/// A generator spec if the family prefix is recognized, otherwise the path of
/// a graph text file.
Graph load_graph(std::string_view spec_or_path);

std::size_t min_degree(const Graph& g);
std::optional<std::size_t> regular_degree(const Graph& g);

}  // namespace flipmix
