#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace equichroma {

using Vertex = std::uint32_t;

struct Edge {
  Vertex u;
  Vertex v;
  auto operator<=>(const Edge&) const = default;
};

enum class Surface { Planar, NonNegEuler };

std::string_view to_string(Surface surface);
std::optional<Surface> parse_surface(std::string_view text);

// Simple undirected graph on vertices 0..n-1. Neighbor lists are kept sorted.
class Graph {
 public:
  Graph() = default;
  explicit Graph(std::size_t n);

  // Throws InputError on self-loops, repeated edges or out-of-range ids.
  static Graph from_edges(std::size_t n, std::span<const Edge> edges);

  std::size_t num_vertices() const noexcept { return adj_.size(); }
  std::size_t num_edges() const noexcept { return m_; }
  std::size_t degree(Vertex v) const { return adj_[v].size(); }
  std::span<const Vertex> neighbors(Vertex v) const { return adj_[v]; }
  bool adjacent(Vertex u, Vertex v) const;

  std::size_t max_degree() const;
  std::size_t min_degree() const;

  Vertex add_vertex();
  // Returns false if the edge is already present. Throws InputError on a
  // self-loop or an out-of-range endpoint.
  bool add_edge(Vertex u, Vertex v);
  bool remove_edge(Vertex u, Vertex v);

  // All edges with u < v, sorted lexicographically.
  std::vector<Edge> edges() const;

  bool operator==(const Graph&) const = default;

 private:
  void check_vertex(Vertex v) const;

  std::vector<std::vector<Vertex>> adj_;
  std::size_t m_ = 0;
};

// Euler-formula edge bound for the surface: 3n-6 (planar), 2n-4 (planar
// bipartite), 3n (non-negative Euler characteristic), 2n (same, bipartite).
// Graphs with fewer than three vertices always pass.
bool surface_bounds_ok(const Graph& g, Surface surface, bool bipartite);

bool is_bipartite(const Graph& g);

struct DegreeWitness {
  Vertex vertex;
  std::size_t degree;
  bool operator==(const DegreeWitness&) const = default;
};

// Minimum degree over non-isolated vertices; lowest id on ties.
std::optional<DegreeWitness> min_nonisolated_degree(const Graph& g);

// Greedy minimum-residual-degree ordering. Fails as soon as the residual
// graph has minimum degree above `cap`.
std::optional<std::vector<Vertex>> elimination_order(const Graph& g, std::size_t cap);

// |E(X, Y)| for disjoint vertex sets. Throws PreconditionError on overlap.
std::size_t cut_edges_count(const Graph& g, std::span<const Vertex> xs, std::span<const Vertex> ys);

// True iff some three vertices have at least t common neighbours, i.e. G
// contains K_{3,t} as a subgraph.
bool has_k3t_subgraph(const Graph& g, std::size_t t);

// Subgraph induced by `keep`; vertex keep[i] becomes i.
Graph induced_subgraph(const Graph& g, std::span<const Vertex> keep);

}  // namespace equichroma
