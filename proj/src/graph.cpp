#include "equichroma/graph.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <string>
#include <unordered_map>

#include "equichroma/errors.hpp"

namespace equichroma {

std::string_view to_string(Surface surface) {
  switch (surface) {
    case Surface::Planar:
      return "planar";
    case Surface::NonNegEuler:
      return "nonneg-euler";
  }
  return "?";
}

std::optional<Surface> parse_surface(std::string_view text) {
  if (text == "planar") return Surface::Planar;
  if (text == "nonneg-euler") return Surface::NonNegEuler;
  return std::nullopt;
}

Graph::Graph(std::size_t n) : adj_(n) {}

Graph Graph::from_edges(std::size_t n, std::span<const Edge> edges) {
  Graph g(n);
  for (const Edge& e : edges) {
    if (!g.add_edge(e.u, e.v)) {
      throw InputError("repeated edge " + std::to_string(e.u + 1) + " " + std::to_string(e.v + 1));
    }
  }
  return g;
}

void Graph::check_vertex(Vertex v) const {
  if (v >= adj_.size()) {
    throw InputError("vertex " + std::to_string(v + 1) + " out of range (n=" +
                     std::to_string(adj_.size()) + ")");
  }
}

bool Graph::adjacent(Vertex u, Vertex v) const {
  const auto& a = adj_[u].size() <= adj_[v].size() ? adj_[u] : adj_[v];
  const Vertex other = &a == &adj_[u] ? v : u;
  return std::binary_search(a.begin(), a.end(), other);
}

std::size_t Graph::max_degree() const {
  std::size_t best = 0;
  for (const auto& a : adj_) best = std::max(best, a.size());
  return best;
}

std::size_t Graph::min_degree() const {
  if (adj_.empty()) return 0;
  std::size_t best = adj_.front().size();
  for (const auto& a : adj_) best = std::min(best, a.size());
  return best;
}

Vertex Graph::add_vertex() {
  adj_.emplace_back();
  return static_cast<Vertex>(adj_.size() - 1);
}

bool Graph::add_edge(Vertex u, Vertex v) {
  check_vertex(u);
  check_vertex(v);
  if (u == v) throw InputError("self-loop at vertex " + std::to_string(u + 1));
  auto& au = adj_[u];
  auto it = std::lower_bound(au.begin(), au.end(), v);
  if (it != au.end() && *it == v) return false;
  au.insert(it, v);
  auto& av = adj_[v];
  av.insert(std::lower_bound(av.begin(), av.end(), u), u);
  ++m_;
  return true;
}

bool Graph::remove_edge(Vertex u, Vertex v) {
  check_vertex(u);
  check_vertex(v);
  auto& au = adj_[u];
  auto it = std::lower_bound(au.begin(), au.end(), v);
  if (it == au.end() || *it != v) return false;
  au.erase(it);
  auto& av = adj_[v];
  av.erase(std::lower_bound(av.begin(), av.end(), u));
  --m_;
  return true;
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(m_);
  for (Vertex u = 0; u < adj_.size(); ++u) {
    for (Vertex v : adj_[u]) {
      if (u < v) out.push_back({u, v});
    }
  }
  return out;
}

bool surface_bounds_ok(const Graph& g, Surface surface, bool bipartite) {
  const std::size_t n = g.num_vertices();
  if (n < 3) return true;
  std::size_t bound = 0;
  if (surface == Surface::Planar) {
    bound = bipartite ? 2 * n - 4 : 3 * n - 6;
  } else {
    bound = bipartite ? 2 * n : 3 * n;
  }
  return g.num_edges() <= bound;
}

bool is_bipartite(const Graph& g) {
  const std::size_t n = g.num_vertices();
  std::vector<int> side(n, -1);
  std::deque<Vertex> queue;
  for (Vertex start = 0; start < n; ++start) {
    if (side[start] != -1) continue;
    side[start] = 0;
    queue.push_back(start);
    while (!queue.empty()) {
      Vertex v = queue.front();
      queue.pop_front();
      for (Vertex w : g.neighbors(v)) {
        if (side[w] == -1) {
          side[w] = 1 - side[v];
          queue.push_back(w);
        } else if (side[w] == side[v]) {
          return false;
        }
      }
    }
  }
  return true;
}

std::optional<DegreeWitness> min_nonisolated_degree(const Graph& g) {
  std::optional<DegreeWitness> best;
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    const std::size_t d = g.degree(v);
    if (d == 0) continue;
    if (!best || d < best->degree) best = DegreeWitness{v, d};
  }
  return best;
}

std::optional<std::vector<Vertex>> elimination_order(const Graph& g, std::size_t cap) {
  const std::size_t n = g.num_vertices();
  std::vector<std::size_t> residual(n);
  std::set<std::pair<std::size_t, Vertex>> queue;
  for (Vertex v = 0; v < n; ++v) {
    residual[v] = g.degree(v);
    queue.insert({residual[v], v});
  }
  std::vector<bool> removed(n, false);
  std::vector<Vertex> order;
  order.reserve(n);
  while (!queue.empty()) {
    auto [d, v] = *queue.begin();
    if (d > cap) return std::nullopt;
    queue.erase(queue.begin());
    removed[v] = true;
    order.push_back(v);
    for (Vertex w : g.neighbors(v)) {
      if (removed[w]) continue;
      queue.erase({residual[w], w});
      --residual[w];
      queue.insert({residual[w], w});
    }
  }
  return order;
}

std::size_t cut_edges_count(const Graph& g, std::span<const Vertex> xs, std::span<const Vertex> ys) {
  std::vector<char> in_y(g.num_vertices(), 0);
  for (Vertex y : ys) in_y[y] = 1;
  for (Vertex x : xs) {
    if (in_y[x]) throw PreconditionError("cut_edges_count: sets overlap at vertex " + std::to_string(x + 1));
  }
  std::size_t count = 0;
  for (Vertex x : xs) {
    for (Vertex w : g.neighbors(x)) count += in_y[w];
  }
  return count;
}

bool has_k3t_subgraph(const Graph& g, std::size_t t) {
  const std::size_t n = g.num_vertices();
  std::unordered_map<Vertex, std::size_t> common;
  std::vector<Vertex> candidates;
  std::vector<Vertex> shared;
  for (Vertex a = 0; a < n; ++a) {
    if (g.degree(a) < t) continue;
    common.clear();
    for (Vertex mid : g.neighbors(a)) {
      for (Vertex b : g.neighbors(mid)) {
        if (b > a) ++common[b];
      }
    }
    candidates.clear();
    for (auto [b, c] : common) {
      if (c >= t) candidates.push_back(b);
    }
    std::sort(candidates.begin(), candidates.end());
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      const Vertex b = candidates[i];
      shared.clear();
      for (Vertex mid : g.neighbors(a)) {
        if (g.adjacent(mid, b)) shared.push_back(mid);
      }
      for (std::size_t j = i + 1; j < candidates.size(); ++j) {
        const Vertex c = candidates[j];
        std::size_t triple = 0;
        for (Vertex mid : shared) triple += g.adjacent(mid, c) ? 1 : 0;
        if (triple >= t) return true;
      }
    }
  }
  return false;
}

Graph induced_subgraph(const Graph& g, std::span<const Vertex> keep) {
  std::vector<std::int64_t> index(g.num_vertices(), -1);
  for (std::size_t i = 0; i < keep.size(); ++i) index[keep[i]] = static_cast<std::int64_t>(i);
  Graph sub(keep.size());
  for (std::size_t i = 0; i < keep.size(); ++i) {
    for (Vertex w : g.neighbors(keep[i])) {
      const std::int64_t j = index[w];
      if (j > static_cast<std::int64_t>(i)) sub.add_edge(static_cast<Vertex>(i), static_cast<Vertex>(j));
    }
  }
  return sub;
}

}  // namespace equichroma
