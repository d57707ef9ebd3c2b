#include "equichroma/generators.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <string>
#include <unordered_map>
#include <vector>

#include "equichroma/errors.hpp"
#include "equichroma/rng.hpp"

namespace equichroma {

std::string_view to_string(Family family) {
  switch (family) {
    case Family::MaximalPlanar: return "maximal-planar";
    case Family::PlanarDegreeBounded: return "planar-degree-bounded";
    case Family::BipartitePlanar: return "bipartite-planar";
    case Family::Toroidal6Regular: return "toroidal-6-regular";
    case Family::ErdosRenyiCapped: return "erdos-renyi-capped";
  }
  return "?";
}

std::optional<Family> parse_family(std::string_view text) {
  for (Family f : {Family::MaximalPlanar, Family::PlanarDegreeBounded, Family::BipartitePlanar,
                   Family::Toroidal6Regular, Family::ErdosRenyiCapped}) {
    if (text == to_string(f)) return f;
  }
  return std::nullopt;
}

void cap_degree(Graph& g, std::size_t cap) {
  while (g.num_vertices() > 0 && g.max_degree() > cap) {
    Vertex u = 0;
    for (Vertex v = 0; v < g.num_vertices(); ++v) {
      if (g.degree(v) > g.degree(u)) u = v;
    }
    Vertex best = g.neighbors(u).front();
    for (Vertex w : g.neighbors(u)) {
      if (g.degree(w) > g.degree(best)) best = w;
    }
    g.remove_edge(u, best);
  }
}

namespace {

// Plane triangulation with, for every edge, the apexes of its two faces.
class Triangulation {
 public:
  explicit Triangulation(std::size_t n) : g_(n), n_(n) {}

  Graph& graph() { return g_; }

  void add_face_edges(Vertex a, Vertex b, Vertex c) {
    g_.add_edge(a, b);
    g_.add_edge(b, c);
    g_.add_edge(c, a);
  }

  void set_apexes(Vertex u, Vertex v, Vertex p, Vertex q) { apex_[key(u, v)] = {p, q}; }

  void replace_apex(Vertex u, Vertex v, Vertex from, Vertex to) {
    auto& ap = apex_.at(key(u, v));
    if (ap[0] == from) {
      ap[0] = to;
    } else if (ap[1] == from) {
      ap[1] = to;
    } else {
      throw std::logic_error("triangulation: apex bookkeeping broken");
    }
  }

  // Puts v inside face abc.
  void insert(Vertex v, Vertex a, Vertex b, Vertex c) {
    replace_apex(a, b, c, v);
    replace_apex(b, c, a, v);
    replace_apex(c, a, b, v);
    g_.add_edge(v, a);
    g_.add_edge(v, b);
    g_.add_edge(v, c);
    set_apexes(v, a, b, c);
    set_apexes(v, b, a, c);
    set_apexes(v, c, a, b);
  }

  // Replaces edge uv by the other diagonal of its two faces when that lowers
  // the degree above `cap` without pushing the apexes above it.
  bool try_flip(Vertex u, Vertex v, std::size_t cap) {
    const auto [w, z] = apex_.at(key(u, v));
    if (w == z || g_.adjacent(w, z)) return false;
    if (g_.degree(u) <= 3 || g_.degree(v) <= 3) return false;
    if (g_.degree(w) + 1 > cap || g_.degree(z) + 1 > cap) return false;
    g_.remove_edge(u, v);
    g_.add_edge(w, z);
    apex_.erase(key(u, v));
    replace_apex(u, w, v, z);
    replace_apex(v, w, u, z);
    replace_apex(u, z, v, w);
    replace_apex(v, z, u, w);
    set_apexes(w, z, u, v);
    return true;
  }

 private:
  std::uint64_t key(Vertex u, Vertex v) const {
    return static_cast<std::uint64_t>(std::min(u, v)) * n_ + std::max(u, v);
  }

  Graph g_;
  std::size_t n_;
  std::unordered_map<std::uint64_t, std::array<Vertex, 2>> apex_;
};

Graph maximal_planar(std::size_t n, Rng& rng, std::size_t flip_cap) {
  if (n < 3) throw InputError("maximal-planar needs n >= 3");
  Triangulation t(n);
  t.add_face_edges(0, 1, 2);
  t.set_apexes(0, 1, 2, 2);
  t.set_apexes(1, 2, 0, 0);
  t.set_apexes(2, 0, 1, 1);
  std::vector<std::array<Vertex, 3>> faces{{0, 1, 2}, {0, 1, 2}};
  for (Vertex v = 3; v < n; ++v) {
    const std::size_t i = rng.below(faces.size());
    const auto [a, b, c] = faces[i];
    t.insert(v, a, b, c);
    faces[i] = {a, b, v};
    faces.push_back({b, c, v});
    faces.push_back({c, a, v});
  }
  if (flip_cap != 0 && n >= 5) {
    for (int round = 0; round < 30; ++round) {
      bool changed = false;
      std::vector<Vertex> order(n);
      std::iota(order.begin(), order.end(), 0);
      rng.shuffle(order);
      for (Vertex u : order) {
        if (t.graph().degree(u) <= flip_cap) continue;
        std::vector<Vertex> nbrs(t.graph().neighbors(u).begin(), t.graph().neighbors(u).end());
        rng.shuffle(nbrs);
        for (Vertex v : nbrs) {
          if (t.graph().degree(u) <= flip_cap) break;
          changed = t.try_flip(u, v, flip_cap) || changed;
        }
      }
      if (!changed) break;
    }
  }
  return std::move(t.graph());
}

Graph bipartite_planar(std::size_t n, Rng& rng, std::size_t cap) {
  if (n < 4) throw InputError("bipartite-planar needs n >= 4");
  Graph g(n);
  for (Vertex v = 0; v < 4; ++v) g.add_edge(v, (v + 1) % 4);
  std::vector<std::array<Vertex, 4>> faces{{0, 1, 2, 3}, {0, 1, 2, 3}};
  for (Vertex v = 4; v < n; ++v) {
    std::size_t pick = rng.below(faces.size());
    bool rotate = false;
    for (int attempt = 0; attempt < 20; ++attempt) {
      const auto& f = faces[pick];
      const std::size_t ac = std::max(g.degree(f[0]), g.degree(f[2]));
      const std::size_t bd = std::max(g.degree(f[1]), g.degree(f[3]));
      rotate = bd < ac || (bd == ac && rng.below(2) == 1);
      if (cap == 0 || std::min(ac, bd) + 1 <= cap) break;
      pick = rng.below(faces.size());
    }
    auto f = faces[pick];
    if (rotate) f = {f[1], f[2], f[3], f[0]};
    const auto [a, b, c, d] = f;
    g.add_edge(v, a);
    g.add_edge(v, c);
    faces[pick] = {a, b, c, v};
    faces.push_back({c, d, a, v});
  }
  return g;
}

Graph toroidal(std::size_t n, Rng& rng) {
  std::vector<std::pair<std::size_t, std::size_t>> shapes;
  for (std::size_t w = 3; w * 3 <= n; ++w) {
    if (n % w == 0 && n / w >= 3) shapes.push_back({w, n / w});
  }
  if (shapes.empty()) throw InputError("toroidal-6-regular needs n = w*h with w, h >= 3");
  const auto [w, h] = shapes[rng.below(shapes.size())];
  std::vector<Vertex> label(n);
  std::iota(label.begin(), label.end(), 0);
  rng.shuffle(label);
  auto id = [&](std::size_t i, std::size_t j) { return label[(i % w) * h + (j % h)]; };
  Graph g(n);
  for (std::size_t i = 0; i < w; ++i) {
    for (std::size_t j = 0; j < h; ++j) {
      g.add_edge(id(i, j), id(i + 1, j));
      g.add_edge(id(i, j), id(i, j + 1));
      g.add_edge(id(i, j), id(i + 1, j + 1));
    }
  }
  return g;
}

Graph erdos_renyi(std::size_t n, Rng& rng, std::size_t cap) {
  Graph g(n);
  if (n < 2) return g;
  const std::uint64_t scale = 1'000'000;
  const std::size_t target = cap == 0 ? 4 : cap;
  const std::uint64_t p = std::min<std::uint64_t>(scale, scale * target / (n - 1));
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) {
      if (rng.below(scale) < p) g.add_edge(u, v);
    }
  }
  if (cap != 0) cap_degree(g, cap);
  return g;
}

}  // namespace

Graph generate(const GenSpec& spec) {
  Rng rng(spec.seed);
  switch (spec.family) {
    case Family::MaximalPlanar:
      return maximal_planar(spec.n, rng, 0);
    case Family::PlanarDegreeBounded: {
      if (spec.delta_cap < 3) throw InputError("planar-degree-bounded needs a degree cap >= 3");
      Graph g = maximal_planar(spec.n, rng, spec.delta_cap);
      cap_degree(g, spec.delta_cap);
      return g;
    }
    case Family::BipartitePlanar: {
      Graph g = bipartite_planar(spec.n, rng, spec.delta_cap);
      if (spec.delta_cap != 0) cap_degree(g, spec.delta_cap);
      return g;
    }
    case Family::Toroidal6Regular:
      return toroidal(spec.n, rng);
    case Family::ErdosRenyiCapped:
      return erdos_renyi(spec.n, rng, spec.delta_cap);
  }
  throw InputError("unknown family");
}

}  // namespace equichroma
