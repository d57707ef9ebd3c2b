#include "equichroma/access.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <ostream>

#include "equichroma/errors.hpp"

namespace equichroma {

NeighborCounts::NeighborCounts(const Graph& g, const Coloring& c)
    : r_(c.num_classes()), data_(g.num_vertices() * c.num_classes(), 0) {
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    std::uint32_t* row = data_.data() + static_cast<std::size_t>(v) * r_;
    for (Vertex w : g.neighbors(v)) {
      const ClassIndex cw = c.class_of(w);
      if (cw != kUncolored) ++row[cw];
    }
  }
}

std::vector<ClassIndex> AuxDigraph::out_neighbors(ClassIndex i) const {
  std::vector<ClassIndex> out;
  for (std::size_t j = 0; j < r_; ++j) {
    if (has_arc(i, static_cast<ClassIndex>(j))) out.push_back(static_cast<ClassIndex>(j));
  }
  return out;
}

std::vector<ClassIndex> AuxDigraph::in_neighbors(ClassIndex j) const {
  std::vector<ClassIndex> out;
  for (std::size_t i = 0; i < r_; ++i) {
    if (has_arc(static_cast<ClassIndex>(i), j)) out.push_back(static_cast<ClassIndex>(i));
  }
  return out;
}

std::size_t AuxDigraph::arc_count() const {
  std::size_t count = 0;
  for (const auto& w : witnesses_) count += w.empty() ? 0 : 1;
  return count;
}

AuxDigraph build_aux(const Coloring& c, const NeighborCounts& counts) {
  const std::size_t r = c.num_classes();
  AuxDigraph h(r);
  for (std::size_t i = 0; i < r; ++i) {
    const auto ci = static_cast<ClassIndex>(i);
    for (Vertex v : c.members(ci)) {
      for (std::size_t j = 0; j < r; ++j) {
        if (j != i && counts(v, static_cast<ClassIndex>(j)) == 0) h.add_witness(ci, static_cast<ClassIndex>(j), v);
      }
    }
  }
  return h;
}

AuxDigraph build_aux(const AlmostEquitableState& state) {
  return build_aux(state.coloring, NeighborCounts(state.g(), state.coloring));
}

AuxDigraph build_aux_naive(const AlmostEquitableState& state) {
  const Coloring& c = state.coloring;
  const std::size_t r = c.num_classes();
  AuxDigraph h(r);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < r; ++j) {
      if (i == j) continue;
      for (Vertex v : c.members(static_cast<ClassIndex>(i))) {
        bool free = true;
        for (Vertex w : c.members(static_cast<ClassIndex>(j))) {
          if (state.g().adjacent(v, w)) {
            free = false;
            break;
          }
        }
        if (free) h.add_witness(static_cast<ClassIndex>(i), static_cast<ClassIndex>(j), v);
      }
    }
  }
  return h;
}

void dump_aux(std::ostream& out, const AuxDigraph& h) {
  const std::size_t r = h.num_classes();
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < r; ++j) {
      const auto ws = h.witnesses(static_cast<ClassIndex>(i), static_cast<ClassIndex>(j));
      if (ws.empty()) continue;
      out << i << " -> " << j << " : [";
      for (std::size_t k = 0; k < ws.size(); ++k) out << (k ? " " : "") << ws[k] + 1;
      out << "]\n";
    }
  }
}

AccessPartition accessible(const AuxDigraph& h, ClassIndex small) {
  const std::size_t r = h.num_classes();
  AccessPartition ap;
  ap.small = small;
  ap.in_a.assign(r, 0);
  ap.parent.assign(r, kUncolored);
  ap.dist.assign(r, -1);
  ap.dist[static_cast<std::size_t>(small)] = 0;
  std::vector<ClassIndex> layer{small};
  int depth = 0;
  while (!layer.empty()) {
    std::vector<ClassIndex> next;
    for (std::size_t j = 0; j < r; ++j) {
      if (ap.dist[j] != -1) continue;
      for (ClassIndex k : layer) {
        if (h.has_arc(static_cast<ClassIndex>(j), k)) {
          ap.dist[j] = depth + 1;
          ap.parent[j] = k;
          next.push_back(static_cast<ClassIndex>(j));
          break;
        }
      }
    }
    layer = std::move(next);
    ++depth;
  }
  for (std::size_t j = 0; j < r; ++j) {
    if (ap.dist[j] != -1) {
      ap.in_a[j] = 1;
      ap.a_classes.push_back(static_cast<ClassIndex>(j));
    } else {
      ap.b_classes.push_back(static_cast<ClassIndex>(j));
    }
  }
  return ap;
}

std::vector<char> reaches_without(const AuxDigraph& h, ClassIndex target, ClassIndex removed) {
  const std::size_t r = h.num_classes();
  std::vector<char> seen(r, 0);
  if (target == removed) return seen;
  seen[static_cast<std::size_t>(target)] = 1;
  std::deque<ClassIndex> queue{target};
  while (!queue.empty()) {
    const ClassIndex k = queue.front();
    queue.pop_front();
    for (std::size_t j = 0; j < r; ++j) {
      const auto cj = static_cast<ClassIndex>(j);
      if (!seen[j] && cj != removed && h.has_arc(cj, k)) {
        seen[j] = 1;
        queue.push_back(cj);
      }
    }
  }
  return seen;
}

bool blocks(const AuxDigraph& h, const AccessPartition& ap, ClassIndex x, ClassIndex y) {
  if (x == y || !ap.accessible(x) || !ap.accessible(y)) return false;
  return !reaches_without(h, ap.small, x)[static_cast<std::size_t>(y)];
}

std::vector<ClassIndex> terminal_classes(const AuxDigraph& h, const AccessPartition& ap) {
  std::vector<ClassIndex> out;
  for (ClassIndex x : ap.a_classes) {
    const auto reach = reaches_without(h, ap.small, x);
    bool terminal = true;
    for (ClassIndex y : ap.a_classes) {
      if (y != x && !reach[static_cast<std::size_t>(y)]) {
        terminal = false;
        break;
      }
    }
    if (terminal) out.push_back(x);
  }
  return out;
}

std::vector<std::vector<ClassIndex>> strong_components(const AuxDigraph& h, std::span<const ClassIndex> subset) {
  const std::size_t r = h.num_classes();
  std::vector<char> allowed(r, subset.empty() ? 1 : 0);
  for (ClassIndex c : subset) allowed[static_cast<std::size_t>(c)] = 1;

  std::vector<int> index(r, -1), low(r, 0);
  std::vector<char> on_stack(r, 0);
  std::vector<ClassIndex> stack;
  std::vector<std::vector<ClassIndex>> comps;
  int counter = 0;

  std::function<void(ClassIndex)> visit = [&](ClassIndex v) {
    const auto vi = static_cast<std::size_t>(v);
    index[vi] = low[vi] = counter++;
    stack.push_back(v);
    on_stack[vi] = 1;
    for (std::size_t w = 0; w < r; ++w) {
      if (!allowed[w] || !h.has_arc(v, static_cast<ClassIndex>(w))) continue;
      if (index[w] == -1) {
        visit(static_cast<ClassIndex>(w));
        low[vi] = std::min(low[vi], low[w]);
      } else if (on_stack[w]) {
        low[vi] = std::min(low[vi], index[w]);
      }
    }
    if (low[vi] == index[vi]) {
      std::vector<ClassIndex> comp;
      ClassIndex w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[static_cast<std::size_t>(w)] = 0;
        comp.push_back(w);
      } while (w != v);
      std::sort(comp.begin(), comp.end());
      comps.push_back(std::move(comp));
    }
  };
  for (std::size_t v = 0; v < r; ++v) {
    if (allowed[v] && index[v] == -1) visit(static_cast<ClassIndex>(v));
  }
  // Tarjan emits sinks first.
  std::reverse(comps.begin(), comps.end());
  return comps;
}

std::vector<ClassIndex> find_class_path(const AuxDigraph& h, std::span<const ClassIndex> sources, ClassIndex target,
                                        std::span<const char> allowed) {
  const std::size_t r = h.num_classes();
  std::vector<int> dist(r, -1);
  const auto ti = static_cast<std::size_t>(target);
  if (!allowed[ti]) return {};
  dist[ti] = 0;
  std::vector<ClassIndex> layer{target};
  int depth = 0;
  while (!layer.empty()) {
    std::vector<ClassIndex> next;
    for (std::size_t j = 0; j < r; ++j) {
      if (dist[j] != -1 || !allowed[j]) continue;
      for (ClassIndex k : layer) {
        if (h.has_arc(static_cast<ClassIndex>(j), k)) {
          dist[j] = depth + 1;
          next.push_back(static_cast<ClassIndex>(j));
          break;
        }
      }
    }
    layer = std::move(next);
    ++depth;
  }
  std::optional<ClassIndex> start;
  for (ClassIndex src : sources) {
    const int d = dist[static_cast<std::size_t>(src)];
    if (d == -1) continue;
    if (!start || d < dist[static_cast<std::size_t>(*start)] ||
        (d == dist[static_cast<std::size_t>(*start)] && src < *start)) {
      start = src;
    }
  }
  if (!start) return {};
  std::vector<ClassIndex> path{*start};
  while (path.back() != target) {
    const ClassIndex cur = path.back();
    const int d = dist[static_cast<std::size_t>(cur)];
    for (std::size_t k = 0; k < r; ++k) {
      if (dist[k] == d - 1 && h.has_arc(cur, static_cast<ClassIndex>(k))) {
        path.push_back(static_cast<ClassIndex>(k));
        break;
      }
    }
  }
  return path;
}

std::vector<ClassIndex> d_of_x(const AlmostEquitableState& state) {
  const std::size_t r = state.r();
  std::vector<char> hit(r, 0);
  for (Vertex w : state.g().neighbors(state.x)) {
    const ClassIndex c = state.coloring.class_of(w);
    if (c != kUncolored) hit[static_cast<std::size_t>(c)] = 1;
  }
  std::vector<ClassIndex> out;
  for (std::size_t i = 0; i < r; ++i) {
    if (!hit[i]) out.push_back(static_cast<ClassIndex>(i));
  }
  return out;
}

std::vector<Vertex> movable_set(const AuxDigraph& h, ClassIndex from, ClassIndex to) {
  if (from == to) throw PreconditionError("movable_set: from == to");
  const auto ws = h.witnesses(from, to);
  return {ws.begin(), ws.end()};
}

namespace {

std::uint32_t count_in_class(const AlmostEquitableState& state, Vertex u, ClassIndex c) {
  std::uint32_t count = 0;
  for (Vertex w : state.g().neighbors(u)) count += state.coloring.class_of(w) == c ? 1 : 0;
  return count;
}

}  // namespace

SoloProfile solo_profile(const AlmostEquitableState& state, const AccessPartition& ap, Vertex v) {
  const Coloring& c = state.coloring;
  const ClassIndex home = c.class_of(v);
  if (home == kUncolored) throw PreconditionError("solo_profile: vertex is uncolored");
  if (!ap.accessible(home)) throw PreconditionError("solo_profile: vertex lies in a B class");
  SoloProfile p;
  p.v = v;
  std::vector<char> touched(state.r(), 0);
  for (Vertex u : state.g().neighbors(v)) {
    const ClassIndex cu = c.class_of(u);
    if (cu == kUncolored) continue;
    touched[static_cast<std::size_t>(cu)] = 1;
    if (!ap.accessible(cu) && count_in_class(state, u, home) == 1) p.q.push_back(u);
  }
  for (Vertex u : p.q) {
    for (Vertex u2 : p.q) {
      if (u2 != u && !state.g().adjacent(u, u2)) {
        p.q_prime.push_back(u);
        break;
      }
    }
  }
  for (ClassIndex b : ap.b_classes) {
    if (!touched[static_cast<std::size_t>(b)]) p.f0.push_back(b);
  }
  return p;
}

Rational weighted_solo_score(const AlmostEquitableState& state, const AccessPartition& ap, Vertex v,
                             std::span<const ClassIndex> halved) {
  const Coloring& c = state.coloring;
  const ClassIndex home = c.class_of(v);
  if (home == kUncolored || !ap.accessible(home)) {
    throw PreconditionError("weighted_solo_score: vertex must lie in an accessible class");
  }
  Rational total(0);
  for (Vertex u : state.g().neighbors(v)) {
    const ClassIndex cu = c.class_of(u);
    if (cu == kUncolored || ap.accessible(cu)) continue;
    Rational term(1, static_cast<std::int64_t>(count_in_class(state, u, home)));
    if (std::find(halved.begin(), halved.end(), cu) != halved.end()) term /= 2;
    total += term;
  }
  return total;
}

bool is_ordinary(const AlmostEquitableState& state, const AuxDigraph& h, const AccessPartition& ap,
                 std::span<const ClassIndex> terminal, Vertex v) {
  const ClassIndex home = state.coloring.class_of(v);
  if (home == kUncolored || std::find(terminal.begin(), terminal.end(), home) == terminal.end()) return false;
  if (ap.a() <= 2) return true;
  for (ClassIndex z : ap.a_classes) {
    if (z == home) continue;
    for (Vertex w : h.witnesses(home, z)) {
      if (w != v) return true;
    }
  }
  return false;
}

bool Analysis::is_terminal(ClassIndex c) const {
  return std::find(terminal.begin(), terminal.end(), c) != terminal.end();
}

Analysis analyze(const AlmostEquitableState& state) {
  Analysis an;
  an.counts = NeighborCounts(state.g(), state.coloring);
  an.h = build_aux(state.coloring, an.counts);
  an.ap = accessible(an.h, state.small);
  an.terminal = terminal_classes(an.h, an.ap);
  return an;
}

SoloDiagnostics solo_diagnostics(const AlmostEquitableState& state, const Analysis& an) {
  SoloDiagnostics d;
  const Coloring& c = state.coloring;
  for (ClassIndex home : an.ap.a_classes) {
    for (Vertex v : c.members(home)) {
      ++d.vertices_checked;
      std::vector<Vertex> q;
      for (Vertex u : state.g().neighbors(v)) {
        const ClassIndex cu = c.class_of(u);
        if (cu != kUncolored && !an.ap.accessible(cu) && an.counts(u, home) == 1) q.push_back(u);
      }
      std::size_t q_prime = 0;
      for (Vertex u : q) {
        for (Vertex u2 : q) {
          if (u2 != u && !state.g().adjacent(u, u2)) {
            ++q_prime;
            break;
          }
        }
      }
      const std::size_t qs = q.size();
      if ((qs >= 8 && q_prime < 5) || (qs == 7 && q_prime < 4)) ++d.semi_planar_violations;
      if (qs >= 5 && q_prime + 1 < qs) ++d.planar_violations;
    }
  }
  for (ClassIndex b : an.ap.b_classes) {
    for (ClassIndex a : an.ap.a_classes) {
      std::size_t cut = 0;
      for (Vertex u : c.members(b)) cut += an.counts(u, a);
      if (cut < state.s) ++d.cut_violations;
    }
  }
  return d;
}

}  // namespace equichroma
