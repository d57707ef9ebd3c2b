#include "equichroma/solver.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <ostream>
#include <set>
#include <stdexcept>
#include <unordered_set>

#include "equichroma/dump.hpp"
#include "equichroma/errors.hpp"
#include "equichroma/oracle.hpp"
#include "equichroma/rng.hpp"

namespace equichroma {

namespace {

bool is_six_regular(const Graph& g) { return g.num_vertices() > 0 && g.min_degree() == 6 && g.max_degree() == 6; }

std::size_t degree_bound(Surface surface) { return surface == Surface::Planar ? 5 : 6; }

void check_final(const Graph& g, const Coloring& c, std::size_t r) {
  const Verdict v = verify(g, c, r);
  if (!v.proper || !v.equitable) throw std::logic_error("solver produced an unverified coloring");
}

}  // namespace

Reduction pad_to_multiple(const Graph& g, std::size_t r) {
  const std::size_t n = g.num_vertices();
  const std::size_t p = (r - n % r) % r;
  Reduction red;
  red.plan.original_n = n;
  red.plan.r = r;
  red.plan.padded = p;
  red.reduced = g;
  for (std::size_t i = 0; i < p; ++i) red.reduced.add_vertex();
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = i + 1; j < p; ++j) red.reduced.add_edge(static_cast<Vertex>(n + i), static_cast<Vertex>(n + j));
  }
  return red;
}

std::optional<Reduction> reduce_divisibility(const Graph& g, std::size_t r) {
  if (r == 0) throw PreconditionError("reduce_divisibility: r must be positive");
  const std::size_t n = g.num_vertices();
  const std::size_t p = (r - n % r) % r;
  if (p <= 4) return pad_to_multiple(g, r);

  // Greedy minimum residual degree for the first r - p vertices only.
  const std::size_t k = r - p;
  std::vector<std::size_t> residual(n);
  std::set<std::pair<std::size_t, Vertex>> queue;
  for (Vertex v = 0; v < n; ++v) {
    residual[v] = g.degree(v);
    queue.insert({residual[v], v});
  }
  std::vector<char> removed(n, 0);
  Reduction red;
  red.plan.original_n = n;
  red.plan.r = r;
  for (std::size_t j = 0; j < k; ++j) {
    auto [d, v] = *queue.begin();
    if (d > (j == 0 ? 5U : 6U)) return std::nullopt;
    queue.erase(queue.begin());
    removed[v] = 1;
    red.plan.stripped.push_back(v);
    for (Vertex w : g.neighbors(v)) {
      if (removed[w]) continue;
      queue.erase({residual[w], w});
      --residual[w];
      queue.insert({residual[w], w});
    }
  }
  for (Vertex v = 0; v < n; ++v) {
    if (!removed[v]) red.plan.kept.push_back(v);
  }
  red.reduced = induced_subgraph(g, red.plan.kept);
  return red;
}

Coloring restore(const Graph& g, const RestorePlan& plan, const Coloring& reduced) {
  const std::size_t r = plan.r;
  if (reduced.num_classes() != r) throw PreconditionError("restore: class count mismatch");
  Coloring out(g.num_vertices(), r);
  if (plan.stripped.empty()) {
    if (reduced.num_vertices() != g.num_vertices() + plan.padded) throw PreconditionError("restore: size mismatch");
    for (Vertex v = 0; v < g.num_vertices(); ++v) out.assign(v, reduced.class_of(v));
    return out;
  }
  if (reduced.num_vertices() != plan.kept.size()) throw PreconditionError("restore: size mismatch");
  for (std::size_t i = 0; i < plan.kept.size(); ++i) out.assign(plan.kept[i], reduced.class_of(static_cast<Vertex>(i)));
  std::vector<char> used(r, 0);
  for (std::size_t j = plan.stripped.size(); j-- > 0;) {
    const Vertex v = plan.stripped[j];
    std::vector<char> banned = used;
    for (Vertex w : g.neighbors(v)) {
      if (out.colored(w)) banned[static_cast<std::size_t>(out.class_of(w))] = 1;
    }
    const auto it = std::find(banned.begin(), banned.end(), 0);
    if (it == banned.end()) throw PreconditionError("restore: no free color for a stripped vertex");
    const auto color = static_cast<ClassIndex>(it - banned.begin());
    used[static_cast<std::size_t>(color)] = 1;
    out.assign(v, color);
  }
  return out;
}

std::vector<Edge> insertion_order(const Graph& g, std::uint64_t seed) {
  const std::size_t n = g.num_vertices();
  std::vector<std::vector<Vertex>> adj(n);
  for (Vertex v = 0; v < n; ++v) adj[v].assign(g.neighbors(v).begin(), g.neighbors(v).end());
  std::set<std::pair<std::size_t, Vertex>> queue;
  for (Vertex v = 0; v < n; ++v) {
    if (!adj[v].empty()) queue.insert({adj[v].size(), v});
  }
  Rng rng(seed);
  auto drop = [&](Vertex a, Vertex b) {
    queue.erase({adj[a].size(), a});
    adj[a].erase(std::find(adj[a].begin(), adj[a].end(), b));
    if (!adj[a].empty()) queue.insert({adj[a].size(), a});
  };
  std::vector<Edge> removal;
  removal.reserve(g.num_edges());
  while (!queue.empty()) {
    auto pick = queue.begin();
    if (seed != 0) {
      std::vector<std::set<std::pair<std::size_t, Vertex>>::iterator> ties;
      for (auto it = queue.begin(); it != queue.end() && it->first == queue.begin()->first && ties.size() < 8; ++it) {
        ties.push_back(it);
      }
      pick = ties[rng.below(ties.size())];
    }
    const Vertex v = pick->second;
    const Vertex w = seed == 0 ? adj[v].front() : adj[v][rng.below(adj[v].size())];
    removal.push_back({v, w});
    drop(v, w);
    drop(w, v);
  }
  std::reverse(removal.begin(), removal.end());
  return removal;
}

Coloring repair(AlmostEquitableState state, const EngineOptions& options, const SolverConfig& cfg, SolverStats& stats) {
  ++stats.repairs;
  const std::size_t r = state.r();
  const std::size_t cap = 4 * r * state.g().num_vertices();
  std::unordered_set<std::uint64_t> seen{state.coloring.fingerprint()};
  MoveTrace history;
  for (std::size_t step = 0;; ++step) {
    if (step > cap) {
      throw TheoryViolation("repair exceeded " + std::to_string(cap) + " driver steps",
                            state_dump(state, options, "iteration cap", history.notes));
    }
    ++stats.driver_steps;
    const Analysis an = analyze(state);
    stats.max_deficit = std::max(stats.max_deficit, r - an.ap.a());
    if (cfg.diagnostics) {
      const SoloDiagnostics d = solo_diagnostics(state, an);
      ++stats.diagnostic_states;
      stats.semi_planar_solo_violations += d.semi_planar_violations;
      stats.planar_solo_violations += d.planar_violations;
      stats.cut_violations += d.cut_violations;
    }
    if (cfg.audit && options.planar_normalizations && r == 8) {
      std::optional<Scenario> scenario;
      if (an.ap.a() == 3) scenario = Scenario::A3Case31;
      if (an.ap.a() == 5 && is_nice(an.h, an.ap)) scenario = Scenario::A5Nice;
      if (scenario) {
        const ChargeReport report = discharge_audit(state, *scenario);
        ++stats.discharge_audits;
        stats.discharge_conservation_failures += report.conserved ? 0 : 1;
        stats.discharge_flagged += report.below_threshold.size();
      }
    }
    std::optional<ClassIndex> target;
    for (ClassIndex d : d_of_x(state)) {
      if (an.ap.accessible(d)) {
        target = d;
        break;
      }
    }
    MoveOutcome out;
    if (target) {
      out = cascade_place(state, *target);
    } else {
      ExpandResult res = expand_accessibility(state, options, &seen);
      if (auto* stuck = std::get_if<Stuck>(&res)) {
        std::vector<std::string> notes = history.notes;
        notes.insert(notes.end(), stuck->notes.begin(), stuck->notes.end());
        throw TheoryViolation(stuck->reason, state_dump(state, options, stuck->reason, notes));
      }
      out = std::move(std::get<MoveOutcome>(res));
    }
    ++stats.rule_counts[out.rule];
    history.notes.push_back(out.rule + " " + std::to_string(out.a_before) + "->" + std::to_string(out.a_after));
    if (cfg.audit && cfg.audit_log) {
      *cfg.audit_log << "step " << stats.driver_steps << " rule " << out.rule << " kind " << to_string(out.kind)
                     << " a " << out.a_before << "->" << out.a_after << " trace " << format_trace(out.trace) << '\n';
    }
    if (out.kind == OutcomeKind::Placed) {
      for (Vertex w : state.g().neighbors(state.x)) {
        if (out.coloring->class_of(w) == out.coloring->class_of(state.x)) {
          throw std::logic_error("repair placed x next to a neighbour");
        }
      }
      return std::move(*out.coloring);
    }
    state = std::move(*out.state);
    seen.insert(state.coloring.fingerprint());
  }
}

Coloring solve_divisible(const Graph& g, std::size_t r, std::size_t bound, const EngineOptions& options,
                         const SolverConfig& cfg, SolverStats& stats) {
  const std::size_t n = g.num_vertices();
  if (r == 0 || n % r != 0) throw PreconditionError("solve_divisible: r must divide n");
  auto h = std::make_shared<Graph>(n);
  Coloring c = round_robin(n, r);
  for (const Edge& e : insertion_order(g, cfg.seed)) {
    h->add_edge(e.u, e.v);
    ++stats.insertions;
    if (c.class_of(e.u) != c.class_of(e.v)) continue;
    ++stats.conflicts;
    AlmostEquitableState state = uncolor(h, std::move(c), e.u, e.v);
    if (bound != 0 && h->degree(e.u) > bound) {
      const std::string reason = "x has degree " + std::to_string(h->degree(e.u)) + " above " + std::to_string(bound);
      throw TheoryViolation(reason, state_dump(state, options, reason));
    }
    c = repair(std::move(state), options, cfg, stats);
  }
  return c;
}

std::optional<Coloring> backtrack_equitable(const Graph& g, std::size_t k, std::size_t node_cap) {
  const std::size_t n = g.num_vertices();
  if (k == 0) throw PreconditionError("backtrack_equitable: k must be positive");
  const std::size_t lo = n / k;
  const std::size_t big_allowed = n % k;
  Coloring c(n, k);
  std::size_t big_used = 0;
  std::size_t nodes = 0;
  // Saturation: number of distinct classes among colored neighbours.
  std::vector<std::vector<std::uint32_t>> nbr_count(n, std::vector<std::uint32_t>(k, 0));
  std::vector<std::size_t> saturation(n, 0);
  auto set_color = [&](Vertex v, ClassIndex col, bool on) {
    if (on) {
      c.assign(v, col);
    } else {
      c.unassign(v);
    }
    for (Vertex w : g.neighbors(v)) {
      auto& cnt = nbr_count[w][static_cast<std::size_t>(col)];
      if (on) {
        if (cnt++ == 0) ++saturation[w];
      } else if (--cnt == 0) {
        --saturation[w];
      }
    }
  };
  auto choose = [&]() -> std::optional<Vertex> {
    std::optional<Vertex> best;
    for (Vertex v = 0; v < n; ++v) {
      if (c.colored(v)) continue;
      if (!best || saturation[v] > saturation[*best] ||
          (saturation[v] == saturation[*best] && g.degree(v) > g.degree(*best))) {
        best = v;
      }
    }
    return best;
  };
  auto rec = [&](auto&& self) -> bool {
    if (++nodes > node_cap) throw ResourceError("backtracking exceeded " + std::to_string(node_cap) + " nodes");
    const std::optional<Vertex> v = choose();
    if (!v) return true;
    bool empty_tried = false;
    for (std::size_t i = 0; i < k; ++i) {
      const auto col = static_cast<ClassIndex>(i);
      if (nbr_count[*v][i] != 0) continue;
      const std::size_t size = c.class_size(col);
      if (size == 0) {
        // Empty classes are interchangeable.
        if (empty_tried) continue;
        empty_tried = true;
      }
      const bool makes_big = size == lo;
      if (size > lo || (makes_big && big_used == big_allowed)) continue;
      big_used += makes_big ? 1 : 0;
      set_color(*v, col, true);
      if (self(self)) return true;
      set_color(*v, col, false);
      big_used -= makes_big ? 1 : 0;
    }
    return false;
  };
  if (!rec(rec)) return std::nullopt;
  return c;
}

Coloring hs_equitable(const Graph& g, std::size_t k, const SolverConfig& cfg, SolverStats& stats) {
  if (k < g.max_degree() + 1) throw InputError("hs_equitable: k must exceed the maximum degree");
  stats.hs_route = true;
  stats.reduction = "hs-pad";
  const Reduction red = pad_to_multiple(g, k);
  EngineOptions options;
  options.planar_normalizations = false;
  options.search_budget = cfg.search_budget;
  try {
    const Coloring reduced = solve_divisible(red.reduced, k, 0, options, cfg, stats);
    return restore(g, red.plan, reduced);
  } catch (const TheoryViolation&) {
    stats.backtracked = true;
  }
  std::optional<Coloring> c = backtrack_equitable(g, k, cfg.backtrack_node_cap);
  if (!c) throw std::logic_error("hs_equitable: backtracking found no coloring although k > max degree");
  return std::move(*c);
}

SolveResult equitable_color(const Graph& g, const SolverConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t r = cfg.r;
  if (r == 0) throw InputError("r must be positive");
  const std::size_t delta = g.max_degree();
  if (cfg.check_input) {
    if (!surface_bounds_ok(g, cfg.surface, is_bipartite(g))) {
      throw InputError("graph has too many edges for surface " + std::string(to_string(cfg.surface)));
    }
    const std::size_t t = cfg.surface == Surface::Planar ? 3 : 7;
    if (has_k3t_subgraph(g, t)) {
      throw InputError("graph contains K_{3," + std::to_string(t) + "} and cannot lie on surface " +
                       std::string(to_string(cfg.surface)));
    }
  }
  const bool theorem = ((cfg.surface == Surface::Planar && r >= 8) || (cfg.surface == Surface::NonNegEuler && r >= 9)) &&
                       delta <= r;
  SolveResult result;
  SolverStats& stats = result.stats;
  if (!theorem && r < delta + 1) {
    throw InputError("need r >= 8 (planar) or r >= 9 (nonneg-euler) with max degree <= r, or r > max degree");
  }
  bool hs = !theorem || (cfg.surface == Surface::NonNegEuler && is_six_regular(g));
  if (!hs) {
    std::optional<Reduction> red = reduce_divisibility(g, r);
    if (!red) {
      if (r < delta + 1) throw InputError("graph has no low-degree elimination start and r <= max degree");
      hs = true;
    } else {
      stats.reduction = red->plan.padded ? "pad" : (red->plan.stripped.empty() ? "identity" : "strip");
      EngineOptions options;
      options.planar_normalizations = cfg.surface == Surface::Planar;
      options.search_budget = cfg.search_budget;
      const Coloring reduced = solve_divisible(red->reduced, r, degree_bound(cfg.surface), options, cfg, stats);
      result.coloring = restore(g, red->plan, reduced);
    }
  }
  if (hs) result.coloring = hs_equitable(g, r, cfg, stats);
  check_final(g, result.coloring, r);
  if (cfg.oracle_cross_check_max_n >= g.num_vertices() && g.num_vertices() <= kOracleMaxN) {
    stats.oracle_found = oracle_equitable(g, r).has_value();
  }
  stats.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

std::string_view to_string(Scenario s) { return s == Scenario::A3Case31 ? "a3-case31" : "a5-nice"; }

ChargeReport discharge_audit(const AlmostEquitableState& state, Scenario scenario) {
  const Analysis an = analyze(state);
  const std::size_t want = scenario == Scenario::A3Case31 ? 3 : 5;
  if (an.ap.a() != want) throw PreconditionError("discharge_audit: state does not match the scenario's a");
  const Graph& g = state.g();
  const Coloring& c = state.coloring;
  const ClassIndex small = state.small;
  ChargeReport rep;
  rep.charge.assign(g.num_vertices(), Rational(0));
  const Rational half(1, 2);
  for (const Edge& e : g.edges()) {
    if (!c.colored(e.u) || !c.colored(e.v)) continue;
    ++rep.edges;
    const ClassIndex cu = c.class_of(e.u);
    const ClassIndex cv = c.class_of(e.v);
    if (cu == small || cv == small) {
      rep.charge[cu == small ? e.v : e.u] += 1;
      rep.r1_flow += 1;
      continue;
    }
    auto solo_into_b = [&](Vertex a, ClassIndex ca, Vertex b, ClassIndex cb) {
      return an.ap.accessible(ca) && !an.ap.accessible(cb) && an.counts(b, ca) == 1 && g.adjacent(a, b);
    };
    if (solo_into_b(e.u, cu, e.v, cv)) {
      rep.charge[e.v] += 1;
      rep.r2_flow += 1;
    } else if (solo_into_b(e.v, cv, e.u, cu)) {
      rep.charge[e.u] += 1;
      rep.r2_flow += 1;
    } else {
      rep.charge[e.u] += half;
      rep.charge[e.v] += half;
      rep.r3_flow += 1;
    }
  }
  for (const Rational& q : rep.charge) rep.total += q;
  rep.conserved = rep.total == Rational(static_cast<std::int64_t>(rep.edges));
  const Rational b_min(static_cast<std::int64_t>(scenario == Scenario::A3Case31 ? 3 : 5));
  const Rational a_min = scenario == Scenario::A3Case31 ? Rational(3, 2) : Rational(5, 2);
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    if (!c.colored(v)) continue;
    const ClassIndex cv = c.class_of(v);
    if (!an.ap.accessible(cv)) {
      if (rep.charge[v] < b_min) rep.below_threshold.push_back(v);
    } else if (cv != small) {
      std::size_t live_degree = 0;
      for (Vertex w : g.neighbors(v)) live_degree += w != state.x ? 1 : 0;
      const bool isolated = scenario == Scenario::A3Case31 ? live_degree == 0 : g.degree(v) == 0;
      if (!isolated && rep.charge[v] < a_min) rep.below_threshold.push_back(v);
    }
  }
  return rep;
}

}  // namespace equichroma
