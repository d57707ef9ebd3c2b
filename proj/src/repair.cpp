#include "equichroma/repair.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "equichroma/dump.hpp"
#include "equichroma/errors.hpp"

namespace equichroma {

bool is_sanctioned_restructure(std::string_view rule_tag) {
  return rule_tag == rule::kNb2aSmallSwap || rule_tag == rule::kCaseV1Move;
}

std::string_view to_string(OutcomeKind kind) {
  switch (kind) {
    case OutcomeKind::Placed: return "placed";
    case OutcomeKind::Expanded: return "expanded";
    case OutcomeKind::Normalized: return "normalized";
  }
  return "?";
}

namespace {

bool contains(std::span<const ClassIndex> xs, ClassIndex c) { return std::find(xs.begin(), xs.end(), c) != xs.end(); }

// Builds the outcome of applying `trace` to `state`; Placed when x ends up
// colored.
MoveOutcome realize(const AlmostEquitableState& state, std::size_t a_before, MoveTrace trace, std::string rule_tag) {
  MoveOutcome out;
  out.rule = std::move(rule_tag);
  out.a_before = a_before;
  Coloring c = state.coloring;
  apply_trace(state.g(), c, trace);
  if (c.colored(state.x)) {
    const Verdict verdict = verify(state.g(), c, state.r());
    if (!verdict.proper || !verdict.equitable) throw MoveRejected(out.rule + ": placement is not equitable");
    out.kind = OutcomeKind::Placed;
    out.a_after = state.r();
    out.coloring = std::move(c);
  } else {
    AlmostEquitableState next = state;
    apply_trace(next, trace);
    out.a_after = analyze(next).ap.a();
    out.kind = out.a_after > a_before ? OutcomeKind::Expanded : OutcomeKind::Normalized;
    out.state = std::move(next);
  }
  out.trace = std::move(trace);
  return out;
}

MoveOutcome identity(const AlmostEquitableState& state, std::size_t a, const char* rule_tag) {
  MoveOutcome out;
  out.kind = OutcomeKind::Normalized;
  out.rule = rule_tag;
  out.a_before = out.a_after = a;
  out.state = state;
  return out;
}

Vertex first_witness(const AuxDigraph& h, ClassIndex from, ClassIndex to, Vertex avoid) {
  for (Vertex w : h.witnesses(from, to)) {
    if (w != avoid) return w;
  }
  throw MoveRejected("no witness for arc " + std::to_string(from) + " -> " + std::to_string(to));
}

// Relocations shifting one witness along each arc of `path`.
void push_path_shift(std::vector<Relocation>& moves, const AuxDigraph& h, std::span<const ClassIndex> path,
                     Vertex avoid) {
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    moves.push_back({first_witness(h, path[k], path[k + 1], avoid), path[k + 1]});
  }
}

bool any_other_movable_in_a(const AuxDigraph& h, const AccessPartition& ap, ClassIndex home, Vertex v) {
  for (ClassIndex z : ap.a_classes) {
    if (z == home) continue;
    for (Vertex w : h.witnesses(home, z)) {
      if (w != v) return true;
    }
  }
  return false;
}

std::size_t in_degree_within_a(const AuxDigraph& h, const AccessPartition& ap, ClassIndex c) {
  std::size_t d = 0;
  for (ClassIndex z : ap.a_classes) d += z != c && h.has_arc(z, c) ? 1 : 0;
  return d;
}

}  // namespace

MoveTrace schedule_relocations(const AlmostEquitableState& state, std::span<const Relocation> moves) {
  const Graph& g = state.g();
  const std::size_t r = state.r();
  std::vector<ClassIndex> final_class(g.num_vertices());
  for (Vertex v = 0; v < g.num_vertices(); ++v) final_class[v] = state.coloring.class_of(v);
  std::vector<std::size_t> sizes(r);
  for (std::size_t i = 0; i < r; ++i) sizes[i] = state.coloring.class_size(static_cast<ClassIndex>(i));
  std::set<Vertex> touched;
  bool places_x = false;
  for (const Relocation& m : moves) {
    if (m.vertex >= g.num_vertices()) throw MoveRejected("relocation: vertex out of range");
    if (m.to < 0 || static_cast<std::size_t>(m.to) >= r) throw MoveRejected("relocation: class out of range");
    if (!touched.insert(m.vertex).second) throw MoveRejected("relocation: vertex relocated twice");
    const ClassIndex from = final_class[m.vertex];
    if (from != kUncolored) --sizes[static_cast<std::size_t>(from)];
    ++sizes[static_cast<std::size_t>(m.to)];
    final_class[m.vertex] = m.to;
    places_x = places_x || m.vertex == state.x;
  }
  for (Vertex v : touched) {
    for (Vertex w : g.neighbors(v)) {
      if (final_class[w] != kUncolored && final_class[w] == final_class[v]) {
        throw MoveRejected("relocation: " + std::to_string(v + 1) + " and " + std::to_string(w + 1) +
                           " end in one class");
      }
    }
  }
  std::size_t short_classes = 0;
  for (std::size_t sz : sizes) {
    if (sz + 1 == state.s) {
      ++short_classes;
    } else if (sz != state.s) {
      throw MoveRejected("relocation: class sizes drift");
    }
  }
  if (short_classes != (places_x ? 0U : 1U)) throw MoveRejected("relocation: class sizes drift");

  Coloring work = state.coloring;
  MoveTrace trace;
  std::vector<Relocation> pending(moves.begin(), moves.end());
  auto fits = [&](const Relocation& m) {
    for (Vertex w : g.neighbors(m.vertex)) {
      if (work.class_of(w) == m.to) return false;
    }
    return true;
  };
  while (!pending.empty()) {
    bool progress = false;
    for (auto it = pending.begin(); it != pending.end();) {
      if (fits(*it)) {
        trace.add(it->vertex, work.class_of(it->vertex), it->to);
        work.move(it->vertex, it->to);
        it = pending.erase(it);
        progress = true;
      } else {
        ++it;
      }
    }
    if (progress) continue;
    auto parked = std::find_if(pending.begin(), pending.end(), [&](const Relocation& m) { return work.colored(m.vertex); });
    if (parked == pending.end()) throw MoveRejected("relocation: schedule deadlock");
    trace.add(parked->vertex, work.class_of(parked->vertex), kUncolored);
    work.move(parked->vertex, kUncolored);
  }
  return trace;
}

MoveOutcome cascade_place(const AlmostEquitableState& state, ClassIndex target) {
  const Analysis an = analyze(state);
  if (target < 0 || static_cast<std::size_t>(target) >= state.r() || !an.ap.accessible(target)) {
    throw PreconditionError("cascade_place: target class is not accessible");
  }
  for (Vertex w : state.g().neighbors(state.x)) {
    if (state.coloring.class_of(w) == target) throw PreconditionError("cascade_place: x has a neighbour in target");
  }
  MoveTrace trace;
  trace.add(state.x, kUncolored, target);
  for (ClassIndex c = target; c != an.ap.small; c = an.ap.parent[static_cast<std::size_t>(c)]) {
    const ClassIndex next = an.ap.parent[static_cast<std::size_t>(c)];
    const Vertex w = an.h.witnesses(c, next).front();
    trace.add(w, c, next);
  }
  return realize(state, an.ap.a(), std::move(trace), rule::kCascade);
}

namespace {

struct OrdinaryCheck {
  Analysis an;
  ClassIndex home;
  SoloProfile profile;
};

OrdinaryCheck check_ordinary_solo(const AlmostEquitableState& state, Vertex v, Vertex u, const char* who) {
  OrdinaryCheck oc{analyze(state), state.coloring.class_of(v), {}};
  if (oc.home == kUncolored || !oc.an.ap.accessible(oc.home)) {
    throw PreconditionError(std::string(who) + ": v must lie in an accessible class");
  }
  if (!oc.an.is_terminal(oc.home)) throw PreconditionError(std::string(who) + ": v's class is not terminal");
  if (!is_ordinary(state, oc.an.h, oc.an.ap, oc.an.terminal, v)) {
    throw PreconditionError(std::string(who) + ": v is not ordinary");
  }
  oc.profile = solo_profile(state, oc.an.ap, v);
  if (std::find(oc.profile.q_prime.begin(), oc.profile.q_prime.end(), u) == oc.profile.q_prime.end()) {
    throw PreconditionError(std::string(who) + ": u is not in Q'(v)");
  }
  return oc;
}

// The a = 2 branch shared by both exchanges: v is the only vertex of its class
// movable inside A, so it joins the small class.
std::optional<MoveOutcome> small_swap_branch(const AlmostEquitableState& state, const OrdinaryCheck& oc, Vertex v) {
  if (oc.an.ap.a() != 2 || any_other_movable_in_a(oc.an.h, oc.an.ap, oc.home, v)) return std::nullopt;
  const Relocation move{v, oc.an.ap.small};
  return realize(state, 2, schedule_relocations(state, std::span(&move, 1)), rule::kNb2aSmallSwap);
}

MoveOutcome require_growth(const AlmostEquitableState& state, MoveOutcome out) {
  if (out.kind == OutcomeKind::Normalized) {
    throw TheoryViolation(out.rule + ": exchange did not enlarge the accessible family",
                          state_dump(state, EngineOptions{}, out.rule + " post-condition failed"));
  }
  return out;
}

}  // namespace

MoveOutcome nb2_exchange_a(const AlmostEquitableState& state, Vertex v, Vertex u) {
  const OrdinaryCheck oc = check_ordinary_solo(state, v, u, "nb2_exchange_a");
  const ClassIndex wj = state.coloring.class_of(u);
  if (oc.an.counts(v, wj) != 1) throw PreconditionError("nb2_exchange_a: u is not v's only neighbour in its class");
  if (auto out = small_swap_branch(state, oc, v)) return require_growth(state, std::move(*out));
  MoveTrace trace;
  trace.add(u, wj, kUncolored);
  trace.add(v, oc.home, wj);
  trace.add(u, kUncolored, oc.home);
  return require_growth(state, realize(state, oc.an.ap.a(), std::move(trace), rule::kNb2a));
}

MoveOutcome nb2_exchange_b(const AlmostEquitableState& state, Vertex v, Vertex u, std::span<const ClassIndex> path) {
  const OrdinaryCheck oc = check_ordinary_solo(state, v, u, "nb2_exchange_b");
  const ClassIndex wj = state.coloring.class_of(u);
  if (path.empty() || path.back() != wj) throw PreconditionError("nb2_exchange_b: path must end at u's class");
  for (ClassIndex c : path) {
    if (oc.an.ap.accessible(c)) throw PreconditionError("nb2_exchange_b: path leaves B");
  }
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    if (!oc.an.h.has_arc(path[k], path[k + 1])) throw PreconditionError("nb2_exchange_b: path uses a missing arc");
  }
  const bool degenerate = path.size() == 1 && oc.an.counts(v, wj) == 1;
  if (!degenerate && !contains(oc.profile.f0, path.front())) {
    throw PreconditionError("nb2_exchange_b: path must start in F0(v)");
  }
  bool partner = false;
  for (Vertex u2 : oc.profile.q_prime) {
    if (u2 == u || state.g().adjacent(u, u2)) continue;
    const ClassIndex c2 = state.coloring.class_of(u2);
    if (c2 == wj || !contains(path, c2)) {
      partner = true;
      break;
    }
  }
  if (!partner) throw MoveRejected("nb2_exchange_b: every partner of u lies inside the path");
  if (auto out = small_swap_branch(state, oc, v)) return require_growth(state, std::move(*out));

  std::vector<Relocation> moves;
  moves.push_back({v, path.front()});
  push_path_shift(moves, oc.an.h, path, v);
  moves.push_back({u, oc.home});
  return require_growth(state, realize(state, oc.an.ap.a(), schedule_relocations(state, moves), rule::kNb2b));
}

Restructure two_for_one_swap(const AlmostEquitableState& state, Vertex v, Vertex w, Vertex w2) {
  const Coloring& c = state.coloring;
  const ClassIndex small = state.small;
  const ClassIndex target = c.class_of(w);
  if (c.class_of(v) != small) throw PreconditionError("two_for_one_swap: v must lie in the small class");
  if (w == w2 || target == kUncolored || target == small || c.class_of(w2) != target) {
    throw PreconditionError("two_for_one_swap: w, w2 must be two vertices of one other class");
  }
  std::vector<Vertex> inside;
  for (Vertex z : state.g().neighbors(v)) {
    if (c.class_of(z) == target) inside.push_back(z);
  }
  if (inside.size() != 2 || !state.g().adjacent(v, w) || !state.g().adjacent(v, w2)) {
    throw PreconditionError("two_for_one_swap: N(v) must meet the class exactly in {w, w2}");
  }
  const Relocation moves[] = {{v, target}, {w, small}, {w2, small}};
  MoveTrace trace = schedule_relocations(state, moves);
  AlmostEquitableState next = state;
  apply_trace(next, trace);
  return {std::move(next), std::move(trace)};
}

MoveOutcome chain_relocate(const AlmostEquitableState& state, const ChainSpec& spec) {
  for (const Edge& e : spec.required_non_edges) {
    if (state.g().adjacent(e.u, e.v)) {
      throw MoveRejected(spec.rule + ": " + std::to_string(e.u + 1) + " and " + std::to_string(e.v + 1) +
                         " are adjacent");
    }
  }
  const std::size_t a = analyze(state).ap.a();
  MoveOutcome out = realize(state, a, schedule_relocations(state, spec.moves), spec.rule);
  if (out.kind == OutcomeKind::Normalized) throw MoveRejected(spec.rule + ": no expansion");
  return out;
}

MoveOutcome normalize_terminal_pair(const AlmostEquitableState& state) {
  const Analysis an = analyze(state);
  if (an.ap.a() != 3) throw MoveRejected("normalize_terminal_pair: a != 3");
  std::vector<ClassIndex> others;
  for (ClassIndex c : an.ap.a_classes) {
    if (c != an.ap.small) others.push_back(c);
  }
  if (an.is_terminal(others[0]) && an.is_terminal(others[1])) return identity(state, 3, rule::kTerminalPair);
  const ClassIndex blocker = an.is_terminal(others[0]) ? others[1] : others[0];
  if (!an.h.has_arc(blocker, an.ap.small)) throw MoveRejected("normalize_terminal_pair: blocker has no arc to small");
  const Relocation move{an.h.witnesses(blocker, an.ap.small).front(), an.ap.small};
  MoveOutcome out = realize(state, 3, schedule_relocations(state, std::span(&move, 1)), rule::kTerminalPair);
  if (out.kind == OutcomeKind::Normalized && out.a_after < 3) throw MoveRejected("normalize_terminal_pair: a shrank");
  if (out.kind == OutcomeKind::Normalized) {
    const Analysis after = analyze(*out.state);
    for (ClassIndex c : after.ap.a_classes) {
      if (c != after.ap.small && !after.is_terminal(c)) {
        throw MoveRejected("normalize_terminal_pair: a non-small accessible class still blocks");
      }
    }
  }
  return out;
}

MoveOutcome normalize_movable_balance(const AlmostEquitableState& state) {
  const Analysis an = analyze(state);
  if (an.ap.a() != 2) throw MoveRejected("normalize_movable_balance: a != 2");
  const ClassIndex small = an.ap.small;
  const ClassIndex other = an.ap.a_classes[0] == small ? an.ap.a_classes[1] : an.ap.a_classes[0];
  const std::size_t m1 = an.h.witnesses(small, other).size();
  const std::size_t m2 = an.h.witnesses(other, small).size();
  if (m2 <= m1 + 1) return identity(state, 2, rule::kBalance);
  const Relocation move{an.h.witnesses(other, small).front(), small};
  MoveOutcome out = realize(state, 2, schedule_relocations(state, std::span(&move, 1)), rule::kBalance);
  if (out.kind == OutcomeKind::Normalized && out.a_after < 2) throw MoveRejected("normalize_movable_balance: a shrank");
  if (out.kind == OutcomeKind::Normalized) {
    const Analysis after = analyze(*out.state);
    const ClassIndex s2 = after.ap.small;
    const std::size_t n1 = after.h.witnesses(s2, small).size();
    const std::size_t n2 = after.h.witnesses(small, s2).size();
    if (n2 > n1 + 1) throw MoveRejected("normalize_movable_balance: balance not reached");
  }
  return out;
}

bool is_nice(const AuxDigraph& h, const AccessPartition& ap) {
  for (ClassIndex x : ap.a_classes) {
    if (x == ap.small) continue;
    std::size_t blocked = 0;
    for (ClassIndex y : ap.a_classes) blocked += y != x && blocks(h, ap, x, y) ? 1 : 0;
    if (blocked > 1) return false;
  }
  return true;
}

MoveOutcome make_nice(const AlmostEquitableState& state) {
  const Analysis an0 = analyze(state);
  if (an0.ap.a() != 5) throw MoveRejected("make_nice: a != 5");
  if (is_nice(an0.h, an0.ap)) return identity(state, 5, rule::kNice);
  AlmostEquitableState current = state;
  MoveTrace total;
  for (int round = 0; round < 3; ++round) {
    const Analysis an = analyze(current);
    const std::size_t indeg = in_degree_within_a(an.h, an.ap, an.ap.small);
    std::optional<MoveOutcome> progress;
    for (ClassIndex from : an.ap.a_classes) {
      if (from == an.ap.small) continue;
      for (Vertex w : an.h.witnesses(from, an.ap.small)) {
        const Relocation move{w, an.ap.small};
        MoveOutcome out = realize(current, 5, schedule_relocations(current, std::span(&move, 1)), rule::kNice);
        if (out.a_after < 5) continue;
        if (out.a_after > 5) {
          total.append(out.trace);
          out.trace = total;
          out.a_before = 5;
          return out;
        }
        const Analysis after = analyze(*out.state);
        if (is_nice(after.h, after.ap)) {
          total.append(out.trace);
          out.trace = total;
          return out;
        }
        if (!progress && in_degree_within_a(after.h, after.ap, after.ap.small) > indeg) progress = std::move(out);
      }
    }
    if (!progress) break;
    total.append(progress->trace);
    current = std::move(*progress->state);
  }
  throw TheoryViolation("make_nice: no witness move makes H[A] nice",
                        state_dump(state, EngineOptions{}, "make_nice failed"));
}

std::optional<MoveOutcome> unmovable_place(const AlmostEquitableState& state) {
  const Analysis an = analyze(state);
  const Coloring& c = state.coloring;
  const Graph& g = state.g();
  const std::size_t a = an.ap.a();
  std::vector<std::uint32_t> x_in(state.r(), 0);
  for (Vertex w : g.neighbors(state.x)) {
    if (c.colored(w)) ++x_in[static_cast<std::size_t>(c.class_of(w))];
  }
  for (ClassIndex vi : an.ap.a_classes) {
    if (vi == an.ap.small) continue;
    for (Vertex v : c.members(vi)) {
      std::vector<Vertex> solo;
      for (Vertex u : g.neighbors(v)) {
        const ClassIndex cu = c.class_of(u);
        if (cu != kUncolored && !an.ap.accessible(cu) && an.counts(u, vi) == 1) solo.push_back(u);
      }
      if (solo.empty()) continue;
      for (ClassIndex vj : an.ap.a_classes) {
        if (vj == vi || an.counts(v, vj) != 0) continue;
        std::vector<char> allowed(state.r(), 1);
        allowed[static_cast<std::size_t>(vi)] = 0;
        const ClassIndex src[] = {vj};
        const std::vector<ClassIndex> path = find_class_path(an.h, src, an.ap.small, allowed);
        for (Vertex u : solo) {
          const ClassIndex w = c.class_of(u);
          const bool x_fits = x_in[static_cast<std::size_t>(w)] == (g.adjacent(state.x, u) ? 1U : 0U);
          if (!path.empty() && x_fits) {
            std::vector<Relocation> moves{{state.x, w}, {u, vi}, {v, vj}};
            try {
              push_path_shift(moves, an.h, path, v);
              return realize(state, a, schedule_relocations(state, moves), rule::kUnmovablePlace);
            } catch (const MoveRejected&) {
            }
          }
          if (path.empty()) {
            for (Vertex v2 : an.h.witnesses(vj, vi)) {
              if (g.adjacent(u, v2)) continue;
              ChainSpec spec{rule::kUnmovableSwap, {{v, vj}, {v2, vi}}, {{u, v2}}};
              try {
                return chain_relocate(state, spec);
              } catch (const MoveRejected&) {
              }
            }
          }
        }
      }
    }
  }
  return std::nullopt;
}

namespace {

using Seen = std::unordered_set<std::uint64_t>;

bool is_fresh(const MoveOutcome& out, const Seen* seen) {
  if (out.kind != OutcomeKind::Normalized) return true;
  if (out.trace.empty()) return false;
  return seen == nullptr || !seen->contains(out.state->coloring.fingerprint());
}

template <typename Fn>
std::optional<MoveOutcome> attempt(const Seen* seen, Fn&& fn) {
  try {
    std::optional<MoveOutcome> out = fn();
    if (out && is_fresh(*out, seen)) return out;
  } catch (const MoveRejected&) {
  } catch (const PreconditionError&) {
  }
  return std::nullopt;
}

std::optional<MoveOutcome> find_normalization(const AlmostEquitableState& state, const Analysis& an, const Seen* seen,
                                              std::vector<std::string>& notes) {
  const std::size_t a = an.ap.a();
  if (a == 3) {
    return attempt(seen, [&] { return std::optional(normalize_terminal_pair(state)); });
  }
  if (a == 2) {
    return attempt(seen, [&] { return std::optional(normalize_movable_balance(state)); });
  }
  if (a == 5 && !is_nice(an.h, an.ap)) {
    try {
      return attempt(seen, [&] { return std::optional(make_nice(state)); });
    } catch (const TheoryViolation& e) {
      notes.push_back(e.what());
    }
  }
  return std::nullopt;
}

std::optional<MoveOutcome> find_nb2(const AlmostEquitableState& state, const Analysis& an, const Seen* seen,
                                    bool path_variant) {
  std::vector<char> in_b(state.r(), 0);
  for (ClassIndex b : an.ap.b_classes) in_b[static_cast<std::size_t>(b)] = 1;
  for (ClassIndex vi : an.terminal) {
    for (Vertex v : state.coloring.members(vi)) {
      if (!is_ordinary(state, an.h, an.ap, an.terminal, v)) continue;
      const SoloProfile prof = solo_profile(state, an.ap, v);
      for (Vertex u : prof.q_prime) {
        const ClassIndex wj = state.coloring.class_of(u);
        if (!path_variant) {
          if (an.counts(v, wj) != 1) continue;
          if (auto out = attempt(seen, [&] { return std::optional(nb2_exchange_a(state, v, u)); })) return out;
          continue;
        }
        if (prof.f0.empty()) continue;
        const std::vector<ClassIndex> path = find_class_path(an.h, prof.f0, wj, in_b);
        if (path.empty()) continue;
        if (auto out = attempt(seen, [&] { return std::optional(nb2_exchange_b(state, v, u, path)); })) return out;
      }
    }
  }
  return std::nullopt;
}

std::optional<MoveOutcome> find_two_for_one(const AlmostEquitableState& state, const Analysis& an, const Seen* seen) {
  const Coloring& c = state.coloring;
  const Graph& g = state.g();
  const std::size_t a = an.ap.a();
  for (Vertex v : c.members(an.ap.small)) {
    std::map<ClassIndex, std::vector<Vertex>> by_class;
    for (Vertex z : g.neighbors(v)) {
      if (c.colored(z)) by_class[c.class_of(z)].push_back(z);
    }
    for (const auto& [target, ws] : by_class) {
      if (ws.size() != 2 || an.counts(ws[0], an.ap.small) != 1 || an.counts(ws[1], an.ap.small) != 1) continue;
      auto out = attempt(seen, [&]() -> std::optional<MoveOutcome> {
        Restructure rs = two_for_one_swap(state, v, ws[0], ws[1]);
        bool x_fits = true;
        for (Vertex z : g.neighbors(state.x)) x_fits = x_fits && rs.state.coloring.class_of(z) != target;
        MoveTrace trace = rs.trace;
        if (x_fits) trace.add(state.x, kUncolored, target);
        MoveOutcome o = realize(state, a, std::move(trace), rule::kTwoForOne);
        if (o.kind == OutcomeKind::Normalized) return std::nullopt;
        return o;
      });
      if (out) return out;
    }
  }
  return std::nullopt;
}

// p and q share a home class V. p leaves for a class of F0(p); q replaces
// t1 (a solo neighbour of p in T, with t2 another) in T; t1 and z (a solo
// neighbour of q in B, free of t1 and t2) join V; witnesses shift from the
// class p entered to z's class through B - T.
std::optional<MoveOutcome> find_double_swap(const AlmostEquitableState& state, const Analysis& an, const Seen* seen) {
  const Coloring& c = state.coloring;
  const Graph& g = state.g();
  std::vector<char> in_b(state.r(), 0);
  for (ClassIndex b : an.ap.b_classes) in_b[static_cast<std::size_t>(b)] = 1;
  for (ClassIndex home : an.ap.a_classes) {
    const auto members = c.members(home);
    std::vector<SoloProfile> profiles;
    profiles.reserve(members.size());
    for (Vertex v : members) profiles.push_back(solo_profile(state, an.ap, v));
    for (std::size_t ip = 0; ip < members.size(); ++ip) {
      const Vertex p = members[ip];
      const SoloProfile& pp = profiles[ip];
      if (pp.f0.empty() || pp.q.size() < 2) continue;
      for (Vertex t1 : pp.q) {
        const ClassIndex t_class = c.class_of(t1);
        for (Vertex t2 : pp.q) {
          if (t2 == t1 || c.class_of(t2) != t_class) continue;
          for (std::size_t iq = 0; iq < members.size(); ++iq) {
            const Vertex q = members[iq];
            if (q == p) continue;
            const std::uint32_t q_in_t = an.counts(q, t_class) - (g.adjacent(q, t1) ? 1U : 0U);
            if (q_in_t != 0) continue;
            for (Vertex z : profiles[iq].q) {
              const ClassIndex zc = c.class_of(z);
              if (zc == t_class || z == t1 || g.adjacent(z, t1) || g.adjacent(z, t2)) continue;
              std::vector<char> allowed = in_b;
              allowed[static_cast<std::size_t>(t_class)] = 0;
              const std::vector<ClassIndex> path = find_class_path(an.h, pp.f0, zc, allowed);
              if (path.empty()) continue;
              auto out = attempt(seen, [&]() -> std::optional<MoveOutcome> {
                ChainSpec spec;
                spec.rule = rule::kDoubleSwap;
                spec.moves = {{p, path.front()}, {q, t_class}, {t1, home}};
                push_path_shift(spec.moves, an.h, path, p);
                spec.moves.push_back({z, home});
                spec.required_non_edges = {{z, t1}, {z, t2}};
                return chain_relocate(state, spec);
              });
              if (out) return out;
            }
          }
        }
      }
    }
  }
  return std::nullopt;
}

std::optional<MoveOutcome> find_case_v1_move(const AlmostEquitableState& state, const Analysis& an, const Seen* seen) {
  const Coloring& c = state.coloring;
  for (ClassIndex from : an.ap.a_classes) {
    if (from == an.ap.small) continue;
    for (Vertex v : an.h.witnesses(from, an.ap.small)) {
      std::vector<ClassIndex> freed;
      for (Vertex u : state.g().neighbors(v)) {
        const ClassIndex cu = c.class_of(u);
        if (cu != kUncolored && !an.ap.accessible(cu) && an.counts(u, from) == 1) freed.push_back(cu);
      }
      if (freed.empty()) continue;
      auto out = attempt(seen, [&]() -> std::optional<MoveOutcome> {
        const Relocation move{v, an.ap.small};
        MoveOutcome o = realize(state, an.ap.a(), schedule_relocations(state, std::span(&move, 1)), rule::kCaseV1Move);
        const AccessPartition after = accessible(build_aux(*o.state), o.state->small);
        const bool opened = std::any_of(freed.begin(), freed.end(), [&](ClassIndex b) { return after.accessible(b); });
        if (!opened || o.a_after < o.a_before) return std::nullopt;
        return o;
      });
      if (out) return out;
    }
  }
  return std::nullopt;
}

}  // namespace

ExpandResult expand_accessibility(const AlmostEquitableState& state, const EngineOptions& options, const Seen* seen) {
  const Analysis an = analyze(state);
  for (ClassIndex d : d_of_x(state)) {
    if (an.ap.accessible(d)) throw PreconditionError("expand_accessibility: x fits an accessible class");
  }
  Stuck stuck;
  if (options.planar_normalizations && state.r() == 8) {
    if (auto out = find_normalization(state, an, seen, stuck.notes)) return std::move(*out);
  }
  if (auto out = find_nb2(state, an, seen, false)) return std::move(*out);
  if (auto out = find_nb2(state, an, seen, true)) return std::move(*out);
  if (auto out = find_two_for_one(state, an, seen)) return std::move(*out);
  if (auto out = find_double_swap(state, an, seen)) return std::move(*out);
  if (auto out = find_case_v1_move(state, an, seen)) return std::move(*out);
  if (auto out = attempt(seen, [&] { return unmovable_place(state); })) return std::move(*out);
  if (options.search_fallback) {
    if (auto out = search_expansion(state, options.search_budget)) return std::move(*out);
    stuck.notes.push_back("search budget " + std::to_string(options.search_budget) + " exhausted");
  }
  stuck.reason = "no catalogued move applies at a = " + std::to_string(an.ap.a());
  return stuck;
}

}  // namespace equichroma
