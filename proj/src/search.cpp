#include <deque>

#include "equichroma/errors.hpp"
#include "equichroma/repair.hpp"

namespace equichroma {

namespace {

struct Node {
  AlmostEquitableState state;
  MoveTrace trace;
  std::size_t depth = 0;
};

std::vector<std::vector<Relocation>> successors(const AlmostEquitableState& state, const Analysis& an) {
  std::vector<std::vector<Relocation>> out;
  const Coloring& c = state.coloring;
  for (ClassIndex from : an.ap.a_classes) {
    if (from == an.ap.small) continue;
    for (Vertex w : an.h.witnesses(from, an.ap.small)) out.push_back({{w, an.ap.small}});
  }
  for (ClassIndex home : an.ap.a_classes) {
    for (Vertex v : c.members(home)) {
      for (Vertex u : state.g().neighbors(v)) {
        const ClassIndex cu = c.class_of(u);
        if (cu == kUncolored || an.ap.accessible(cu)) continue;
        if (an.counts(u, home) == 1 && an.counts(v, cu) == 1) out.push_back({{v, cu}, {u, home}});
      }
    }
  }
  return out;
}

}  // namespace

std::optional<MoveOutcome> search_expansion(const AlmostEquitableState& state, std::size_t budget) {
  const std::size_t a0 = analyze(state).ap.a();
  std::unordered_set<std::uint64_t> visited{state.coloring.fingerprint()};
  std::deque<Node> queue;
  queue.push_back({state, {}, 0});
  std::size_t generated = 0;
  while (!queue.empty() && generated < budget) {
    Node node = std::move(queue.front());
    queue.pop_front();
    const Analysis an = analyze(node.state);
    for (const auto& moves : successors(node.state, an)) {
      if (generated >= budget) break;
      MoveTrace step;
      try {
        step = schedule_relocations(node.state, moves);
      } catch (const MoveRejected&) {
        continue;
      }
      AlmostEquitableState next = node.state;
      apply_trace(next, step);
      if (!visited.insert(next.coloring.fingerprint()).second) continue;
      ++generated;
      MoveTrace trace = node.trace;
      trace.append(step);
      const Analysis an2 = analyze(next);
      for (ClassIndex d : d_of_x(next)) {
        if (!an2.ap.accessible(d)) continue;
        MoveOutcome placed = cascade_place(next, d);
        trace.append(placed.trace);
        placed.trace = std::move(trace);
        placed.rule = rule::kSearch;
        placed.a_before = a0;
        return placed;
      }
      if (an2.ap.a() > a0) {
        MoveOutcome out;
        out.kind = OutcomeKind::Expanded;
        out.rule = rule::kSearch;
        out.trace = std::move(trace);
        out.a_before = a0;
        out.a_after = an2.ap.a();
        out.state = std::move(next);
        return out;
      }
      if (node.depth + 1 < state.r()) queue.push_back({std::move(next), std::move(trace), node.depth + 1});
    }
  }
  return std::nullopt;
}

}  // namespace equichroma
