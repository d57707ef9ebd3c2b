#include <doctest.h>

#include <memory>
#include <set>

#include "crafted.hpp"
#include "equichroma/errors.hpp"
#include "equichroma/repair.hpp"

using namespace equichroma;
using crafted::Layout;

namespace {

// Joins every pair of colored vertices in distinct classes, except that each
// listed witness stays free of its listed class.
void join_except(Layout& L, const std::vector<std::pair<Vertex, ClassIndex>>& free_of) {
  auto skip = [&](Vertex w, Vertex z) {
    for (const auto& [v, c] : free_of) {
      if (v == w && L.class_of(z) == c) return true;
    }
    return false;
  };
  for (Vertex u = 0; u < L.n(); ++u) {
    for (Vertex v = u + 1; v < L.n(); ++v) {
      if (u == L.x() || v == L.x() || L.class_of(u) == L.class_of(v)) continue;
      if (!skip(u, v) && !skip(v, u)) L.edge(u, v);
    }
  }
}

void x_to_classes(Layout& L, const std::vector<ClassIndex>& classes) {
  for (ClassIndex c : classes) {
    for (Vertex v : L.members(c)) L.edge(L.x(), v);
  }
}

// Chain 4 -> 3 -> 2 -> 1 -> 0 with one witness per arc and x adjacent to
// everything outside `open`.
AlmostEquitableState chain_state(ClassIndex open) {
  Layout L(5, 2, 0);
  join_except(L, {{L.at(1, 0), 0}, {L.at(2, 0), 1}, {L.at(3, 0), 2}, {L.at(4, 0), 3}});
  std::vector<ClassIndex> blocked;
  for (ClassIndex c = 0; c < 5; ++c) {
    if (c != open) blocked.push_back(c);
  }
  x_to_classes(L, blocked);
  return L.build();
}

// Placed outcomes verify on all of G; the others replay from their trace and
// grow the brute-force accessible family unless they are sanctioned.
void check_outcome(const AlmostEquitableState& before, const MoveOutcome& out) {
  if (out.kind == OutcomeKind::Placed) {
    REQUIRE(out.coloring);
    const Verdict v = verify(before.g(), *out.coloring, before.r());
    CHECK(v.proper);
    CHECK(v.equitable);
    return;
  }
  REQUIRE(out.state);
  AlmostEquitableState replay = before;
  apply_trace(replay, out.trace);
  CHECK(replay.coloring == out.state->coloring);
  CHECK(replay.small == out.state->small);
  CHECK_NOTHROW(check_invariants(*out.state));
  CHECK(crafted::reference_a(*out.state) == out.a_after);
  if (out.kind == OutcomeKind::Expanded) CHECK(out.a_after > out.a_before);
}

}  // namespace

TEST_CASE("rule tags") {
  CHECK(is_sanctioned_restructure(rule::kNb2aSmallSwap));
  CHECK(is_sanctioned_restructure(rule::kCaseV1Move));
  CHECK_FALSE(is_sanctioned_restructure(rule::kNb2a));
  CHECK(to_string(OutcomeKind::Placed) == "placed");
}

TEST_CASE("cascade_place") {
  Layout direct(5, 2, 0);
  join_except(direct, {});
  x_to_classes(direct, {1, 2, 3, 4});
  const auto st0 = direct.build();
  const MoveOutcome here = cascade_place(st0, 0);
  CHECK(here.kind == OutcomeKind::Placed);
  CHECK(here.trace.steps.size() == 1);
  check_outcome(st0, here);

  const auto st1 = chain_state(1);
  const MoveOutcome one = cascade_place(st1, 1);
  CHECK(one.trace.steps.size() == 2);
  check_outcome(st1, one);

  const auto st4 = chain_state(4);
  const MoveOutcome four = cascade_place(st4, 4);
  CHECK(four.kind == OutcomeKind::Placed);
  CHECK(four.trace.steps.size() == 5);
  check_outcome(st4, four);

  CHECK_THROWS_AS(cascade_place(st4, 2), PreconditionError);
  Layout cut(3, 2, 0);
  x_to_classes(cut, {0, 1});
  for (Vertex b : cut.members(2)) {
    for (Vertex a : cut.members(0)) cut.edge(a, b);
    for (Vertex a : cut.members(1)) cut.edge(a, b);
  }
  const auto st_cut = cut.build();
  CHECK_FALSE(analyze(st_cut).ap.accessible(2));
  CHECK_THROWS_AS(cascade_place(st_cut, 2), PreconditionError);
}

TEST_CASE("schedule_relocations") {
  const auto st = chain_state(4);
  const Relocation twice[] = {{st.x, 4}, {st.x, 3}};
  CHECK_THROWS_AS(schedule_relocations(st, twice), MoveRejected);
  const Relocation lopsided[] = {{st.x, 4}};
  CHECK_THROWS_AS(schedule_relocations(st, lopsided), MoveRejected);
  // Listing the cascade from the far end still yields a proper trace.
  Layout L(5, 2, 0);
  join_except(L, {{L.at(1, 0), 0}, {L.at(2, 0), 1}, {L.at(3, 0), 2}, {L.at(4, 0), 3}});
  x_to_classes(L, {0, 1, 2, 3});
  const auto st2 = L.build();
  const Relocation shuffled[] = {{L.at(4, 0), 3}, {L.at(3, 0), 2}, {L.at(2, 0), 1}, {L.at(1, 0), 0}, {L.x(), 4}};
  const MoveTrace t = schedule_relocations(st2, shuffled);
  Coloring c = st2.coloring;
  apply_trace(st2.g(), c, t);
  CHECK(verify(st2.g(), c, 5).equitable);
}

TEST_CASE("nb2 exchange (a) grows the accessible family") {
  Rng rng(17);
  for (int round = 0; round < 20; ++round) {
    const auto c = crafted::nb2_case(rng, crafted::Nb2Variant::SwapA1);
    const std::size_t before = crafted::reference_a(c.state);
    const MoveOutcome out = nb2_exchange_a(c.state, c.v, c.u);
    CHECK(out.rule == rule::kNb2a);
    CHECK(out.kind == OutcomeKind::Expanded);
    CHECK(out.a_before == before);
    check_outcome(c.state, out);
  }
  for (int round = 0; round < 20; ++round) {
    const auto c = crafted::nb2_case(rng, crafted::Nb2Variant::SwapA2);
    const MoveOutcome out = nb2_exchange_a(c.state, c.v, c.u);
    CHECK(out.rule == rule::kNb2a);
    check_outcome(c.state, out);
  }
}

TEST_CASE("nb2 exchange (a) small-swap branch") {
  Rng rng(23);
  for (int round = 0; round < 20; ++round) {
    const auto c = crafted::nb2_case(rng, crafted::Nb2Variant::SmallSwapA2);
    const ClassIndex home = c.state.coloring.class_of(c.v);
    const MoveOutcome out = nb2_exchange_a(c.state, c.v, c.u);
    CHECK(out.rule == rule::kNb2aSmallSwap);
    REQUIRE(out.state);
    CHECK(out.state->small == home);
    const auto acc = crafted::reference_accessible(*out.state);
    // Both former partners' classes are accessible afterwards.
    CHECK(acc[static_cast<std::size_t>(c.state.coloring.class_of(c.u))]);
    check_outcome(c.state, out);
  }
}

TEST_CASE("nb2 exchange (a) needs a unique neighbour") {
  Rng rng(29);
  const auto c = crafted::nb2_case(rng, crafted::Nb2Variant::SwapA1);
  auto g = std::make_shared<Graph>(c.state.g());
  const ClassIndex wj = c.state.coloring.class_of(c.u);
  for (Vertex w : c.state.coloring.members(wj)) {
    if (w != c.u && !g->adjacent(c.v, w)) {
      g->add_edge(c.v, w);
      break;
    }
  }
  AlmostEquitableState st = c.state;
  st.graph = g;
  CHECK_THROWS_AS(nb2_exchange_a(st, c.v, c.u), PreconditionError);
}

TEST_CASE("nb2 exchange (b) along a path in B") {
  Rng rng(31);
  bool saw_five = false;
  for (int round = 0; round < 40; ++round) {
    const auto c = crafted::nb2_case(rng, crafted::Nb2Variant::PathB);
    const MoveOutcome out = nb2_exchange_b(c.state, c.v, c.u, c.path);
    CHECK(out.rule == rule::kNb2b);
    CHECK(out.kind == OutcomeKind::Expanded);
    // v in, one witness per arc, u out.
    CHECK(out.trace.steps.size() >= c.path.size() + 1);
    saw_five = saw_five || c.path.size() == 5;
    check_outcome(c.state, out);
  }
  CHECK(saw_five);

  // A one-class path through u's own class degenerates to the swap.
  const auto d = crafted::nb2_case(rng, crafted::Nb2Variant::SwapA1);
  const ClassIndex only[] = {d.state.coloring.class_of(d.u)};
  const MoveOutcome out = nb2_exchange_b(d.state, d.v, d.u, only);
  CHECK(out.kind == OutcomeKind::Expanded);
  check_outcome(d.state, out);

  const auto e = crafted::nb2_case(rng, crafted::Nb2Variant::PathB);
  std::vector<ClassIndex> wrong_end = e.path;
  wrong_end.pop_back();
  CHECK_THROWS_AS(nb2_exchange_b(e.state, e.v, e.u, wrong_end), PreconditionError);
}

TEST_CASE("two_for_one_swap") {
  Rng rng(37);
  for (int round = 0; round < 20; ++round) {
    const auto c = crafted::two_for_one_case(rng, true);
    const Restructure res = two_for_one_swap(c.state, c.v, c.w, c.w2);
    CHECK(res.state.small == c.target);
    CHECK(res.state.coloring.class_size(c.state.small) == c.state.s);
    CHECK(res.state.coloring.class_size(c.target) == c.state.s - 1);
    CHECK_NOTHROW(check_invariants(res.state));
    const MoveOutcome placed = cascade_place(res.state, c.target);
    CHECK(placed.kind == OutcomeKind::Placed);
    check_outcome(res.state, placed);
  }
  const auto blocked = crafted::two_for_one_case(rng, false);
  const Restructure res = two_for_one_swap(blocked.state, blocked.v, blocked.w, blocked.w2);
  const auto dx = d_of_x(res.state);
  CHECK(std::find(dx.begin(), dx.end(), blocked.target) == dx.end());

  auto g = std::make_shared<Graph>(blocked.state.g());
  for (Vertex t : blocked.state.coloring.members(blocked.target)) {
    if (!g->adjacent(blocked.v, t)) {
      g->add_edge(blocked.v, t);
      break;
    }
  }
  AlmostEquitableState three = blocked.state;
  three.graph = g;
  CHECK_THROWS_AS(two_for_one_swap(three, blocked.v, blocked.w, blocked.w2), PreconditionError);
}

TEST_CASE("chain_relocate") {
  Rng rng(41);
  for (int round = 0; round < 20; ++round) {
    const auto c = crafted::double_swap_case(rng);
    ChainSpec spec{rule::kDoubleSwap,
                   {{c.p, c.f_class}, {c.f_witness, c.z_class}, {c.q, c.t_class}, {c.t1, c.home}, {c.z, c.home}},
                   {{c.t1, c.z}, {c.t2, c.z}}};
    const MoveOutcome out = chain_relocate(c.state, spec);
    CHECK(out.kind == OutcomeKind::Expanded);
    CHECK(crafted::reference_accessible(*out.state)[static_cast<std::size_t>(c.t_class)]);
    check_outcome(c.state, out);

    ChainSpec bad = spec;
    bad.required_non_edges.push_back({c.p, c.t1});
    CHECK_THROWS_AS(chain_relocate(c.state, bad), MoveRejected);
  }
  const auto d = crafted::nb2_case(rng, crafted::Nb2Variant::SwapA1);
  ChainSpec two{"chain-swap", {{d.v, d.state.coloring.class_of(d.u)}, {d.u, d.state.small}}, {}};
  const MoveOutcome out = chain_relocate(d.state, two);
  CHECK(out.trace.steps.size() >= 2);
  check_outcome(d.state, out);
}

TEST_CASE("normalize_terminal_pair") {
  Layout L(4, 3, 0);
  // 2 reaches 0 only through 1; class 0 keeps a vertex free of class 1.
  join_except(L, {{L.at(1, 0), 0}, {L.at(2, 0), 1}, {L.at(0, 0), 1}});
  x_to_classes(L, {0, 1, 2});
  const auto st = L.build();
  const Analysis an = analyze(st);
  REQUIRE(an.ap.a() == 3);
  CHECK(blocks(an.h, an.ap, 1, 2));
  const MoveOutcome out = normalize_terminal_pair(st);
  CHECK(out.kind == OutcomeKind::Normalized);
  REQUIRE(out.state);
  CHECK(out.state->small == 1);
  const Analysis after = analyze(*out.state);
  CHECK(after.ap.a() == 3);
  for (ClassIndex c : after.ap.a_classes) {
    if (c != after.ap.small) CHECK(after.is_terminal(c));
  }
  check_outcome(st, out);
  const MoveOutcome again = normalize_terminal_pair(*out.state);
  CHECK(again.trace.empty());
  CHECK(again.state->coloring == out.state->coloring);

  CHECK_THROWS_AS(normalize_terminal_pair(chain_state(4)), MoveRejected);
}

TEST_CASE("normalize_movable_balance") {
  Layout L(3, 4, 0);
  const Vertex hub = L.at(1, 3);
  for (Vertex a : L.members(0)) L.edge(a, hub);
  for (Vertex b : L.members(2)) {
    L.edge(b, L.at(0, 0));
    L.edge(b, hub);
  }
  x_to_classes(L, {0, 1});
  const auto st = L.build();
  const Analysis an = analyze(st);
  REQUIRE(an.ap.a() == 2);
  REQUIRE(an.h.witnesses(1, 0).size() >= an.h.witnesses(0, 1).size() + 2);
  const MoveOutcome out = normalize_movable_balance(st);
  REQUIRE(out.state);
  const Analysis after = analyze(*out.state);
  if (out.kind == OutcomeKind::Normalized) {
    const ClassIndex s2 = after.ap.small;
    const ClassIndex other = after.ap.a_classes[0] == s2 ? after.ap.a_classes[1] : after.ap.a_classes[0];
    CHECK(after.h.witnesses(other, s2).size() <= after.h.witnesses(s2, other).size() + 1);
    const MoveOutcome again = normalize_movable_balance(*out.state);
    CHECK(again.trace.empty());
  }
  check_outcome(st, out);

  Rng rng(43);
  for (int round = 0; round < 40; ++round) {
    const auto rs = crafted::random_state(rng, 3 + rng.below(5), 3 + rng.below(3), 2);
    if (analyze(rs).ap.a() != 2) continue;
    try {
      const MoveOutcome o = normalize_movable_balance(rs);
      check_outcome(rs, o);
      if (o.kind == OutcomeKind::Normalized) {
        const Analysis a2 = analyze(*o.state);
        const ClassIndex s2 = a2.ap.small;
        const ClassIndex other = a2.ap.a_classes[0] == s2 ? a2.ap.a_classes[1] : a2.ap.a_classes[0];
        CHECK(a2.h.witnesses(other, s2).size() <= a2.h.witnesses(s2, other).size() + 1);
      }
    } catch (const MoveRejected&) {
    }
  }
}

TEST_CASE("make_nice") {
  Rng rng(47);
  const auto nice = crafted::nice_a5_state(rng);
  const Analysis an = analyze(nice);
  REQUIRE(an.ap.a() == 5);
  CHECK(is_nice(an.h, an.ap));
  CHECK(make_nice(nice).trace.empty());

  Layout L(8, 3, 0);
  join_except(L, {{L.at(1, 0), 0}, {L.at(2, 0), 1}, {L.at(3, 0), 1}, {L.at(4, 0), 1}});
  // B vertices already see every A vertex through join_except; cut the B-B
  // edges so the B classes stay out of A regardless.
  x_to_classes(L, {0, 1, 2, 3, 4});
  const auto st = L.build();
  const Analysis before = analyze(st);
  REQUIRE(before.ap.a() == 5);
  CHECK_FALSE(is_nice(before.h, before.ap));
  const MoveOutcome out = make_nice(st);
  REQUIRE(out.state);
  const Analysis after = analyze(*out.state);
  CHECK((after.ap.a() > 5 || is_nice(after.h, after.ap)));
  check_outcome(st, out);
  CHECK_THROWS_AS(make_nice(crafted::k9_state()), MoveRejected);
}

TEST_CASE("unmovable_place") {
  Layout L(3, 3, 0);
  const Vertex v = L.at(1, 0);
  const Vertex u = L.at(2, 0);
  L.edge(u, v);
  L.edge(u, L.at(0, 0));
  L.edge(L.at(2, 1), L.at(1, 1));
  L.edge(L.at(2, 1), L.at(0, 1));
  L.edge(L.at(2, 2), L.at(1, 2));
  L.edge(L.at(2, 2), L.at(0, 0));
  L.edge(L.at(1, 1), L.at(0, 0));
  L.edge(L.at(1, 2), L.at(0, 1));
  L.edge(L.x(), L.at(0, 0));
  L.edge(L.x(), L.at(1, 1));
  const auto st = L.build();
  const Analysis an = analyze(st);
  REQUIRE(an.ap.a() == 2);
  const auto out = unmovable_place(st);
  REQUIRE(out);
  CHECK(out->kind == OutcomeKind::Placed);
  CHECK(out->rule == rule::kUnmovablePlace);
  check_outcome(st, *out);

  CHECK_FALSE(unmovable_place(crafted::k9_state()));
}

TEST_CASE("expand_accessibility") {
  Layout open(3, 2, 0);
  CHECK_THROWS_AS(expand_accessibility(open.build(), EngineOptions{}), PreconditionError);

  Rng rng(53);
  int expanded = 0;
  for (int round = 0; round < 60; ++round) {
    const auto c = crafted::nb2_case(rng, crafted::Nb2Variant::SwapA1);
    const Analysis an = analyze(c.state);
    bool fits = false;
    for (ClassIndex d : d_of_x(c.state)) fits = fits || an.ap.accessible(d);
    if (fits) continue;
    const ExpandResult res = expand_accessibility(c.state, EngineOptions{});
    REQUIRE(std::holds_alternative<MoveOutcome>(res));
    const MoveOutcome& out = std::get<MoveOutcome>(res);
    CHECK((out.kind != OutcomeKind::Normalized || is_sanctioned_restructure(out.rule)));
    check_outcome(c.state, out);
    ++expanded;
  }
  CHECK(expanded > 0);

  const auto k9 = crafted::k9_state();
  const ExpandResult first = expand_accessibility(k9, EngineOptions{});
  const ExpandResult second = expand_accessibility(k9, EngineOptions{});
  REQUIRE(std::holds_alternative<Stuck>(first));
  REQUIRE(std::holds_alternative<Stuck>(second));
  CHECK(std::get<Stuck>(first).reason == std::get<Stuck>(second).reason);
  CHECK(std::get<Stuck>(first).notes == std::get<Stuck>(second).notes);
}

TEST_CASE("search_expansion outcomes are sound") {
  Rng rng(59);
  int found = 0;
  for (int round = 0; round < 60; ++round) {
    const auto st = crafted::random_state(rng, 4 + rng.below(5), 2 + rng.below(3), 1 + rng.below(3));
    const auto out = search_expansion(st, 500);
    if (!out) continue;
    ++found;
    CHECK(out->rule == rule::kSearch);
    check_outcome(st, *out);
  }
  CHECK(found > 0);
  CHECK_FALSE(search_expansion(crafted::k9_state(), 500));
}
