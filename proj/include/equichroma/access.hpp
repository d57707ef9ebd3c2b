#pragma once

#include <boost/rational.hpp>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "equichroma/coloring.hpp"

namespace equichroma {

using Rational = boost::rational<std::int64_t>;

// Number of colored neighbours of each vertex in each class.
class NeighborCounts {
 public:
  NeighborCounts() = default;
  NeighborCounts(const Graph& g, const Coloring& c);

  std::uint32_t operator()(Vertex v, ClassIndex c) const {
    return data_[static_cast<std::size_t>(v) * r_ + static_cast<std::size_t>(c)];
  }

 private:
  std::size_t r_ = 0;
  std::vector<std::uint32_t> data_;
};

// Class-level digraph: arc i -> j iff some vertex of class i has no
// neighbour in class j. Witness lists are ascending.
class AuxDigraph {
 public:
  AuxDigraph() = default;
  explicit AuxDigraph(std::size_t r) : r_(r), witnesses_(r * r) {}

  std::size_t num_classes() const noexcept { return r_; }
  bool has_arc(ClassIndex i, ClassIndex j) const { return !witnesses(i, j).empty(); }
  std::span<const Vertex> witnesses(ClassIndex i, ClassIndex j) const { return witnesses_[index(i, j)]; }
  void add_witness(ClassIndex i, ClassIndex j, Vertex v) { witnesses_[index(i, j)].push_back(v); }

  std::vector<ClassIndex> out_neighbors(ClassIndex i) const;
  std::vector<ClassIndex> in_neighbors(ClassIndex j) const;
  std::size_t arc_count() const;

  bool operator==(const AuxDigraph&) const = default;

 private:
  std::size_t index(ClassIndex i, ClassIndex j) const {
    return static_cast<std::size_t>(i) * r_ + static_cast<std::size_t>(j);
  }

  std::size_t r_ = 0;
  std::vector<std::vector<Vertex>> witnesses_;
};

// O(r*n + m) via neighbour counts.
AuxDigraph build_aux(const AlmostEquitableState& state);
AuxDigraph build_aux(const Coloring& c, const NeighborCounts& counts);
// Definition-by-definition rebuild used for cross-checking.
AuxDigraph build_aux_naive(const AlmostEquitableState& state);

// `i -> j : [w1 w2 ...]` per arc (1-based witnesses).
void dump_aux(std::ostream& out, const AuxDigraph& h);

struct AccessPartition {
  ClassIndex small = 0;
  std::vector<char> in_a;
  std::vector<ClassIndex> a_classes;
  std::vector<ClassIndex> b_classes;
  // Next hop on a shortest path to the small class; kUncolored for the small
  // class itself and for every class in B.
  std::vector<ClassIndex> parent;
  std::vector<int> dist;

  std::size_t a() const noexcept { return a_classes.size(); }
  std::size_t b() const noexcept { return b_classes.size(); }
  bool accessible(ClassIndex c) const { return in_a[static_cast<std::size_t>(c)] != 0; }
};

AccessPartition accessible(const AuxDigraph& h, ClassIndex small);

// Classes that reach `target` when `removed` is deleted from the digraph.
std::vector<char> reaches_without(const AuxDigraph& h, ClassIndex target, ClassIndex removed);

// X blocks Y (both accessible, distinct) iff Y cannot reach the small class
// once X is removed.
bool blocks(const AuxDigraph& h, const AccessPartition& ap, ClassIndex x, ClassIndex y);

// Accessible classes that block no other accessible class, ascending.
std::vector<ClassIndex> terminal_classes(const AuxDigraph& h, const AccessPartition& ap);

// Strongly connected components of the subdigraph induced by `subset` (all
// classes when empty), sources first; members ascending.
std::vector<std::vector<ClassIndex>> strong_components(const AuxDigraph& h, std::span<const ClassIndex> subset = {});

// Shortest class path from any of `sources` to `target` using only classes
// with allowed[c] != 0. Lowest ids win ties. Empty when unreachable.
std::vector<ClassIndex> find_class_path(const AuxDigraph& h, std::span<const ClassIndex> sources, ClassIndex target,
                                        std::span<const char> allowed);

// Classes with no neighbour of x.
std::vector<ClassIndex> d_of_x(const AlmostEquitableState& state);

std::vector<Vertex> movable_set(const AuxDigraph& h, ClassIndex from, ClassIndex to);

struct SoloProfile {
  Vertex v = 0;
  // Solo neighbours of v in B: u in B whose only neighbour in v's class is v.
  std::vector<Vertex> q;
  // Members of q with a non-neighbour elsewhere in q.
  std::vector<Vertex> q_prime;
  // Classes of B containing no neighbour of v.
  std::vector<ClassIndex> f0;
};

// Throws PreconditionError unless v is colored and its class is accessible.
SoloProfile solo_profile(const AlmostEquitableState& state, const AccessPartition& ap, Vertex v);

// Sum over B-neighbours u of v of 1/||V,u|| (V the class of v), with terms for
// u in a `halved` class multiplied by 1/2.
Rational weighted_solo_score(const AlmostEquitableState& state, const AccessPartition& ap, Vertex v,
                             std::span<const ClassIndex> halved = {});

// A vertex of a terminal class is ordinary when another vertex of its class
// is movable to a different accessible class, or when a <= 2.
bool is_ordinary(const AlmostEquitableState& state, const AuxDigraph& h, const AccessPartition& ap,
                 std::span<const ClassIndex> terminal, Vertex v);

// Everything the move finders re-derive from scratch for one state.
struct Analysis {
  NeighborCounts counts;
  AuxDigraph h;
  AccessPartition ap;
  std::vector<ClassIndex> terminal;

  bool is_terminal(ClassIndex c) const;
};

Analysis analyze(const AlmostEquitableState& state);

struct SoloDiagnostics {
  std::size_t vertices_checked = 0;
  // q(v) >= 8 with q'(v) < 5, or q(v) = 7 with q'(v) < 4.
  std::size_t semi_planar_violations = 0;
  // q(v) >= 5 with q'(v) < q(v) - 1.
  std::size_t planar_violations = 0;
  // Pairs U in B, V in A with |E(U, V)| < s.
  std::size_t cut_violations = 0;
};

SoloDiagnostics solo_diagnostics(const AlmostEquitableState& state, const Analysis& analysis);

}  // namespace equichroma
