#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "equichroma/graph.hpp"

namespace equichroma {

using ClassIndex = std::int32_t;
inline constexpr ClassIndex kUncolored = -1;

// Partition of the colored vertices into r classes. Class member lists are
// kept sorted ascending so iteration (and serialization) is deterministic.
class Coloring {
 public:
  Coloring() = default;
  Coloring(std::size_t n, std::size_t r);

  std::size_t num_vertices() const noexcept { return class_of_.size(); }
  std::size_t num_classes() const noexcept { return classes_.size(); }
  std::size_t colored_count() const noexcept { return colored_; }

  ClassIndex class_of(Vertex v) const { return class_of_[v]; }
  bool colored(Vertex v) const { return class_of_[v] != kUncolored; }
  std::span<const Vertex> members(ClassIndex c) const { return classes_[static_cast<std::size_t>(c)]; }
  std::size_t class_size(ClassIndex c) const { return classes_[static_cast<std::size_t>(c)].size(); }

  void assign(Vertex v, ClassIndex c);
  void unassign(Vertex v);
  void move(Vertex v, ClassIndex to);

  // Order-independent fingerprint of the assignment.
  std::uint64_t fingerprint() const;

  bool operator==(const Coloring& other) const { return class_of_ == other.class_of_; }

 private:
  std::vector<ClassIndex> class_of_;
  std::vector<std::vector<Vertex>> classes_;
  std::size_t colored_ = 0;
};

// Round-robin equitable coloring of an edgeless vertex set: v -> v mod r.
Coloring round_robin(std::size_t n, std::size_t r);

struct Verdict {
  bool proper = false;
  bool equitable = false;
  std::vector<std::size_t> class_sizes;
  std::optional<Edge> violating_edge;
};

// Direct O(n + m) scan. Throws StructuralError if a vertex is uncolored.
Verdict verify(const Graph& g, const Coloring& c, std::size_t r);

struct MoveStep {
  Vertex vertex;
  ClassIndex from;
  ClassIndex to;
  bool operator==(const MoveStep&) const = default;
};

// Ordered single-vertex reassignments. `from`/`to` may be kUncolored, which
// lets exchanges park a vertex while its partner leaves the target class.
struct MoveTrace {
  std::vector<MoveStep> steps;
  std::vector<std::string> notes;

  bool empty() const noexcept { return steps.empty(); }
  MoveTrace reversed() const;
  void append(const MoveTrace& other);
  void add(Vertex v, ClassIndex from, ClassIndex to) { steps.push_back({v, from, to}); }
};

std::string format_trace(const MoveTrace& t);

// Applies `t` atomically: either every step applies and each prefix keeps the
// colored subgraph proper, or `c` is left untouched and PreconditionError is
// thrown naming the offending step.
void apply_trace(const Graph& g, Coloring& c, const MoveTrace& t);

// Proper coloring of G - x with r classes, all of size s except the small
// class of size s-1.
struct AlmostEquitableState {
  std::shared_ptr<const Graph> graph;
  Vertex x = 0;
  // The conflicting neighbour of x at the time x was uncolored.
  Vertex y = 0;
  Coloring coloring;
  std::size_t s = 0;
  ClassIndex small = 0;

  const Graph& g() const { return *graph; }
  std::size_t r() const { return coloring.num_classes(); }
};

// Throws PreconditionError describing the first broken invariant.
void check_invariants(const AlmostEquitableState& state);

// Uncolors x from an equitable coloring whose classes all have size s. The
// coloring must be proper on G - x.
AlmostEquitableState uncolor(std::shared_ptr<const Graph> g, Coloring c, Vertex x, Vertex y);

// Applies a trace that keeps x uncolored and re-derives the small class.
// Atomic; throws PreconditionError if the result is not almost equitable.
void apply_trace(AlmostEquitableState& state, const MoveTrace& t);

// `class <i>: v1 v2 ...` per class (1-based vertices, ascending), then
// `r=<r> s=<s>` with s the largest class size.
void write_coloring(std::ostream& out, const Coloring& c);
std::string to_text(const Coloring& c);
// Inverse of write_coloring for an n-vertex graph.
Coloring read_coloring(std::istream& in, std::size_t n);

}  // namespace equichroma
