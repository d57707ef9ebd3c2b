#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <variant>
#include <vector>

#include "equichroma/access.hpp"
#include "equichroma/coloring.hpp"

namespace equichroma {

namespace rule {
inline constexpr const char* kCascade = "cascade";
inline constexpr const char* kNb2a = "nb2a";
inline constexpr const char* kNb2aSmallSwap = "nb2a-smallswap";
inline constexpr const char* kNb2b = "nb2b";
inline constexpr const char* kTwoForOne = "two-for-one";
inline constexpr const char* kDoubleSwap = "chain-double-swap";
inline constexpr const char* kCaseV1Move = "case-V1-move";
inline constexpr const char* kTerminalPair = "norm-terminal-pair";
inline constexpr const char* kBalance = "norm-balance";
inline constexpr const char* kNice = "norm-nice";
inline constexpr const char* kUnmovablePlace = "unmovable-place";
inline constexpr const char* kUnmovableSwap = "unmovable-swap";
inline constexpr const char* kSearch = "search-expansion";
}  // namespace rule

// Restructurings allowed to keep |A| unchanged while moving the small class.
bool is_sanctioned_restructure(std::string_view rule_tag);

enum class OutcomeKind { Placed, Expanded, Normalized };

std::string_view to_string(OutcomeKind kind);

struct MoveOutcome {
  OutcomeKind kind = OutcomeKind::Normalized;
  std::string rule;
  MoveTrace trace;
  std::size_t a_before = 0;
  std::size_t a_after = 0;
  // Set for Expanded and Normalized.
  std::optional<AlmostEquitableState> state;
  // Set for Placed: a verified equitable coloring of all of G.
  std::optional<Coloring> coloring;
};

struct Relocation {
  Vertex vertex;
  ClassIndex to;
};

// Realizes the relocations in the given order as a trace whose every prefix
// is proper, parking a vertex (and retrying it later) whenever its target
// still holds a neighbour. Throws MoveRejected if the end state is improper,
// not almost equitable (or, when x is relocated, not equitable), or a vertex
// is relocated twice.
MoveTrace schedule_relocations(const AlmostEquitableState& state, std::span<const Relocation> moves);

// Moves x into `target` (accessible, free of x's neighbours) and one witness
// per arc along the parent path to the small class.
MoveOutcome cascade_place(const AlmostEquitableState& state, ClassIndex target);

// Exchange of an ordinary vertex v of a terminal class with its solo
// neighbour u in Q'(v) when u is v's only neighbour in u's class. When a = 2
// and v is the only vertex of its class movable within A, v moves into the
// small class instead.
MoveOutcome nb2_exchange_a(const AlmostEquitableState& state, Vertex v, Vertex u);

// v moves into path[0] (a class of F0(v)), one witness shifts along each arc
// of the path inside B, and u leaves the last class for v's class. A
// single-class path is the degenerate exchange where u is v's only neighbour
// in its class.
MoveOutcome nb2_exchange_b(const AlmostEquitableState& state, Vertex v, Vertex u, std::span<const ClassIndex> path);

struct Restructure {
  AlmostEquitableState state;
  MoveTrace trace;
};

// v in the small class trades places with its two solo neighbours w, w2,
// which are its only neighbours in their class. That class, minus w and w2
// plus v, becomes the small class.
Restructure two_for_one_swap(const AlmostEquitableState& state, Vertex v, Vertex w, Vertex w2);

struct ChainSpec {
  std::string rule;
  std::vector<Relocation> moves;
  std::vector<Edge> required_non_edges;
};

// Applies a multi-vertex relocation atomically after checking every required
// non-adjacency. Rejected unless |A| strictly grows.
MoveOutcome chain_relocate(const AlmostEquitableState& state, const ChainSpec& spec);

// a = 3: makes both non-small accessible classes terminal by moving a witness
// of the blocking class into the small class.
MoveOutcome normalize_terminal_pair(const AlmostEquitableState& state);

// a = 2: ensures m2 <= m1 + 1, where m1 (m2) counts vertices movable from the
// small (other accessible) class to the other (small) one.
MoveOutcome normalize_movable_balance(const AlmostEquitableState& state);

// Every accessible class other than the small one blocks at most one
// accessible class.
bool is_nice(const AuxDigraph& h, const AccessPartition& ap);

// a = 5: witness moves into the small class until H[A] is nice. Throws
// TheoryViolation when no such move exists.
MoveOutcome make_nice(const AlmostEquitableState& state);

// A solo vertex v of a non-small accessible class, free of some other
// accessible class Vj: x takes the place of v's solo neighbour u, u takes v's
// place, v moves to Vj and witnesses shift to the small class (Placed). When
// Vj cannot reach the small class without v's class, v trades with a vertex
// of Vj movable to v's class and not adjacent to u (Expanded). nullopt when
// neither applies.
std::optional<MoveOutcome> unmovable_place(const AlmostEquitableState& state);

struct EngineOptions {
  // Normalizations whose guarantees rely on planar counting with r = 8.
  bool planar_normalizations = true;
  bool search_fallback = true;
  std::size_t search_budget = 3000;
};

struct Stuck {
  std::string reason;
  std::vector<std::string> notes;
};

using ExpandResult = std::variant<MoveOutcome, Stuck>;

// Tries the catalogue in fixed priority order and returns the first
// applicable outcome. Outcomes whose coloring fingerprint is in `seen` are
// skipped. Throws PreconditionError when x already fits an accessible class.
ExpandResult expand_accessibility(const AlmostEquitableState& state, const EngineOptions& options,
                                  const std::unordered_set<std::uint64_t>* seen = nullptr);

// Bounded breadth-first search over witness moves into the small class and
// solo exchanges, looking for a state with larger |A| or one where x fits an
// accessible class. Depth is capped at r.
std::optional<MoveOutcome> search_expansion(const AlmostEquitableState& state, std::size_t budget);

}  // namespace equichroma
