#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "equichroma/access.hpp"
#include "equichroma/coloring.hpp"
#include "equichroma/graph.hpp"
#include "equichroma/repair.hpp"

namespace equichroma {

struct SolverConfig {
  std::size_t r = 8;
  Surface surface = Surface::Planar;
  // 0 inserts edges in the canonical order; any other value shuffles ties.
  std::uint64_t seed = 0;
  // Writes one line per engine step to `audit_log` and runs the discharge
  // auditor on every a = 3 / nice a = 5 state of a planar r = 8 repair.
  bool audit = false;
  std::ostream* audit_log = nullptr;
  // Runs the solo-neighbour checks on every repair state.
  bool diagnostics = false;
  // Cross-checks existence with the brute-force oracle when n is at most this.
  std::size_t oracle_cross_check_max_n = 0;
  // Rejects inputs that break the surface edge bound or contain K_{3,3}
  // (planar) / K_{3,7} (non-negative Euler characteristic).
  bool check_input = true;
  // Node cap of the last-resort backtracking in hs_equitable.
  std::size_t backtrack_node_cap = 5'000'000;
  std::size_t search_budget = 3000;
};

struct SolverStats {
  std::size_t insertions = 0;
  std::size_t conflicts = 0;
  std::size_t repairs = 0;
  std::size_t driver_steps = 0;
  std::map<std::string, std::size_t> rule_counts;
  // Largest r - |A| seen at the start of a repair step.
  std::size_t max_deficit = 0;
  // "identity", "pad", "strip" or "hs-pad".
  std::string reduction = "identity";
  bool hs_route = false;
  bool backtracked = false;
  std::size_t diagnostic_states = 0;
  std::size_t semi_planar_solo_violations = 0;
  std::size_t planar_solo_violations = 0;
  std::size_t cut_violations = 0;
  std::size_t discharge_audits = 0;
  std::size_t discharge_conservation_failures = 0;
  std::size_t discharge_flagged = 0;
  std::optional<bool> oracle_found;
  double wall_ms = 0;
};

struct SolveResult {
  Coloring coloring;
  SolverStats stats;
};

// Equitable r-coloring of g under the theorem hypotheses (planar r >= 8 or
// non-negative Euler characteristic r >= 9, with max degree <= r), or
// through hs_equitable when r >= max degree + 1. The result always passes
// verify. Throws InputError, TheoryViolation or ResourceError.
SolveResult equitable_color(const Graph& g, const SolverConfig& cfg);

struct RestorePlan {
  std::size_t original_n = 0;
  std::size_t r = 0;
  // Number of K_p vertices appended after the original vertices.
  std::size_t padded = 0;
  // Stripped vertices v_1..v_k in elimination order; reduced vertex i is
  // original vertex kept[i].
  std::vector<Vertex> stripped;
  std::vector<Vertex> kept;
};

struct Reduction {
  Graph reduced;
  RestorePlan plan;
};

// n = rs - p: identity for p = 0, K_p padding for 1 <= p <= 4, otherwise the
// first r - p vertices of an elimination order (first degree <= 5, then
// residual degree <= 6) are removed. nullopt when no such order exists.
std::optional<Reduction> reduce_divisibility(const Graph& g, std::size_t r);

// Pads with K_p for any p; valid whenever r exceeds the maximum degree.
Reduction pad_to_multiple(const Graph& g, std::size_t r);

// Maps an equitable coloring of the reduced graph back to g.
Coloring restore(const Graph& g, const RestorePlan& plan, const Coloring& reduced);

// Edge sequence whose reversal removes, at each step, an edge at a vertex of
// minimum positive degree; the first vertex of each pair is that vertex.
std::vector<Edge> insertion_order(const Graph& g, std::uint64_t seed);

// n = r*s. `degree_bound` (0 = none) caps the degree of x at every conflict.
Coloring solve_divisible(const Graph& g, std::size_t r, std::size_t degree_bound, const EngineOptions& options,
                         const SolverConfig& cfg, SolverStats& stats);

// Drives the repair loop on one almost equitable state.
Coloring repair(AlmostEquitableState state, const EngineOptions& options, const SolverConfig& cfg, SolverStats& stats);

// Equitable k-coloring for k >= max degree + 1.
Coloring hs_equitable(const Graph& g, std::size_t k, const SolverConfig& cfg, SolverStats& stats);

// Complete backtracking for an equitable k-coloring; ResourceError past the
// node cap, nullopt when none exists.
std::optional<Coloring> backtrack_equitable(const Graph& g, std::size_t k, std::size_t node_cap);

enum class Scenario { A3Case31, A5Nice };

std::string_view to_string(Scenario s);

struct ChargeReport {
  std::vector<Rational> charge;
  Rational total{0};
  std::size_t edges = 0;
  Rational r1_flow{0};
  Rational r2_flow{0};
  Rational r3_flow{0};
  bool conserved = false;
  std::vector<Vertex> below_threshold;
};

// Splits the unit charge of every edge of G - x by the rules: an edge with
// an end in the small class gives everything to the other end; an edge from
// A - V1 to a solo neighbour in B gives everything to the B end; otherwise
// half to each end. Flags B vertices below 3 (a3-case31) or 5 (a5-nice), and
// A - V1 vertices below 3/2 (non-isolated, a3-case31) or 5/2 (not isolated
// in G, a5-nice).
ChargeReport discharge_audit(const AlmostEquitableState& state, Scenario scenario);

}  // namespace equichroma
