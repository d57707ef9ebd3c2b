#pragma once

#include <optional>

#include "equichroma/coloring.hpp"
#include "equichroma/graph.hpp"

namespace equichroma {

inline constexpr std::size_t kOracleMaxN = 16;

// Exhaustive search for an equitable r-coloring: vertices in index order,
// classes capped at ceil(n/r) with at most n mod r of them reaching it, and a
// vertex may open at most one new (empty) class. Returns a verified coloring
// or nullopt when none exists. InputError when n exceeds `max_n`.
std::optional<Coloring> oracle_equitable(const Graph& g, std::size_t r, std::size_t max_n = kOracleMaxN);

}  // namespace equichroma
