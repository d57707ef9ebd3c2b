#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "equichroma/graph.hpp"

namespace equichroma {

enum class Family { MaximalPlanar, PlanarDegreeBounded, BipartitePlanar, Toroidal6Regular, ErdosRenyiCapped };

std::string_view to_string(Family family);
std::optional<Family> parse_family(std::string_view text);

struct GenSpec {
  Family family = Family::PlanarDegreeBounded;
  std::size_t n = 0;
  // 0 means no cap.
  std::size_t delta_cap = 0;
  std::uint64_t seed = 1;
};

// Deterministic per spec. Planar families are grown face by face so the
// embedding is a construction certificate; the toroidal family is a
// triangulated w x h torus grid (w, h >= 3) under a seeded relabelling.
// InputError on infeasible specs (e.g. n < 3 for maximal-planar, n with no
// factorization w*h, w, h >= 3, for the torus).
Graph generate(const GenSpec& spec);

// Deletes an edge at a maximum-degree vertex (towards its highest-degree
// neighbour, lowest id on ties) until the maximum degree is at most cap.
void cap_degree(Graph& g, std::size_t cap);

}  // namespace equichroma
