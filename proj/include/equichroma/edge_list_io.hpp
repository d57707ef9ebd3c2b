#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "equichroma/graph.hpp"

namespace equichroma {

// DIMACS-style edge list: `p edge <n> <m>` then `e <u> <v>` lines with
// 1-based vertices. Blank lines and `c` comment lines are skipped. Loops,
// repeated edges and an edge count that disagrees with the header are
// rejected with InputError.
Graph read_edge_list(std::istream& in);
Graph read_edge_list_file(const std::string& path);

// Byte-stable writer: edges sorted, each as `e u v` with u < v.
void write_edge_list(std::ostream& out, const Graph& g);
std::string to_edge_list(const Graph& g);

// FNV-1a over the canonical edge-list text.
std::uint64_t graph_checksum(const Graph& g);

}  // namespace equichroma
