#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "equichroma/coloring.hpp"
#include "equichroma/repair.hpp"

namespace equichroma {

// Self-contained text snapshot of a stuck state: graph, coloring, x, y, the
// auxiliary digraph and per-vertex diagnostics. `parse_dump` reads back the
// parts needed to rerun the engine.
std::string state_dump(const AlmostEquitableState& state, const EngineOptions& options, std::string_view reason,
                       std::span<const std::string> notes = {});

struct DumpCase {
  AlmostEquitableState state;
  EngineOptions options;
  std::string reason;
};

DumpCase parse_dump(std::istream& in);

}  // namespace equichroma
