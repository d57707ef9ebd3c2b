#include "equichroma/dump.hpp"

#include <istream>
#include <sstream>

#include "equichroma/access.hpp"
#include "equichroma/edge_list_io.hpp"
#include "equichroma/errors.hpp"

namespace equichroma {

namespace {

void write_classes(std::ostream& out, const char* label, std::span<const ClassIndex> cs) {
  out << label << ':';
  for (ClassIndex c : cs) out << ' ' << c;
  out << '\n';
}

std::string read_block(std::istream& in, const std::string& end_marker) {
  std::string block;
  std::string line;
  while (std::getline(in, line)) {
    if (line == end_marker) return block;
    block += line;
    block += '\n';
  }
  throw InputError("dump: missing '" + end_marker + "'");
}

}  // namespace

std::string state_dump(const AlmostEquitableState& state, const EngineOptions& options, std::string_view reason,
                       std::span<const std::string> notes) {
  std::ostringstream out;
  out << "equichroma-dump v1\n";
  out << "reason " << reason << '\n';
  out << "r " << state.r() << " s " << state.s << " x " << state.x + 1 << " y " << state.y + 1 << " small "
      << state.small << '\n';
  out << "normalizations " << (options.planar_normalizations ? "on" : "off") << '\n';
  out << "search " << (options.search_fallback ? "on" : "off") << ' ' << options.search_budget << '\n';
  out << "graph\n";
  write_edge_list(out, state.g());
  out << "end-graph\ncoloring\n";
  write_coloring(out, state.coloring);
  out << "end-coloring\naux\n";
  const Analysis an = analyze(state);
  dump_aux(out, an.h);
  out << "end-aux\ndiagnostics\n";
  out << "a " << an.ap.a() << " b " << an.ap.b() << '\n';
  write_classes(out, "accessible", an.ap.a_classes);
  write_classes(out, "terminal", an.terminal);
  const std::vector<ClassIndex> dx = d_of_x(state);
  write_classes(out, "free-of-x", dx);
  const SoloDiagnostics sd = solo_diagnostics(state, an);
  out << "solo-checks " << sd.vertices_checked << " semi-planar " << sd.semi_planar_violations << " planar "
      << sd.planar_violations << " cut " << sd.cut_violations << '\n';
  for (const std::string& note : notes) out << "note " << note << '\n';
  out << "end\n";
  return out.str();
}

DumpCase parse_dump(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "equichroma-dump v1") throw InputError("dump: bad header");
  DumpCase dc;
  std::size_t r = 0;
  std::size_t s = 0;
  std::size_t x = 0;
  std::size_t y = 0;
  long small = 0;
  std::optional<Graph> graph;
  std::optional<std::string> coloring_text;
  while (std::getline(in, line)) {
    std::istringstream tokens(line);
    std::string head;
    tokens >> head;
    if (head == "reason") {
      dc.reason = line.size() > 7 ? line.substr(7) : "";
    } else if (head == "r") {
      std::string k1, k2, k3, k4;
      if (!(tokens >> r >> k1 >> s >> k2 >> x >> k3 >> y >> k4 >> small) || k1 != "s" || k2 != "x" || k3 != "y" ||
          k4 != "small" || x == 0 || y == 0) {
        throw InputError("dump: bad state line");
      }
    } else if (head == "normalizations") {
      std::string v;
      tokens >> v;
      dc.options.planar_normalizations = v == "on";
    } else if (head == "search") {
      std::string v;
      tokens >> v >> dc.options.search_budget;
      dc.options.search_fallback = v == "on";
    } else if (head == "graph") {
      std::istringstream block(read_block(in, "end-graph"));
      graph = read_edge_list(block);
    } else if (head == "coloring") {
      coloring_text = read_block(in, "end-coloring");
    } else if (head == "aux") {
      read_block(in, "end-aux");
    } else if (head == "diagnostics") {
      read_block(in, "end");
      break;
    } else if (!head.empty()) {
      throw InputError("dump: unknown record '" + head + "'");
    }
  }
  if (!graph || !coloring_text || r == 0) throw InputError("dump: incomplete");
  std::istringstream cblock(*coloring_text);
  Coloring c = read_coloring(cblock, graph->num_vertices());
  if (c.num_classes() != r) throw InputError("dump: class count disagrees with r");
  if (x > graph->num_vertices() || y > graph->num_vertices()) throw InputError("dump: x or y out of range");
  dc.state.graph = std::make_shared<const Graph>(std::move(*graph));
  dc.state.coloring = std::move(c);
  dc.state.s = s;
  dc.state.x = static_cast<Vertex>(x - 1);
  dc.state.y = static_cast<Vertex>(y - 1);
  dc.state.small = static_cast<ClassIndex>(small);
  try {
    check_invariants(dc.state);
  } catch (const PreconditionError& e) {
    throw InputError(std::string("dump: ") + e.what());
  }
  return dc;
}

}  // namespace equichroma
