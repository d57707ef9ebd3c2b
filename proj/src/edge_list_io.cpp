#include "equichroma/edge_list_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string_view>
#include <vector>

#include "equichroma/errors.hpp"

namespace equichroma {
namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::uint64_t parse_count(std::string_view token, std::size_t line_no) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw InputError("line " + std::to_string(line_no) + ": expected a non-negative integer, got '" +
                     std::string(token) + "'");
  }
  return value;
}

}  // namespace

Graph read_edge_list(std::istream& in) {
  std::optional<Graph> g;
  std::uint64_t declared_edges = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto tokens = split_ws(line);
    if (tokens.empty() || tokens[0] == "c") continue;
    if (tokens[0] == "p") {
      if (g) throw InputError("line " + std::to_string(line_no) + ": duplicate header");
      if (tokens.size() != 4 || (tokens[1] != "edge" && tokens[1] != "col")) {
        throw InputError("line " + std::to_string(line_no) + ": expected 'p edge <n> <m>'");
      }
      g.emplace(parse_count(tokens[2], line_no));
      declared_edges = parse_count(tokens[3], line_no);
    } else if (tokens[0] == "e") {
      if (!g) throw InputError("line " + std::to_string(line_no) + ": edge before header");
      if (tokens.size() != 3) throw InputError("line " + std::to_string(line_no) + ": expected 'e <u> <v>'");
      const std::uint64_t u = parse_count(tokens[1], line_no);
      const std::uint64_t v = parse_count(tokens[2], line_no);
      if (u == 0 || v == 0 || u > g->num_vertices() || v > g->num_vertices()) {
        throw InputError("line " + std::to_string(line_no) + ": vertex out of range");
      }
      if (u == v) throw InputError("line " + std::to_string(line_no) + ": self-loop");
      if (!g->add_edge(static_cast<Vertex>(u - 1), static_cast<Vertex>(v - 1))) {
        throw InputError("line " + std::to_string(line_no) + ": repeated edge");
      }
    } else {
      throw InputError("line " + std::to_string(line_no) + ": unknown record '" + std::string(tokens[0]) + "'");
    }
  }
  if (!g) throw InputError("missing 'p edge' header");
  if (g->num_edges() != declared_edges) {
    throw InputError("header declares " + std::to_string(declared_edges) + " edges, found " +
                     std::to_string(g->num_edges()));
  }
  return std::move(*g);
}

Graph read_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return read_edge_list(in);
}

void write_edge_list(std::ostream& out, const Graph& g) {
  out << "p edge " << g.num_vertices() << ' ' << g.num_edges() << '\n';
  for (const Edge& e : g.edges()) out << "e " << e.u + 1 << ' ' << e.v + 1 << '\n';
}

std::string to_edge_list(const Graph& g) {
  std::ostringstream out;
  write_edge_list(out, g);
  return out.str();
}

std::uint64_t graph_checksum(const Graph& g) {
  std::uint64_t hash = 1469598103934665603ULL;
  for (unsigned char c : to_edge_list(g)) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  return hash;
}

}  // namespace equichroma
