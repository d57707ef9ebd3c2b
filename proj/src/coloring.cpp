#include "equichroma/coloring.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

#include "equichroma/errors.hpp"

namespace equichroma {

Coloring::Coloring(std::size_t n, std::size_t r) : class_of_(n, kUncolored), classes_(r) {}

void Coloring::assign(Vertex v, ClassIndex c) {
  if (class_of_[v] != kUncolored) throw PreconditionError("assign: vertex already colored");
  auto& members = classes_.at(static_cast<std::size_t>(c));
  members.insert(std::lower_bound(members.begin(), members.end(), v), v);
  class_of_[v] = c;
  ++colored_;
}

void Coloring::unassign(Vertex v) {
  const ClassIndex c = class_of_[v];
  if (c == kUncolored) throw PreconditionError("unassign: vertex not colored");
  auto& members = classes_[static_cast<std::size_t>(c)];
  members.erase(std::lower_bound(members.begin(), members.end(), v));
  class_of_[v] = kUncolored;
  --colored_;
}

void Coloring::move(Vertex v, ClassIndex to) {
  if (class_of_[v] != kUncolored) unassign(v);
  if (to != kUncolored) assign(v, to);
}

std::uint64_t Coloring::fingerprint() const {
  std::uint64_t hash = 1469598103934665603ULL;
  for (ClassIndex c : class_of_) {
    hash ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(c));
    hash *= 1099511628211ULL;
  }
  return hash;
}

Coloring round_robin(std::size_t n, std::size_t r) {
  Coloring c(n, r);
  for (Vertex v = 0; v < n; ++v) c.assign(v, static_cast<ClassIndex>(v % r));
  return c;
}

Verdict verify(const Graph& g, const Coloring& c, std::size_t r) {
  if (c.num_vertices() != g.num_vertices()) throw StructuralError("verify: coloring and graph sizes differ");
  if (c.num_classes() != r) throw StructuralError("verify: coloring has wrong number of classes");
  Verdict verdict;
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    if (!c.colored(v)) throw StructuralError("verify: vertex " + std::to_string(v + 1) + " is uncolored");
  }
  verdict.proper = true;
  for (Vertex u = 0; u < g.num_vertices() && verdict.proper; ++u) {
    for (Vertex w : g.neighbors(u)) {
      if (u < w && c.class_of(u) == c.class_of(w)) {
        verdict.proper = false;
        verdict.violating_edge = Edge{u, w};
        break;
      }
    }
  }
  verdict.class_sizes.resize(r);
  for (std::size_t i = 0; i < r; ++i) verdict.class_sizes[i] = c.class_size(static_cast<ClassIndex>(i));
  if (r > 0) {
    auto [lo, hi] = std::minmax_element(verdict.class_sizes.begin(), verdict.class_sizes.end());
    verdict.equitable = *hi - *lo <= 1;
  } else {
    verdict.equitable = g.num_vertices() == 0;
  }
  return verdict;
}

MoveTrace MoveTrace::reversed() const {
  MoveTrace out;
  out.notes = notes;
  out.steps.reserve(steps.size());
  for (auto it = steps.rbegin(); it != steps.rend(); ++it) out.steps.push_back({it->vertex, it->to, it->from});
  return out;
}

void MoveTrace::append(const MoveTrace& other) {
  steps.insert(steps.end(), other.steps.begin(), other.steps.end());
  notes.insert(notes.end(), other.notes.begin(), other.notes.end());
}

std::string format_trace(const MoveTrace& t) {
  std::ostringstream out;
  out << '[';
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    const MoveStep& st = t.steps[i];
    if (i) out << ' ';
    out << st.vertex + 1 << ':';
    if (st.from == kUncolored) out << '-'; else out << st.from;
    out << "->";
    if (st.to == kUncolored) out << '-'; else out << st.to;
  }
  out << ']';
  return out.str();
}

void apply_trace(const Graph& g, Coloring& c, const MoveTrace& t) {
  Coloring work = c;
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    const MoveStep& st = t.steps[i];
    const std::string where = "step " + std::to_string(i) + " (vertex " + std::to_string(st.vertex + 1) + ")";
    if (st.vertex >= work.num_vertices()) throw PreconditionError(where + ": vertex out of range");
    if (work.class_of(st.vertex) != st.from) throw PreconditionError(where + ": vertex not in source class");
    if (st.to != kUncolored) {
      if (st.to < 0 || static_cast<std::size_t>(st.to) >= work.num_classes()) {
        throw PreconditionError(where + ": target class out of range");
      }
      for (Vertex w : g.neighbors(st.vertex)) {
        if (w != st.vertex && work.class_of(w) == st.to) {
          throw PreconditionError(where + ": neighbour " + std::to_string(w + 1) + " already in class " +
                                  std::to_string(st.to));
        }
      }
    }
    work.move(st.vertex, st.to);
  }
  c = std::move(work);
}

void check_invariants(const AlmostEquitableState& state) {
  const Graph& g = state.g();
  const Coloring& c = state.coloring;
  const std::size_t r = c.num_classes();
  if (c.num_vertices() != g.num_vertices()) throw PreconditionError("state: coloring and graph sizes differ");
  if (r == 0 || g.num_vertices() != r * state.s) throw PreconditionError("state: n != r*s");
  if (c.colored(state.x)) throw PreconditionError("state: x is colored");
  if (c.colored_count() + 1 != g.num_vertices()) throw PreconditionError("state: some vertex besides x is uncolored");
  for (std::size_t i = 0; i < r; ++i) {
    const auto ci = static_cast<ClassIndex>(i);
    const std::size_t want = ci == state.small ? state.s - 1 : state.s;
    if (c.class_size(ci) != want) {
      throw PreconditionError("state: class " + std::to_string(i) + " has size " + std::to_string(c.class_size(ci)) +
                              ", expected " + std::to_string(want));
    }
  }
  for (Vertex u = 0; u < g.num_vertices(); ++u) {
    if (!c.colored(u)) continue;
    for (Vertex w : g.neighbors(u)) {
      if (c.colored(w) && c.class_of(w) == c.class_of(u)) {
        throw PreconditionError("state: edge " + std::to_string(u + 1) + "-" + std::to_string(w + 1) +
                                " inside class " + std::to_string(c.class_of(u)));
      }
    }
  }
}

AlmostEquitableState uncolor(std::shared_ptr<const Graph> g, Coloring c, Vertex x, Vertex y) {
  const std::size_t r = c.num_classes();
  if (r == 0 || c.colored_count() != c.num_vertices()) throw PreconditionError("uncolor: coloring must be total");
  const std::size_t s = c.num_vertices() / r;
  for (std::size_t i = 0; i < r; ++i) {
    if (c.class_size(static_cast<ClassIndex>(i)) != s) {
      throw PreconditionError("uncolor: class sizes are not all equal");
    }
  }
  AlmostEquitableState state;
  state.graph = std::move(g);
  state.x = x;
  state.y = y;
  state.small = c.class_of(x);
  c.unassign(x);
  state.coloring = std::move(c);
  state.s = s;
  check_invariants(state);
  return state;
}

void apply_trace(AlmostEquitableState& state, const MoveTrace& t) {
  Coloring work = state.coloring;
  apply_trace(state.g(), work, t);
  if (work.colored(state.x)) throw PreconditionError("apply_trace: trace colors x; use the placement path");
  std::optional<ClassIndex> small;
  for (std::size_t i = 0; i < work.num_classes(); ++i) {
    const auto ci = static_cast<ClassIndex>(i);
    const std::size_t size = work.class_size(ci);
    if (size + 1 == state.s && !small) {
      small = ci;
    } else if (size != state.s) {
      throw PreconditionError("apply_trace: result is not almost equitable");
    }
  }
  if (!small) throw PreconditionError("apply_trace: result has no small class");
  state.coloring = std::move(work);
  state.small = *small;
}

void write_coloring(std::ostream& out, const Coloring& c) {
  std::size_t s = 0;
  for (std::size_t i = 0; i < c.num_classes(); ++i) {
    const auto ci = static_cast<ClassIndex>(i);
    s = std::max(s, c.class_size(ci));
    out << "class " << i << ':';
    for (Vertex v : c.members(ci)) out << ' ' << v + 1;
    out << '\n';
  }
  out << "r=" << c.num_classes() << " s=" << s << '\n';
}

std::string to_text(const Coloring& c) {
  std::ostringstream out;
  write_coloring(out, c);
  return out.str();
}

Coloring read_coloring(std::istream& in, std::size_t n) {
  std::vector<std::vector<Vertex>> classes;
  std::optional<std::size_t> declared_r;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream tokens(line);
    std::string head;
    if (!(tokens >> head)) continue;
    if (head == "class") {
      std::string index_token;
      tokens >> index_token;
      if (index_token.empty() || index_token.back() != ':') {
        throw InputError("coloring line " + std::to_string(line_no) + ": expected 'class <i>:'");
      }
      std::size_t index = 0;
      auto [ptr, ec] = std::from_chars(index_token.data(), index_token.data() + index_token.size() - 1, index);
      if (ec != std::errc() || ptr != index_token.data() + index_token.size() - 1) {
        throw InputError("coloring line " + std::to_string(line_no) + ": bad class index");
      }
      if (index != classes.size()) throw InputError("coloring line " + std::to_string(line_no) + ": classes out of order");
      classes.emplace_back();
      long long v = 0;
      while (tokens >> v) {
        if (v < 1 || static_cast<std::size_t>(v) > n) {
          throw InputError("coloring line " + std::to_string(line_no) + ": vertex out of range");
        }
        classes.back().push_back(static_cast<Vertex>(v - 1));
      }
      if (!tokens.eof()) throw InputError("coloring line " + std::to_string(line_no) + ": bad vertex token");
    } else if (head.rfind("r=", 0) == 0) {
      declared_r = std::stoul(head.substr(2));
    } else {
      throw InputError("coloring line " + std::to_string(line_no) + ": unknown record");
    }
  }
  if (declared_r && *declared_r != classes.size()) throw InputError("coloring: summary r disagrees with class count");
  Coloring c(n, classes.size());
  for (std::size_t i = 0; i < classes.size(); ++i) {
    for (Vertex v : classes[i]) {
      if (c.colored(v)) throw InputError("coloring: vertex " + std::to_string(v + 1) + " listed twice");
      c.assign(v, static_cast<ClassIndex>(i));
    }
  }
  return c;
}

}  // namespace equichroma
