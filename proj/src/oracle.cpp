#include "equichroma/oracle.hpp"

#include <stdexcept>
#include <string>

#include "equichroma/errors.hpp"

namespace equichroma {

std::optional<Coloring> oracle_equitable(const Graph& g, std::size_t r, std::size_t max_n) {
  const std::size_t n = g.num_vertices();
  if (n > max_n) throw InputError("oracle: n=" + std::to_string(n) + " exceeds cap " + std::to_string(max_n));
  if (r == 0) throw InputError("oracle: r must be positive");
  const std::size_t lo = n / r;
  const std::size_t big_allowed = n % r;
  Coloring c(n, r);
  std::size_t big_used = 0;
  std::size_t opened = 0;

  auto rec = [&](auto&& self, Vertex v) -> bool {
    if (v == n) return true;
    const std::size_t limit = std::min(r, opened + 1);
    for (std::size_t i = 0; i < limit; ++i) {
      const auto col = static_cast<ClassIndex>(i);
      const std::size_t size = c.class_size(col);
      const bool makes_big = size == lo;
      if (size > lo || (makes_big && big_used == big_allowed)) continue;
      bool clash = false;
      for (Vertex w : g.neighbors(v)) {
        if (w < v && c.class_of(w) == col) {
          clash = true;
          break;
        }
      }
      if (clash) continue;
      const std::size_t opened_before = opened;
      if (i == opened) ++opened;
      big_used += makes_big ? 1 : 0;
      c.assign(v, col);
      if (self(self, v + 1)) return true;
      c.unassign(v);
      big_used -= makes_big ? 1 : 0;
      opened = opened_before;
    }
    return false;
  };
  if (!rec(rec, 0)) return std::nullopt;
  const Verdict verdict = verify(g, c, r);
  if (!verdict.proper || !verdict.equitable) throw std::logic_error("oracle: produced an invalid coloring");
  return c;
}

}  // namespace equichroma
