#include "equichroma/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

#include "equichroma/dump.hpp"
#include "equichroma/edge_list_io.hpp"
#include "equichroma/errors.hpp"
#include "equichroma/generators.hpp"
#include "equichroma/oracle.hpp"
#include "equichroma/solver.hpp"

namespace equichroma {

namespace {

enum class Format { Text, Structured };

struct Common {
  std::size_t r = 8;
  std::string surface = "planar";
  std::uint64_t seed = 0;
  bool audit = false;
  std::string format = "text";
  std::string input;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--r", c.r, "number of colors")->check(CLI::PositiveNumber);
  sub->add_option("--surface", c.surface, "planar | nonneg-euler")->check(CLI::IsMember({"planar", "nonneg-euler"}));
  sub->add_option("--seed", c.seed, "edge-order seed (0 = canonical)");
  sub->add_flag("--audit", c.audit, "log every engine step and audit charges");
  sub->add_option("--format", c.format, "text | structured | json-like-structured")
      ->check(CLI::IsMember({"text", "structured", "json-like-structured"}));
}

Format parse_format(const std::string& text) { return text == "text" ? Format::Text : Format::Structured; }

Graph load_graph(const std::string& path, std::istream& in) {
  if (path.empty() || path == "-") return read_edge_list(in);
  return read_edge_list_file(path);
}

SolverConfig make_config(const Common& c) {
  SolverConfig cfg;
  cfg.r = c.r;
  cfg.surface = *parse_surface(c.surface);
  cfg.seed = c.seed;
  cfg.audit = c.audit;
  return cfg;
}

void write_stats(std::ostream& out, const SolverStats& st, Format format) {
  const char* route = st.hs_route ? (st.backtracked ? "hs-backtrack" : "hs") : "theorem";
  if (format == Format::Structured) {
    out << "stat insertions " << st.insertions << '\n';
    out << "stat conflicts " << st.conflicts << '\n';
    out << "stat repairs " << st.repairs << '\n';
    out << "stat driver_steps " << st.driver_steps << '\n';
    out << "stat max_deficit " << st.max_deficit << '\n';
    out << "stat route " << route << '\n';
    out << "stat reduction " << st.reduction << '\n';
    for (const auto& [rule_tag, count] : st.rule_counts) out << "rule " << rule_tag << ' ' << count << '\n';
    return;
  }
  out << "insertions " << st.insertions << " conflicts " << st.conflicts << " repairs " << st.repairs << " steps "
      << st.driver_steps << " max-deficit " << st.max_deficit << " route " << route << " reduction " << st.reduction
      << '\n';
  out << "rules";
  for (const auto& [rule_tag, count] : st.rule_counts) out << ' ' << rule_tag << '=' << count;
  out << '\n';
}

void write_result(std::ostream& out, const Coloring& c, const SolverStats& st, Format format) {
  if (format == Format::Structured) {
    std::size_t s = 0;
    for (std::size_t i = 0; i < c.num_classes(); ++i) s = std::max(s, c.class_size(static_cast<ClassIndex>(i)));
    out << "status ok\n";
    out << "r " << c.num_classes() << "\ns " << s << '\n';
    for (std::size_t i = 0; i < c.num_classes(); ++i) {
      out << "class " << i;
      for (Vertex v : c.members(static_cast<ClassIndex>(i))) out << ' ' << v + 1;
      out << '\n';
    }
    write_stats(out, st, format);
    out << "end\n";
    return;
  }
  write_coloring(out, c);
  write_stats(out, st, format);
}

int report_error(std::ostream& out, std::ostream& err, Format format, const char* code, const std::string& message,
                 int status) {
  if (format == Format::Structured) {
    out << "status error\nreason " << code << "\nmessage " << message << "\nend\n";
  }
  err << "error " << code << ": " << message << '\n';
  return status;
}

// Runs `body` and maps the error taxonomy onto exit statuses.
template <typename Body>
int guarded(std::ostream& out, std::ostream& err, Format format, const std::string& dump_path, Body&& body) {
  try {
    return body();
  } catch (const InputError& e) {
    return report_error(out, err, format, "input-error", e.what(), exit_code::kInputError);
  } catch (const TheoryViolation& e) {
    if (!dump_path.empty()) {
      std::ofstream f(dump_path);
      f << e.dump();
    } else {
      err << e.dump();
    }
    return report_error(out, err, format, "theory-violation", e.what(), exit_code::kTheoryViolation);
  } catch (const ResourceError& e) {
    return report_error(out, err, format, "resource-cap", e.what(), exit_code::kResourceCap);
  } catch (const std::logic_error& e) {
    return report_error(out, err, format, "internal-error", e.what(), exit_code::kTheoryViolation);
  }
}

std::pair<std::size_t, std::size_t> parse_range(const std::string& text) {
  const auto dots = text.find("..");
  try {
    if (dots == std::string::npos) {
      const std::size_t v = std::stoul(text);
      return {v, v};
    }
    const std::size_t lo = std::stoul(text.substr(0, dots));
    const std::size_t hi = std::stoul(text.substr(dots + 2));
    if (lo > hi) throw InputError("bad range '" + text + "'");
    return {lo, hi};
  } catch (const std::invalid_argument&) {
    throw InputError("bad range '" + text + "'");
  }
}

std::size_t worker_count() {
  std::size_t threads = std::max(1U, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("EQUICHROMA_THREADS")) {
    try {
      threads = std::max<std::size_t>(1, std::stoul(env));
    } catch (const std::exception&) {
      throw InputError("EQUICHROMA_THREADS must be a positive integer");
    }
  }
  return threads;
}

struct StressRow {
  std::size_t n = 0;
  std::size_t m = 0;
  std::uint64_t seed = 0;
  std::string status;
  std::string route;
  std::size_t steps = 0;
  std::uint64_t checksum = 0;
};

StressRow stress_one(Family family, std::size_t lo, std::size_t hi, std::size_t cap, std::uint64_t seed,
                     const SolverConfig& cfg) {
  StressRow row;
  row.seed = seed;
  std::size_t n = lo + static_cast<std::size_t>(seed % (hi - lo + 1));
  std::optional<Graph> g;
  for (std::size_t tries = 0; tries <= hi - lo && !g; ++tries) {
    try {
      g = generate({family, n, cap, seed});
    } catch (const InputError&) {
      n = n == hi ? lo : n + 1;
    }
  }
  if (!g) {
    row.status = "infeasible";
    return row;
  }
  row.n = g->num_vertices();
  row.m = g->num_edges();
  try {
    SolveResult res = equitable_color(*g, cfg);
    const Verdict v = verify(*g, res.coloring, cfg.r);
    row.status = v.proper && v.equitable ? "ok" : "unverified";
    row.route = res.stats.hs_route ? "hs" : "theorem";
    row.steps = res.stats.driver_steps;
    row.checksum = res.coloring.fingerprint();
  } catch (const InputError&) {
    row.status = "input-error";
  } catch (const TheoryViolation&) {
    row.status = "theory-violation";
  } catch (const ResourceError&) {
    row.status = "resource-cap";
  } catch (const std::logic_error&) {
    row.status = "internal-error";
  }
  return row;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Equitable coloring of planar and semi-planar graphs", "equichroma"};
  app.require_subcommand(1);

  Common solve_opts;
  std::string dump_path;
  bool no_check = false;
  auto* solve = app.add_subcommand("solve", "color an edge list equitably");
  add_common(solve, solve_opts);
  solve->add_option("--input", solve_opts.input, "edge-list file (default stdin)");
  solve->add_option("--dump", dump_path, "where to write a violation dump (default stderr)");
  solve->add_flag("--no-input-check", no_check, "skip the surface edge bound and K_{3,t} checks");

  Common audit_opts;
  auto* audit = app.add_subcommand("audit", "solve with step log, solo-neighbour checks and charge audits");
  add_common(audit, audit_opts);
  audit->add_option("--input", audit_opts.input, "edge-list file (default stdin)");

  std::string verify_graph;
  std::string verify_coloring;
  std::size_t verify_r = 0;
  auto* verify_cmd = app.add_subcommand("verify", "check a coloring for properness and equity");
  verify_cmd->add_option("--input", verify_graph, "edge-list file (default stdin)");
  verify_cmd->add_option("--coloring", verify_coloring, "coloring file")->required();
  verify_cmd->add_option("--r", verify_r, "expected number of classes");

  std::string family_name = "planar-degree-bounded";
  std::size_t gen_n = 0;
  std::size_t gen_cap = 8;
  std::uint64_t gen_seed = 1;
  auto* gen = app.add_subcommand("gen", "generate a graph");
  gen->add_option("--family", family_name, "graph family")->required();
  gen->add_option("--n", gen_n, "number of vertices")->required();
  gen->add_option("--cap", gen_cap, "degree cap (0 = none)");
  gen->add_option("--seed", gen_seed, "generator seed");

  std::string oracle_input;
  std::size_t oracle_r = 8;
  auto* oracle = app.add_subcommand("oracle", "exhaustive equitable coloring for n <= 16");
  oracle->add_option("--input", oracle_input, "edge-list file (default stdin)");
  oracle->add_option("--r", oracle_r, "number of colors")->check(CLI::PositiveNumber);

  Common stress_opts;
  std::string stress_family = "planar-degree-bounded";
  std::string stress_range = "9..200";
  std::size_t stress_count = 100;
  std::size_t stress_cap = 0;
  auto* stress = app.add_subcommand("stress", "generate, solve and verify a sweep of instances");
  add_common(stress, stress_opts);
  stress->add_option("--family", stress_family, "graph family");
  stress->add_option("--n", stress_range, "vertex range lo..hi");
  stress->add_option("--count", stress_count, "number of instances");
  stress->add_option("--cap", stress_cap, "degree cap (default r)");

  std::string replay_path;
  std::string replay_format = "text";
  auto* replay = app.add_subcommand("replay", "rerun the engine on a violation dump");
  replay->add_option("--dump", replay_path, "dump file")->required();
  replay->add_option("--format", replay_format, "text | structured | json-like-structured")
      ->check(CLI::IsMember({"text", "structured", "json-like-structured"}));

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int status = app.exit(e, out, err);
    return status == 0 ? exit_code::kOk : exit_code::kInputError;
  }

  if (*solve || *audit) {
    const bool auditing = static_cast<bool>(*audit);
    Common& opts = auditing ? audit_opts : solve_opts;
    const Format format = parse_format(opts.format);
    return guarded(out, err, format, dump_path, [&] {
      const Graph g = load_graph(opts.input, in);
      SolverConfig cfg = make_config(opts);
      cfg.check_input = !no_check;
      std::ostringstream log;
      if (auditing) {
        cfg.audit = true;
        cfg.diagnostics = true;
      }
      cfg.audit_log = &log;
      const SolveResult res = equitable_color(g, cfg);
      if (cfg.audit) out << log.str();
      write_result(out, res.coloring, res.stats, format);
      if (auditing) {
        out << "solo-checks states " << res.stats.diagnostic_states << " semi-planar-violations "
            << res.stats.semi_planar_solo_violations << " planar-violations " << res.stats.planar_solo_violations
            << " cut-violations " << res.stats.cut_violations << '\n';
        out << "charges audits " << res.stats.discharge_audits << " conservation-failures "
            << res.stats.discharge_conservation_failures << " flagged " << res.stats.discharge_flagged << '\n';
      }
      return exit_code::kOk;
    });
  }

  if (*verify_cmd) {
    return guarded(out, err, Format::Text, "", [&] {
      const Graph g = load_graph(verify_graph, in);
      std::ifstream cf(verify_coloring);
      if (!cf) throw InputError("cannot open coloring file " + verify_coloring);
      const Coloring c = read_coloring(cf, g.num_vertices());
      if (verify_r != 0 && c.num_classes() != verify_r) {
        out << "fail classes " << c.num_classes() << " expected " << verify_r << '\n';
        return exit_code::kVerifyFailed;
      }
      for (Vertex v = 0; v < g.num_vertices(); ++v) {
        if (!c.colored(v)) {
          out << "fail uncolored " << v + 1 << '\n';
          return exit_code::kVerifyFailed;
        }
      }
      const Verdict verdict = verify(g, c, c.num_classes());
      if (!verdict.proper) {
        const Edge e = *verdict.violating_edge;
        out << "fail edge " << e.u + 1 << ' ' << e.v + 1 << " class " << c.class_of(e.u) << '\n';
        return exit_code::kVerifyFailed;
      }
      if (!verdict.equitable) {
        out << "fail sizes";
        for (std::size_t sz : verdict.class_sizes) out << ' ' << sz;
        out << '\n';
        return exit_code::kVerifyFailed;
      }
      out << "ok proper equitable\n";
      return exit_code::kOk;
    });
  }

  if (*gen) {
    return guarded(out, err, Format::Text, "", [&] {
      const std::optional<Family> family = parse_family(family_name);
      if (!family) throw InputError("unknown family '" + family_name + "'");
      const Graph g = generate({*family, gen_n, gen_cap, gen_seed});
      out << "c family " << family_name << " n " << gen_n << " cap " << gen_cap << " seed " << gen_seed << '\n';
      write_edge_list(out, g);
      return exit_code::kOk;
    });
  }

  if (*oracle) {
    return guarded(out, err, Format::Text, "", [&] {
      const Graph g = load_graph(oracle_input, in);
      const std::optional<Coloring> c = oracle_equitable(g, oracle_r);
      if (!c) {
        out << "none\n";
      } else {
        write_coloring(out, *c);
      }
      return exit_code::kOk;
    });
  }

  if (*stress) {
    const Format format = parse_format(stress_opts.format);
    return guarded(out, err, format, "", [&] {
      const std::optional<Family> family = parse_family(stress_family);
      if (!family) throw InputError("unknown family '" + stress_family + "'");
      const auto [lo, hi] = parse_range(stress_range);
      SolverConfig cfg = make_config(stress_opts);
      const std::size_t cap = stress_cap == 0 ? cfg.r : stress_cap;
      const std::uint64_t base = stress_opts.seed == 0 ? 1 : stress_opts.seed;
      std::vector<StressRow> rows(stress_count);
      std::atomic<std::size_t> next{0};
      auto worker = [&] {
        for (std::size_t i = next++; i < stress_count; i = next++) {
          SolverConfig local = cfg;
          local.seed = 0;
          rows[i] = stress_one(*family, lo, hi, cap, base * 1000003ULL + i, local);
        }
      };
      std::vector<std::thread> pool;
      const std::size_t threads = std::min(worker_count(), std::max<std::size_t>(1, stress_count));
      for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
      for (auto& t : pool) t.join();
      std::size_t ok = 0;
      bool violation = false;
      out << "index n m seed status route steps fingerprint\n";
      for (std::size_t i = 0; i < rows.size(); ++i) {
        const StressRow& row = rows[i];
        out << i << ' ' << row.n << ' ' << row.m << ' ' << row.seed << ' ' << row.status << ' '
            << (row.route.empty() ? "-" : row.route) << ' ' << row.steps << ' ' << std::hex << row.checksum << std::dec
            << '\n';
        ok += row.status == "ok" ? 1 : 0;
        violation = violation || row.status == "theory-violation" || row.status == "internal-error";
      }
      out << "summary family " << stress_family << " r " << cfg.r << " verified " << ok << '/' << rows.size() << '\n';
      if (ok == rows.size()) return exit_code::kOk;
      return violation ? exit_code::kTheoryViolation : exit_code::kVerifyFailed;
    });
  }

  if (*replay) {
    const Format format = parse_format(replay_format);
    return guarded(out, err, format, "", [&] {
      std::ifstream f(replay_path);
      if (!f) throw InputError("cannot open dump " + replay_path);
      DumpCase dc = parse_dump(f);
      SolverConfig cfg;
      cfg.r = dc.state.r();
      SolverStats stats;
      const Graph& g = dc.state.g();
      const Coloring c = repair(dc.state, dc.options, cfg, stats);
      const Verdict v = verify(g, c, cfg.r);
      if (!v.proper || !v.equitable) {
        return report_error(out, err, format, "verify-failed", "replayed coloring failed verification",
                            exit_code::kVerifyFailed);
      }
      write_result(out, c, stats, format);
      return exit_code::kOk;
    });
  }
  return exit_code::kInputError;
}

}  // namespace equichroma
