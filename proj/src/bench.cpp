#include "bfs1d/bench.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include "bfs1d/edge_io.hpp"
#include "bfs1d/error.hpp"
#include "bfs1d/partition.hpp"

namespace bfs1d {

namespace {

constexpr const char* kCsvHeader =
    "mode,family,n,edges,p,strategy,frontier_mode,backend,repetition,"
    "levels_traversed,total_wire_bytes,total_messages,aggregation_copy_bytes,"
    "shortcircuit_hits,compute_ns,comm_ns,total_ns";

struct PreparedGraph {
  Graph graph;
  std::string family;
  std::vector<Level> oracle;  // empty when above the oracle limit
};

PreparedGraph prepare_graph(const BenchPlan& plan, int p) {
  PreparedGraph out;
  if (plan.graph_file) {
    out.graph = build_graph(read_edge_list(*plan.graph_file));
    out.family = "file";
  } else if (plan.generator) {
    GeneratorSpec spec = *plan.generator;
    if (plan.mode == BenchMode::weak)
      spec.n = spec.n * static_cast<VertexId>(p);
    out.graph = build_graph(generate(spec));
    out.family = family_name(spec.family);
  } else {
    throw InvalidParameterError("plan needs a generator spec or a graph file");
  }

  if (plan.source >= out.graph.vertex_count())
    throw InvalidVertexError("source vertex " + std::to_string(plan.source) +
                             " out of range for graph with " +
                             std::to_string(out.graph.vertex_count()) +
                             " vertices");

  if (out.graph.vertex_count() <= plan.oracle_limit) {
    out.oracle = bfs_serial(out.graph, plan.source);
  } else {
    std::cerr << "note: n=" << out.graph.vertex_count() << " exceeds oracle limit "
              << plan.oracle_limit << ", skipping serial verification\n";
  }
  return out;
}

void validate_plan(const BenchPlan& plan) {
  if (plan.rank_counts.empty())
    throw InvalidParameterError("plan needs at least one rank count");
  if (!std::is_sorted(plan.rank_counts.begin(), plan.rank_counts.end()))
    throw InvalidParameterError("rank counts must be sorted ascending");
  for (int p : plan.rank_counts)
    if (p < 1) throw InvalidParameterError("rank counts must be positive");
  if (plan.strategies.empty() || plan.frontier_modes.empty())
    throw InvalidParameterError("plan needs at least one strategy and one "
                                "frontier mode");
  if (plan.repetitions < 1)
    throw InvalidParameterError("repetitions must be positive");
  if (plan.mode == BenchMode::single && plan.rank_counts.size() != 1)
    throw InvalidParameterError("single mode takes exactly one rank count");
  if (plan.mode == BenchMode::weak && !plan.generator)
    throw InvalidParameterError("weak scaling needs a generator (a fixed "
                                "graph file cannot scale with p)");
}

double median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

}  // namespace

const char* bench_mode_name(BenchMode m) {
  switch (m) {
    case BenchMode::strong:
      return "strong";
    case BenchMode::weak:
      return "weak";
    case BenchMode::single:
      return "single";
  }
  return "?";
}

std::vector<BenchRecord> run_plan(const BenchPlan& plan) {
  validate_plan(plan);

  std::vector<BenchRecord> records;
  std::optional<PreparedGraph> fixed;  // shared across rank counts

  for (int p : plan.rank_counts) {
    const PreparedGraph* prepared = nullptr;
    std::optional<PreparedGraph> scaled;
    if (plan.mode == BenchMode::weak) {
      scaled = prepare_graph(plan, p);
      prepared = &*scaled;
    } else {
      if (!fixed) fixed = prepare_graph(plan, p);
      prepared = &*fixed;
    }

    const PartitionMap map(prepared->graph.vertex_count(), p);
    WorldConfig world{p, plan.backend, plan.listen_addresses, plan.world_timeout};

    for (Strategy strategy : plan.strategies) {
      for (FrontierMode mode : plan.frontier_modes) {
        for (int rep = 0; rep < plan.repetitions; ++rep) {
          const BfsConfig cfg{plan.source, strategy, mode, p};
          BfsResult run = bfs_distributed(prepared->graph, map, cfg, world);

          if (!prepared->oracle.empty() && run.levels != prepared->oracle)
            throw CorrectnessError(
                std::string("distributed levels diverge from serial BFS (") +
                strategy_name(strategy) + "/" + frontier_mode_name(mode) +
                ", p=" + std::to_string(p) + ")");

          BenchRecord rec;
          rec.mode = bench_mode_name(plan.mode);
          rec.family = prepared->family;
          rec.n = prepared->graph.vertex_count();
          rec.edges = prepared->graph.edge_count();
          rec.p = p;
          rec.strategy = strategy_name(strategy);
          rec.frontier_mode = frontier_mode_name(mode);
          rec.backend = backend_name(plan.backend);
          rec.repetition = rep;
          rec.levels_traversed = run.metrics.levels_traversed();
          rec.total_wire_bytes = run.metrics.total_wire_bytes();
          rec.total_messages = run.metrics.total_messages();
          rec.aggregation_copy_bytes = run.metrics.total_aggregation_copy_bytes();
          rec.shortcircuit_hits = run.metrics.total_shortcircuit_hits();
          rec.compute_ns = run.metrics.total_compute_ns();
          rec.comm_ns = run.metrics.total_comm_ns();
          rec.total_ns = run.metrics.total_elapsed_ns();
          records.push_back(std::move(rec));
        }
      }
    }
  }

  if (!plan.csv_output.empty()) write_csv(records, plan.csv_output);
  return records;
}

void write_csv(const std::vector<BenchRecord>& records,
               const std::filesystem::path& path) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out << kCsvHeader << '\n';
    for (const BenchRecord& r : records) {
      out << r.mode << ',' << r.family << ',' << r.n << ',' << r.edges << ','
          << r.p << ',' << r.strategy << ',' << r.frontier_mode << ','
          << r.backend << ',' << r.repetition << ',' << r.levels_traversed
          << ',' << r.total_wire_bytes << ',' << r.total_messages << ','
          << r.aggregation_copy_bytes << ',' << r.shortcircuit_hits << ','
          << r.compute_ns << ',' << r.comm_ns << ',' << r.total_ns << '\n';
    }
    if (!out) throw IoError("failed writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot move " + tmp.string() + " to " + path.string() +
                        ": " + ec.message());
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::uint64_t parse_u64(const std::string& s, std::size_t line_no) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw ParseError("expected unsigned integer, got '" + s + "'", line_no);
  return v;
}

}  // namespace

std::vector<BenchRecord> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");

  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw ParseError("empty CSV", 1);
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader)
    throw ParseError("unexpected CSV header '" + line + "'", line_no);

  std::vector<BenchRecord> records;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> f = split_csv_line(line);
    if (f.size() != 17)
      throw ParseError("expected 17 fields, got " + std::to_string(f.size()),
                       line_no);
    BenchRecord r;
    r.mode = f[0];
    r.family = f[1];
    r.n = parse_u64(f[2], line_no);
    r.edges = parse_u64(f[3], line_no);
    r.p = static_cast<int>(parse_u64(f[4], line_no));
    r.strategy = f[5];
    r.frontier_mode = f[6];
    r.backend = f[7];
    r.repetition = static_cast<int>(parse_u64(f[8], line_no));
    r.levels_traversed = parse_u64(f[9], line_no);
    r.total_wire_bytes = parse_u64(f[10], line_no);
    r.total_messages = parse_u64(f[11], line_no);
    r.aggregation_copy_bytes = parse_u64(f[12], line_no);
    r.shortcircuit_hits = parse_u64(f[13], line_no);
    r.compute_ns = parse_u64(f[14], line_no);
    r.comm_ns = parse_u64(f[15], line_no);
    r.total_ns = parse_u64(f[16], line_no);
    records.push_back(std::move(r));
  }
  return records;
}

std::string summarize(const std::vector<BenchRecord>& records) {
  if (records.empty())
    throw InvalidParameterError("no records to summarize");

  std::map<int, std::vector<const BenchRecord*>> by_p;
  for (const BenchRecord& r : records) by_p[r.p].push_back(&r);

  std::ostringstream out;
  out << "    p  runs   median_total_ms  speedup  wire_base/opt  note\n";

  double base_median = 0.0;
  double prev_median = 0.0;
  bool first = true;
  for (const auto& [p, rows] : by_p) {
    std::vector<double> times;
    std::uint64_t baseline_bytes = 0, optimized_bytes = 0;
    bool has_baseline = false, has_optimized = false;
    for (const BenchRecord* r : rows) {
      times.push_back(static_cast<double>(r->total_ns));
      if (r->strategy == "baseline") {
        baseline_bytes += r->total_wire_bytes;
        has_baseline = true;
      } else if (r->strategy == "optimized") {
        optimized_bytes += r->total_wire_bytes;
        has_optimized = true;
      }
    }
    const double med = median(times);
    if (first) base_median = med;

    out << std::setw(5) << p << "  " << std::setw(4) << rows.size() << "  "
        << std::setw(16) << std::fixed << std::setprecision(3) << med / 1e6
        << "  " << std::setw(7) << std::setprecision(2)
        << (med > 0 ? base_median / med : 1.0) << "  ";
    if (has_baseline && has_optimized && optimized_bytes > 0)
      out << std::setw(13) << std::setprecision(2)
          << static_cast<double>(baseline_bytes) /
                 static_cast<double>(optimized_bytes);
    else
      out << std::setw(13) << "-";
    if (!first && med > prev_median)
      out << "  slower than previous p (communication overhead)";
    out << '\n';

    prev_median = med;
    first = false;
  }
  return out.str();
}

}  // namespace bfs1d
