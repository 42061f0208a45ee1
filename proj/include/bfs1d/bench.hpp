#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "bfs1d/bfs.hpp"
#include "bfs1d/generators.hpp"
#include "bfs1d/transport.hpp"

namespace bfs1d {

/// strong: one graph, sweep over rank counts. weak: the generator's n is
/// per-rank and the graph is regenerated as n * p for each rank count.
/// single: one rank count, one graph.
enum class BenchMode { strong, weak, single };

const char* bench_mode_name(BenchMode m);

struct BenchPlan {
  BenchMode mode = BenchMode::strong;
  std::optional<GeneratorSpec> generator;
  std::optional<std::filesystem::path> graph_file;
  VertexId source = 0;
  std::vector<int> rank_counts;
  std::vector<Strategy> strategies{Strategy::baseline, Strategy::optimized};
  std::vector<FrontierMode> frontier_modes{FrontierMode::master_merge,
                                           FrontierMode::distributed};
  Backend backend = Backend::in_process;
  std::vector<std::string> listen_addresses;
  int repetitions = 3;
  std::filesystem::path csv_output;  // empty: no CSV written
  VertexId oracle_limit = 1'000'000;
  std::chrono::milliseconds world_timeout{30'000};
};

/// One CSV row. Categorical fields are stored as their CSV spelling so a
/// parsed-back record compares equal to the in-memory one.
struct BenchRecord {
  std::string mode;
  std::string family;
  std::uint64_t n = 0;
  std::uint64_t edges = 0;
  int p = 0;
  std::string strategy;
  std::string frontier_mode;
  std::string backend;
  int repetition = 0;
  std::uint64_t levels_traversed = 0;
  std::uint64_t total_wire_bytes = 0;
  std::uint64_t total_messages = 0;
  std::uint64_t aggregation_copy_bytes = 0;
  std::uint64_t shortcircuit_hits = 0;
  std::uint64_t compute_ns = 0;
  std::uint64_t comm_ns = 0;
  std::uint64_t total_ns = 0;

  friend bool operator==(const BenchRecord&, const BenchRecord&) = default;
};

/// Runs the whole plan: one record per rank count x strategy x frontier mode
/// x repetition. Every run with n <= plan.oracle_limit is re-verified against
/// bfs_serial; a mismatch aborts the plan with CorrectnessError. When
/// plan.csv_output is set the records are written atomically (temp file +
/// rename).
std::vector<BenchRecord> run_plan(const BenchPlan& plan);

void write_csv(const std::vector<BenchRecord>& records,
               const std::filesystem::path& path);
std::vector<BenchRecord> read_csv(const std::filesystem::path& path);

/// Per-rank-count digest: median total time, speedup relative to the
/// smallest rank count, baseline/optimized wire-byte ratio, and a flag on
/// every rank count whose median time regressed against the previous one.
std::string summarize(const std::vector<BenchRecord>& records);

}  // namespace bfs1d
