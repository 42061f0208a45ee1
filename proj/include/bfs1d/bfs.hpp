#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "bfs1d/graph.hpp"
#include "bfs1d/metrics.hpp"
#include "bfs1d/partition.hpp"
#include "bfs1d/transport.hpp"

namespace bfs1d {

using Level = std::uint64_t;

/// Level value for unreachable or not-yet-reached vertices.
inline constexpr Level kUnvisited = std::numeric_limits<Level>::max();

/// baseline: every discovered neighbor goes to a per-destination buffer
/// (self-owned ones included, processed locally after the exchange) and the
/// buffers cross via the aggregate-then-exchange collective.
/// optimized: self-owned neighbors update the level vector immediately and
/// the remaining buffers are sent directly to their owners.
enum class Strategy { baseline, optimized };

/// master_merge: every rank's next frontier is gathered at rank 0, merged,
/// and broadcast back; each rank filters out its owned share.
/// distributed: each rank's next frontier becomes its frontier directly.
enum class FrontierMode { master_merge, distributed };

const char* strategy_name(Strategy s);
const char* frontier_mode_name(FrontierMode m);

struct BfsConfig {
  VertexId source = 0;
  Strategy strategy = Strategy::optimized;
  FrontierMode frontier_mode = FrontierMode::master_merge;
  int p = 1;
};

/// Single-threaded reference BFS: exact shortest unweighted distances from
/// source, kUnvisited for unreachable vertices.
std::vector<Level> bfs_serial(const Graph& g, VertexId source);

struct BfsResult {
  std::vector<Level> levels;
  RunMetrics metrics;
};

/// Level-synchronous 1-D partitioned BFS across cfg.p ranks. The assembled
/// level vector is identical to bfs_serial for every strategy and frontier
/// mode; metrics are merged across ranks (counters summed, timings taking
/// the slowest rank per level).
BfsResult bfs_distributed(const Graph& g, const PartitionMap& map,
                          const BfsConfig& cfg, const WorldConfig& world);

struct StrategyRun {
  Strategy strategy;
  FrontierMode frontier_mode;
  RunMetrics metrics;
};

struct StrategyReport {
  std::vector<Level> levels;
  std::vector<StrategyRun> runs;
};

/// Runs all four strategy x frontier-mode combinations and verifies they
/// produce identical level vectors; a mismatch throws CorrectnessError.
StrategyReport compare_strategies(const Graph& g, const PartitionMap& map,
                                  VertexId source, const WorldConfig& world);

}  // namespace bfs1d
