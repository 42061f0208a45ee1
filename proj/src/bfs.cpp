#include "bfs1d/bfs.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <string>
#include <utility>

#include "bfs1d/error.hpp"

namespace bfs1d {

namespace {

using Clock = std::chrono::steady_clock;

std::uint64_t ns_between(Clock::time_point a, Clock::time_point b) {
  return static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::nanoseconds>(b - a).count());
}

struct RankOutcome {
  std::vector<Level> levels;            // this rank's owned slice
  std::vector<LevelRecord> records;
};

RankOutcome rank_bfs(const Graph& g, const PartitionMap& map,
                     const BfsConfig& cfg, Endpoint& ep) {
  const int me = ep.rank();
  const int p = ep.world_size();
  const auto [range_begin, range_end] = map.local_range(me);

  std::vector<Level> levels(range_end - range_begin, kUnvisited);
  std::vector<VertexId> frontier;
  std::vector<VertexId> next;

  if (map.owner(cfg.source) == me) {
    levels[map.to_local(cfg.source, me)] = 0;
    frontier.push_back(cfg.source);
  }

  // Sets v's level exactly once; duplicates of an already-finalized vertex
  // are discarded here, on the owner.
  const auto try_visit = [&](VertexId v, Level level) {
    const VertexId local = map.to_local(v, me);
    if (levels[local] != kUnvisited) return false;
    levels[local] = level;
    next.push_back(v);
    return true;
  };

  std::vector<LevelRecord> records;
  Level current = 0;
  std::uint64_t global_frontier = 1;  // level 0 holds exactly the source

  while (true) {
    LevelRecord rec;
    rec.level = current;
    rec.frontier_size_global = global_frontier;
    const TransportCounters before = ep.counters();
    const auto t0 = Clock::now();

    // Computation: expand the frontier into per-destination buffers. Under
    // the optimized strategy, self-owned neighbors never touch a buffer;
    // their level is set in the very same step.
    std::vector<std::vector<VertexId>> buffers(static_cast<std::size_t>(p));
    std::uint64_t shortcircuit_hits = 0;
    for (VertexId u : frontier) {
      for (VertexId v : g.neighbors(u)) {
        const int owner = map.owner(v);
        if (cfg.strategy == Strategy::optimized && owner == me) {
          if (try_visit(v, current + 1)) ++shortcircuit_hits;
        } else {
          buffers[owner].push_back(v);
        }
      }
    }
    const auto t_expanded = Clock::now();

    // Communication: move every buffer to its owner.
    std::vector<VertexMessage> received(static_cast<std::size_t>(p));
    std::vector<VertexId> self_buffer;
    if (cfg.strategy == Strategy::baseline) {
      self_buffer = std::move(buffers[me]);
      std::vector<VertexMessage> outgoing(static_cast<std::size_t>(p));
      for (int d = 0; d < p; ++d) {
        if (d == me) continue;
        outgoing[d] = VertexMessage{current, std::move(buffers[d])};
      }
      received = ep.exchange_all(outgoing);
    } else {
      if (!buffers[me].empty())
        throw CorrectnessError(
            "optimized strategy left a self-addressed buffer non-empty");
      for (int d = 0; d < p; ++d) {
        if (d == me) continue;
        ep.send(d, VertexMessage{current, std::move(buffers[d])});
      }
      for (int s = 0; s < p; ++s) {
        if (s == me) continue;
        received[s] = ep.recv(s);
      }
    }
    const auto t_exchanged = Clock::now();

    // Apply: owner-side evaluation of every delivered vertex (and, in the
    // baseline, of the locally kept self buffer), in source-rank order.
    for (int s = 0; s < p; ++s) {
      const std::vector<VertexId>& batch =
          (s == me) ? self_buffer : received[s].vertices;
      for (VertexId v : batch) try_visit(v, current + 1);
    }
    const auto t_applied = Clock::now();

    // Frontier formation and global termination check.
    const std::uint64_t produced = next.size();
    if (cfg.frontier_mode == FrontierMode::master_merge) {
      const VertexMessage gathered =
          ep.gather_to_root(VertexMessage{current, next}, 0);
      const VertexMessage merged = ep.broadcast(
          me == 0 ? gathered : VertexMessage{current, {}}, 0);
      frontier.clear();
      for (VertexId v : merged.vertices)
        if (map.owner(v) == me) frontier.push_back(v);
      next.clear();
    } else {
      frontier = std::move(next);
      next = {};
    }
    global_frontier = ep.allreduce_sum(produced);
    const auto t_done = Clock::now();

    const TransportCounters after = ep.counters();
    rec.wire_bytes = after.bytes_sent - before.bytes_sent;
    rec.messages = after.messages_sent - before.messages_sent;
    rec.aggregation_copy_bytes =
        after.aggregation_copy_bytes - before.aggregation_copy_bytes;
    rec.local_shortcircuit_hits = shortcircuit_hits;
    rec.compute_ns =
        ns_between(t0, t_expanded) + ns_between(t_exchanged, t_applied);
    rec.comm_ns =
        ns_between(t_expanded, t_exchanged) + ns_between(t_applied, t_done);
    rec.elapsed_ns = ns_between(t0, t_done);
    records.push_back(rec);

    if (global_frontier == 0) break;
    ++current;
  }

  return RankOutcome{std::move(levels), std::move(records)};
}

RunMetrics merge_metrics(const std::vector<RankOutcome>& outcomes) {
  RunMetrics merged;
  if (outcomes.empty()) return merged;
  const std::size_t levels = outcomes.front().records.size();
  merged.per_level.resize(levels);
  for (std::size_t l = 0; l < levels; ++l) {
    LevelRecord& rec = merged.per_level[l];
    rec.level = outcomes.front().records[l].level;
    rec.frontier_size_global = outcomes.front().records[l].frontier_size_global;
    for (const RankOutcome& o : outcomes) {
      const LevelRecord& r = o.records[l];
      rec.wire_bytes += r.wire_bytes;
      rec.messages += r.messages;
      rec.aggregation_copy_bytes += r.aggregation_copy_bytes;
      rec.local_shortcircuit_hits += r.local_shortcircuit_hits;
      rec.compute_ns = std::max(rec.compute_ns, r.compute_ns);
      rec.comm_ns = std::max(rec.comm_ns, r.comm_ns);
      rec.elapsed_ns = std::max(rec.elapsed_ns, r.elapsed_ns);
    }
  }
  return merged;
}

}  // namespace

const char* strategy_name(Strategy s) {
  return s == Strategy::baseline ? "baseline" : "optimized";
}

const char* frontier_mode_name(FrontierMode m) {
  return m == FrontierMode::master_merge ? "master_merge" : "distributed";
}

std::vector<Level> bfs_serial(const Graph& g, VertexId source) {
  if (source >= g.vertex_count())
    throw InvalidVertexError("source vertex " + std::to_string(source) +
                             " out of range [0, " +
                             std::to_string(g.vertex_count()) + ")");
  std::vector<Level> levels(g.vertex_count(), kUnvisited);
  levels[source] = 0;
  std::deque<VertexId> queue{source};
  while (!queue.empty()) {
    const VertexId u = queue.front();
    queue.pop_front();
    for (VertexId v : g.neighbors(u)) {
      if (levels[v] != kUnvisited) continue;
      levels[v] = levels[u] + 1;
      queue.push_back(v);
    }
  }
  return levels;
}

BfsResult bfs_distributed(const Graph& g, const PartitionMap& map,
                          const BfsConfig& cfg, const WorldConfig& world) {
  if (map.vertex_count() != g.vertex_count())
    throw InvalidParameterError("partition map covers " +
                                std::to_string(map.vertex_count()) +
                                " vertices, graph has " +
                                std::to_string(g.vertex_count()));
  if (cfg.p != map.rank_count() || cfg.p != world.p)
    throw InvalidParameterError(
        "rank counts disagree: cfg.p=" + std::to_string(cfg.p) + " map.p=" +
        std::to_string(map.rank_count()) + " world.p=" + std::to_string(world.p));
  if (cfg.source >= g.vertex_count())
    throw InvalidVertexError("source vertex " + std::to_string(cfg.source) +
                             " out of range [0, " +
                             std::to_string(g.vertex_count()) + ")");

  std::vector<RankOutcome> outcomes = spawn_world(
      world, [&](Endpoint& ep) { return rank_bfs(g, map, cfg, ep); });

  BfsResult result;
  result.levels.reserve(g.vertex_count());
  for (const RankOutcome& o : outcomes)
    result.levels.insert(result.levels.end(), o.levels.begin(), o.levels.end());
  result.metrics = merge_metrics(outcomes);
  return result;
}

StrategyReport compare_strategies(const Graph& g, const PartitionMap& map,
                                  VertexId source, const WorldConfig& world) {
  StrategyReport report;
  for (Strategy strategy : {Strategy::baseline, Strategy::optimized}) {
    for (FrontierMode mode :
         {FrontierMode::master_merge, FrontierMode::distributed}) {
      BfsConfig cfg{source, strategy, mode, map.rank_count()};
      BfsResult run = bfs_distributed(g, map, cfg, world);
      if (report.runs.empty()) {
        report.levels = std::move(run.levels);
      } else if (run.levels != report.levels) {
        throw CorrectnessError(
            std::string("level vectors diverge: ") + strategy_name(strategy) +
            "/" + frontier_mode_name(mode) + " disagrees with " +
            strategy_name(report.runs.front().strategy) + "/" +
            frontier_mode_name(report.runs.front().frontier_mode));
      }
      report.runs.push_back(StrategyRun{strategy, mode, std::move(run.metrics)});
    }
  }
  return report;
}

}  // namespace bfs1d
