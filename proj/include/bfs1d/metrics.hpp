#pragma once

#include <cstdint>
#include <vector>

namespace bfs1d {

/// Byte and message accounting for one rank's endpoint. Wire bytes count the
/// serialized VertexMessage size (16-byte header + 8 bytes per vertex);
/// socket framing overhead is not counted, so both backends agree bit for
/// bit. aggregation_copy_bytes models the baseline's merge of per-destination
/// buffers into one buffer before the exchange.
struct TransportCounters {
  std::uint64_t bytes_sent = 0;
  std::uint64_t bytes_received = 0;
  std::uint64_t messages_sent = 0;
  std::uint64_t messages_received = 0;
  std::uint64_t aggregation_copy_bytes = 0;

  TransportCounters& operator+=(const TransportCounters& o) {
    bytes_sent += o.bytes_sent;
    bytes_received += o.bytes_received;
    messages_sent += o.messages_sent;
    messages_received += o.messages_received;
    aggregation_copy_bytes += o.aggregation_copy_bytes;
    return *this;
  }
};

/// One BFS superstep's instrumentation. When merged across ranks, counter
/// fields are summed and timing fields take the slowest rank.
struct LevelRecord {
  std::uint64_t level = 0;
  std::uint64_t frontier_size_global = 0;
  std::uint64_t wire_bytes = 0;
  std::uint64_t messages = 0;
  std::uint64_t aggregation_copy_bytes = 0;
  std::uint64_t local_shortcircuit_hits = 0;
  std::uint64_t compute_ns = 0;
  std::uint64_t comm_ns = 0;
  std::uint64_t elapsed_ns = 0;
};

/// Per-run metrics: one record per traversed level. Run totals are derived
/// from the records, so "totals equal the sum of per-level records" holds by
/// construction.
struct RunMetrics {
  std::vector<LevelRecord> per_level;

  std::uint64_t levels_traversed() const { return per_level.size(); }

  std::uint64_t total_wire_bytes() const { return sum(&LevelRecord::wire_bytes); }
  std::uint64_t total_messages() const { return sum(&LevelRecord::messages); }
  std::uint64_t total_aggregation_copy_bytes() const {
    return sum(&LevelRecord::aggregation_copy_bytes);
  }
  std::uint64_t total_shortcircuit_hits() const {
    return sum(&LevelRecord::local_shortcircuit_hits);
  }
  std::uint64_t total_compute_ns() const { return sum(&LevelRecord::compute_ns); }
  std::uint64_t total_comm_ns() const { return sum(&LevelRecord::comm_ns); }
  std::uint64_t total_elapsed_ns() const { return sum(&LevelRecord::elapsed_ns); }

 private:
  std::uint64_t sum(std::uint64_t LevelRecord::* field) const {
    std::uint64_t total = 0;
    for (const LevelRecord& r : per_level) total += r.*field;
    return total;
  }
};

}  // namespace bfs1d
