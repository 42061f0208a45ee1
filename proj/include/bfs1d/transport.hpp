#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <type_traits>
#include <vector>

#include "bfs1d/graph.hpp"
#include "bfs1d/metrics.hpp"

namespace bfs1d {

enum class Backend { in_process, socket };

const char* backend_name(Backend b);

/// Description of a message-passing world. The socket backend establishes a
/// full TCP mesh at startup from listen_addresses ("host:port", port 0 for
/// ephemeral); empty means loopback with ephemeral ports for every rank.
/// The timeout bounds every blocking transport wait, turning collective
/// misuse into an error instead of a deadlock.
struct WorldConfig {
  int p = 1;
  Backend backend = Backend::in_process;
  std::vector<std::string> listen_addresses;
  std::chrono::milliseconds timeout{30'000};
};

/// Unit of transport: a batch of global vertex ids for one destination,
/// tagged with the BFS level it belongs to. Serialized little-endian as
/// [level:8][count:8][ids:8*count]; wire-byte counters use exactly this
/// size, so counts are identical across backends.
struct VertexMessage {
  std::uint64_t level = 0;
  std::vector<VertexId> vertices;

  std::uint64_t serialized_size() const { return 16 + 8 * vertices.size(); }
  bool empty() const { return vertices.empty(); }
  friend bool operator==(const VertexMessage&, const VertexMessage&) = default;
};

/// A rank's handle to the world. Point-to-point sends are buffered and never
/// wait for the receiver; recv blocks. Collectives are composed from
/// point-to-point frames identically in every backend, which makes the
/// byte accounting backend-independent by construction.
///
/// Exactly one endpoint exists per rank and it is confined to that rank's
/// thread; it must not be shared.
class Endpoint {
 public:
  virtual ~Endpoint() = default;
  Endpoint(const Endpoint&) = delete;
  Endpoint& operator=(const Endpoint&) = delete;

  int rank() const { return rank_; }
  int world_size() const { return world_size_; }
  const TransportCounters& counters() const { return counters_; }

  /// Buffered point-to-point send. Self-sends are forbidden.
  void send(int to, const VertexMessage& msg);

  /// Blocks until a message from `from` is available. Messages between a
  /// fixed (from, to) pair arrive in send order.
  VertexMessage recv(int from);

  /// Collective. outgoing is indexed by destination and outgoing[rank()]
  /// must be empty; the result is indexed by source. Models the baseline
  /// aggregate-then-exchange: aggregation_copy_bytes grows by the summed
  /// serialized size of the non-empty outgoing buffers, and the same sum is
  /// counted as wire bytes (empty slots cross for completion but cost
  /// nothing).
  std::vector<VertexMessage> exchange_all(const std::vector<VertexMessage>& outgoing);

  /// Collective. Root receives the contributions concatenated in rank
  /// order (its own included); everyone else gets an empty message. All
  /// ranks must pass the same root and level.
  VertexMessage gather_to_root(const VertexMessage& contribution, int root);

  /// Collective. Every rank returns the root's message.
  VertexMessage broadcast(const VertexMessage& msg, int root);

  /// Collective. No rank returns until all have entered.
  void barrier();

  /// Collective. Every rank returns the sum of all contributions.
  std::uint64_t allreduce_sum(std::uint64_t value);

 protected:
  Endpoint(int rank, int world_size) : rank_(rank), world_size_(world_size) {}

  /// Raw, uncounted frame movement; counting policy lives in this class.
  virtual void transmit(int to, VertexMessage msg) = 0;
  virtual VertexMessage receive_raw(int from, const char* op, bool collective) = 0;

 private:
  void check_peer(int peer, const char* what) const;
  void count_sent(const VertexMessage& msg);
  void count_received(const VertexMessage& msg);

  int rank_;
  int world_size_;
  TransportCounters counters_;
};

namespace detail {
void run_world(const WorldConfig& config,
               const std::function<void(int, Endpoint&)>& rank_main);
}

/// Runs p instances of rank_main, each with its own Endpoint, and collects
/// their results in rank order. If any rank throws, the world shuts down
/// (unblocking the others) and a WorldError names the failing rank.
template <typename Fn>
auto spawn_world(const WorldConfig& config, Fn&& rank_main) {
  using Result = std::invoke_result_t<Fn&, Endpoint&>;
  if constexpr (std::is_void_v<Result>) {
    detail::run_world(config, [&](int, Endpoint& ep) { rank_main(ep); });
  } else {
    std::vector<std::optional<Result>> slots(static_cast<std::size_t>(config.p));
    detail::run_world(config,
                      [&](int r, Endpoint& ep) { slots[r].emplace(rank_main(ep)); });
    std::vector<Result> results;
    results.reserve(slots.size());
    for (auto& slot : slots) results.push_back(std::move(*slot));
    return results;
  }
}

}  // namespace bfs1d
