#include "bfs1d/transport.hpp"

#include <memory>
#include <string>
#include <thread>

#include "bfs1d/error.hpp"
#include "transport_internal.hpp"

namespace bfs1d {

const char* backend_name(Backend b) {
  return b == Backend::in_process ? "inproc" : "socket";
}

void Endpoint::check_peer(int peer, const char* what) const {
  if (peer < 0 || peer >= world_size_)
    throw InvalidRankError(std::string(what) + ": rank " + std::to_string(peer) +
                           " out of range [0, " + std::to_string(world_size_) + ")");
}

void Endpoint::count_sent(const VertexMessage& msg) {
  counters_.bytes_sent += msg.serialized_size();
  counters_.messages_sent += 1;
}

void Endpoint::count_received(const VertexMessage& msg) {
  counters_.bytes_received += msg.serialized_size();
  counters_.messages_received += 1;
}

void Endpoint::send(int to, const VertexMessage& msg) {
  check_peer(to, "send");
  if (to == rank_)
    throw InvalidRankError("send: self-sends are forbidden (rank " +
                           std::to_string(rank_) + ")");
  count_sent(msg);
  transmit(to, msg);
}

VertexMessage Endpoint::recv(int from) {
  check_peer(from, "recv");
  if (from == rank_)
    throw InvalidRankError("recv: cannot receive from self (rank " +
                           std::to_string(rank_) + ")");
  VertexMessage msg = receive_raw(from, "recv", false);
  count_received(msg);
  return msg;
}

std::vector<VertexMessage> Endpoint::exchange_all(
    const std::vector<VertexMessage>& outgoing) {
  if (outgoing.size() != static_cast<std::size_t>(world_size_))
    throw InvalidParameterError("exchange_all: expected " +
                                std::to_string(world_size_) + " buffers, got " +
                                std::to_string(outgoing.size()));
  if (!outgoing[rank_].empty())
    throw InvalidParameterError(
        "exchange_all: the self-addressed buffer must be empty");

  // Aggregation model: merging the non-empty buffers into one send buffer
  // copies their full serialized size once.
  for (int d = 0; d < world_size_; ++d) {
    if (d == rank_ || outgoing[d].empty()) continue;
    counters_.aggregation_copy_bytes += outgoing[d].serialized_size();
  }

  for (int d = 0; d < world_size_; ++d) {
    if (d == rank_) continue;
    if (!outgoing[d].empty()) count_sent(outgoing[d]);
    transmit(d, outgoing[d]);
  }

  std::vector<VertexMessage> incoming(static_cast<std::size_t>(world_size_));
  for (int s = 0; s < world_size_; ++s) {
    if (s == rank_) continue;
    VertexMessage msg = receive_raw(s, "exchange_all", true);
    if (!msg.empty()) count_received(msg);
    incoming[s] = std::move(msg);
  }
  return incoming;
}

VertexMessage Endpoint::gather_to_root(const VertexMessage& contribution, int root) {
  check_peer(root, "gather_to_root");
  if (rank_ != root) {
    count_sent(contribution);
    transmit(root, contribution);
    return VertexMessage{contribution.level, {}};
  }
  VertexMessage merged{contribution.level, {}};
  for (int s = 0; s < world_size_; ++s) {
    if (s == root) {
      merged.vertices.insert(merged.vertices.end(), contribution.vertices.begin(),
                             contribution.vertices.end());
      continue;
    }
    VertexMessage msg = receive_raw(s, "gather_to_root", true);
    count_received(msg);
    if (msg.level != contribution.level)
      throw CollectiveMisuseError(
          "gather_to_root: rank " + std::to_string(s) + " contributed level " +
          std::to_string(msg.level) + ", root expected " +
          std::to_string(contribution.level));
    merged.vertices.insert(merged.vertices.end(), msg.vertices.begin(),
                           msg.vertices.end());
  }
  return merged;
}

VertexMessage Endpoint::broadcast(const VertexMessage& msg, int root) {
  check_peer(root, "broadcast");
  if (rank_ == root) {
    for (int d = 0; d < world_size_; ++d) {
      if (d == root) continue;
      count_sent(msg);
      transmit(d, msg);
    }
    return msg;
  }
  VertexMessage received = receive_raw(root, "broadcast", true);
  count_received(received);
  return received;
}

void Endpoint::barrier() {
  gather_to_root(VertexMessage{}, 0);
  broadcast(VertexMessage{}, 0);
}

std::uint64_t Endpoint::allreduce_sum(std::uint64_t value) {
  VertexMessage gathered = gather_to_root(VertexMessage{0, {value}}, 0);
  VertexMessage total{0, {}};
  if (rank_ == 0) {
    std::uint64_t sum = 0;
    for (VertexId v : gathered.vertices) sum += v;
    total.vertices.push_back(sum);
  }
  total = broadcast(total, 0);
  return total.vertices.at(0);
}

namespace detail {

VertexMessage finish_pop(PopStatus status, VertexMessage&& msg, int from,
                         std::chrono::milliseconds timeout, const char* op,
                         bool collective) {
  switch (status) {
    case PopStatus::ok:
      return std::move(msg);
    case PopStatus::shutdown:
      throw ShutdownError(std::string(op) +
                          ": world shut down while waiting for rank " +
                          std::to_string(from));
    case PopStatus::timeout:
    default:
      if (collective)
        throw CollectiveMisuseError(
            std::string(op) + ": no message from rank " + std::to_string(from) +
            " within " + std::to_string(timeout.count()) +
            " ms; collective likely not entered by all ranks with matching "
            "arguments");
      throw TransportError(std::string(op) + ": no message from rank " +
                           std::to_string(from) + " within " +
                           std::to_string(timeout.count()) + " ms");
  }
}

RankFailures run_ranks(int p, const std::function<void(int)>& body,
                       const std::function<void()>& on_failure) {
  RankFailures failures;
  std::mutex failures_mu;
  bool failed = false;

  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(p));
  for (int r = 0; r < p; ++r) {
    threads.emplace_back([&, r] {
      try {
        body(r);
      } catch (...) {
        bool first = false;
        {
          std::lock_guard lock(failures_mu);
          failures.emplace_back(r, std::current_exception());
          first = !failed;
          failed = true;
        }
        if (first) on_failure();
      }
    });
  }
  for (auto& t : threads) t.join();
  return failures;
}

void throw_world_error(const RankFailures& failures) {
  if (failures.empty()) return;

  const std::pair<int, std::exception_ptr>* primary = nullptr;
  for (const auto& f : failures) {
    bool is_shutdown = false;
    try {
      std::rethrow_exception(f.second);
    } catch (const ShutdownError&) {
      is_shutdown = true;
    } catch (...) {
    }
    if (is_shutdown) continue;
    if (primary == nullptr || f.first < primary->first) primary = &f;
  }
  if (primary == nullptr) primary = &failures.front();

  std::string what = "unknown error";
  try {
    std::rethrow_exception(primary->second);
  } catch (const std::exception& e) {
    what = e.what();
  } catch (...) {
  }
  throw WorldError("world aborted: rank " + std::to_string(primary->first) +
                       " failed: " + what,
                   primary->first);
}

namespace {

struct InprocWorld {
  explicit InprocWorld(const WorldConfig& config) : timeout(config.timeout) {
    mailboxes.reserve(static_cast<std::size_t>(config.p));
    for (int r = 0; r < config.p; ++r)
      mailboxes.push_back(std::make_unique<Mailbox>(config.p));
  }

  void shutdown() {
    for (auto& m : mailboxes) m->shutdown();
  }

  std::chrono::milliseconds timeout;
  std::vector<std::unique_ptr<Mailbox>> mailboxes;
};

class InprocEndpoint final : public Endpoint {
 public:
  InprocEndpoint(int rank, int world_size, InprocWorld& world)
      : Endpoint(rank, world_size), world_(world) {}

 protected:
  void transmit(int to, VertexMessage msg) override {
    if (world_.mailboxes[rank()]->is_down())
      throw ShutdownError("transmit: world shut down");
    world_.mailboxes[to]->push(rank(), std::move(msg));
  }

  VertexMessage receive_raw(int from, const char* op, bool collective) override {
    VertexMessage msg;
    PopStatus status = world_.mailboxes[rank()]->pop(from, world_.timeout, msg);
    return finish_pop(status, std::move(msg), from, world_.timeout, op, collective);
  }

 private:
  InprocWorld& world_;
};

}  // namespace

void run_inproc_world(const WorldConfig& config,
                      const std::function<void(int, Endpoint&)>& rank_main) {
  InprocWorld world(config);
  RankFailures failures = run_ranks(
      config.p,
      [&](int r) {
        InprocEndpoint ep(r, config.p, world);
        rank_main(r, ep);
      },
      [&] { world.shutdown(); });
  throw_world_error(failures);
}

}  // namespace detail

namespace detail {

void run_world(const WorldConfig& config,
               const std::function<void(int, Endpoint&)>& rank_main) {
  if (config.p < 1) throw InvalidParameterError("world size must be >= 1");
  if (config.backend == Backend::socket && !config.listen_addresses.empty() &&
      config.listen_addresses.size() != static_cast<std::size_t>(config.p))
    throw InvalidParameterError(
        "socket backend needs one listen address per rank (" +
        std::to_string(config.p) + "), got " +
        std::to_string(config.listen_addresses.size()));

  if (config.backend == Backend::in_process)
    run_inproc_world(config, rank_main);
  else
    run_socket_world(config, rank_main);
}

}  // namespace detail

}  // namespace bfs1d
