#pragma once

#include <chrono>
#include <condition_variable>
#include <deque>
#include <exception>
#include <functional>
#include <mutex>
#include <utility>
#include <vector>

#include "bfs1d/transport.hpp"

namespace bfs1d::detail {

enum class PopStatus { ok, timeout, shutdown };

/// One rank's inbox: per-source FIFO queues. Used directly by the in-process
/// backend and fed by reader threads in the socket backend, so blocking
/// semantics and shutdown behavior are identical in both.
class Mailbox {
 public:
  explicit Mailbox(int world_size)
      : queues_(static_cast<std::size_t>(world_size)) {}

  void push(int from, VertexMessage msg) {
    {
      std::lock_guard lock(mu_);
      queues_[from].push_back(std::move(msg));
    }
    cv_.notify_all();
  }

  PopStatus pop(int from, std::chrono::milliseconds timeout, VertexMessage& out) {
    std::unique_lock lock(mu_);
    const auto deadline = std::chrono::steady_clock::now() + timeout;
    while (true) {
      if (!queues_[from].empty()) {
        out = std::move(queues_[from].front());
        queues_[from].pop_front();
        return PopStatus::ok;
      }
      if (down_) return PopStatus::shutdown;
      if (cv_.wait_until(lock, deadline) == std::cv_status::timeout &&
          queues_[from].empty() && !down_)
        return PopStatus::timeout;
    }
  }

  void shutdown() {
    {
      std::lock_guard lock(mu_);
      down_ = true;
    }
    cv_.notify_all();
  }

  bool is_down() const {
    std::lock_guard lock(mu_);
    return down_;
  }

 private:
  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::vector<std::deque<VertexMessage>> queues_;
  bool down_ = false;
};

using RankFailures = std::vector<std::pair<int, std::exception_ptr>>;

/// Runs body(rank) on p threads. The first failure triggers on_failure once
/// (backends use it to unblock everyone); all failures are returned so the
/// caller can tear down before rethrowing.
RankFailures run_ranks(int p, const std::function<void(int)>& body,
                       const std::function<void()>& on_failure);

/// Throws WorldError for the lowest-rank primary (non-shutdown) failure.
/// No-op when failures is empty.
void throw_world_error(const RankFailures& failures);

void run_inproc_world(const WorldConfig& config,
                      const std::function<void(int, Endpoint&)>& rank_main);
void run_socket_world(const WorldConfig& config,
                      const std::function<void(int, Endpoint&)>& rank_main);

/// Translates a mailbox pop result into the transport error contract.
VertexMessage finish_pop(PopStatus status, VertexMessage&& msg, int from,
                         std::chrono::milliseconds timeout, const char* op,
                         bool collective);

}  // namespace bfs1d::detail
