#include <atomic>
#include <chrono>
#include <numeric>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "bfs1d/error.hpp"
#include "bfs1d/transport.hpp"
#include "bfs1d/wire.hpp"
#include "doctest.h"

using namespace bfs1d;

namespace {

WorldConfig inproc(int p) {
  WorldConfig cfg;
  cfg.p = p;
  cfg.backend = Backend::in_process;
  return cfg;
}

WorldConfig socket_world(int p) {
  WorldConfig cfg;
  cfg.p = p;
  cfg.backend = Backend::socket;
  return cfg;
}

}  // namespace

TEST_CASE("spawn_world: runs every rank and collects results in rank order") {
  auto ranks1 = spawn_world(inproc(1), [](Endpoint& ep) { return ep.rank(); });
  CHECK(ranks1 == std::vector<int>{0});

  auto ranks4 = spawn_world(inproc(4), [](Endpoint& ep) { return ep.rank(); });
  CHECK(ranks4 == std::vector<int>{0, 1, 2, 3});
}

TEST_CASE("spawn_world: a failing rank aborts the world by name") {
  try {
    spawn_world(inproc(2), [](Endpoint& ep) -> int {
      if (ep.rank() == 1) throw std::runtime_error("boom");
      // Rank 0 blocks forever; shutdown must unblock it.
      ep.recv(1);
      return 0;
    });
    FAIL("expected WorldError");
  } catch (const WorldError& e) {
    CHECK(e.failing_rank() == 1);
    CHECK(std::string(e.what()).find("rank 1") != std::string::npos);
    CHECK(std::string(e.what()).find("boom") != std::string::npos);
  }
}

TEST_CASE("send/recv: echo and FIFO order between a fixed pair") {
  auto results = spawn_world(inproc(2), [](Endpoint& ep) {
    std::vector<VertexMessage> got;
    if (ep.rank() == 0) {
      ep.send(1, VertexMessage{1, {5}});
      ep.send(1, VertexMessage{1, {6, 7}});
      ep.send(1, VertexMessage{2, {8}});
    } else {
      got.push_back(ep.recv(0));
      got.push_back(ep.recv(0));
      got.push_back(ep.recv(0));
    }
    return got;
  });
  REQUIRE(results[1].size() == 3);
  CHECK(results[1][0] == VertexMessage{1, {5}});
  CHECK(results[1][1] == VertexMessage{1, {6, 7}});
  CHECK(results[1][2] == VertexMessage{2, {8}});
}

TEST_CASE("send: self-sends and bad ranks are rejected") {
  auto caught = spawn_world(inproc(1), [](Endpoint& ep) {
    std::string kinds;
    try {
      ep.send(0, VertexMessage{});
    } catch (const InvalidRankError&) {
      kinds += "self;";
    }
    try {
      ep.send(5, VertexMessage{});
    } catch (const InvalidRankError&) {
      kinds += "range;";
    }
    try {
      ep.recv(0);
    } catch (const InvalidRankError&) {
      kinds += "recvself;";
    }
    return kinds;
  });
  CHECK(caught[0] == "self;range;recvself;");
}

TEST_CASE("exchange_all: symmetric swap") {
  auto results = spawn_world(inproc(2), [](Endpoint& ep) {
    std::vector<VertexMessage> outgoing(2);
    outgoing[1 - ep.rank()] =
        VertexMessage{0, {ep.rank() == 0 ? VertexId{5} : VertexId{2}}};
    return ep.exchange_all(outgoing);
  });
  CHECK(results[0][1].vertices == std::vector<VertexId>{2});
  CHECK(results[1][0].vertices == std::vector<VertexId>{5});
}

TEST_CASE("exchange_all: all-empty exchange moves zero wire bytes") {
  auto counters = spawn_world(inproc(3), [](Endpoint& ep) {
    std::vector<VertexMessage> outgoing(3);
    auto received = ep.exchange_all(outgoing);
    for (const auto& msg : received) CHECK(msg.vertices.empty());
    return ep.counters();
  });
  for (const auto& c : counters) {
    CHECK(c.bytes_sent == 0);
    CHECK(c.bytes_received == 0);
    CHECK(c.messages_sent == 0);
    CHECK(c.aggregation_copy_bytes == 0);
  }
}

TEST_CASE("exchange_all: aggregation copy bytes model the buffer merge") {
  auto counters = spawn_world(inproc(3), [](Endpoint& ep) {
    std::vector<VertexMessage> outgoing(3);
    if (ep.rank() == 0) {
      outgoing[1] = VertexMessage{0, {3}};
      outgoing[2] = VertexMessage{0, {4}};
    }
    ep.exchange_all(outgoing);
    return ep.counters();
  });
  // Two non-empty buffers of serialized size 16+8 each.
  CHECK(counters[0].aggregation_copy_bytes == 48);
  CHECK(counters[0].bytes_sent == 48);
  CHECK(counters[0].messages_sent == 2);
  CHECK(counters[1].aggregation_copy_bytes == 0);
  CHECK(counters[1].bytes_received == 24);
  CHECK(counters[2].bytes_received == 24);
}

TEST_CASE("exchange_all: non-empty self slot is rejected") {
  auto ok = spawn_world(inproc(1), [](Endpoint& ep) {
    std::vector<VertexMessage> outgoing(1);
    outgoing[0] = VertexMessage{0, {1}};
    try {
      ep.exchange_all(outgoing);
      return false;
    } catch (const InvalidParameterError&) {
      return true;
    }
  });
  CHECK(ok[0]);
}

TEST_CASE("gather_to_root: concatenation in rank order") {
  auto results = spawn_world(inproc(3), [](Endpoint& ep) {
    VertexMessage contribution{4, {}};
    if (ep.rank() == 0) contribution.vertices = {1};
    if (ep.rank() == 2) contribution.vertices = {7};
    return ep.gather_to_root(contribution, 0);
  });
  CHECK(results[0].vertices == std::vector<VertexId>{1, 7});
  CHECK(results[1].vertices.empty());
  CHECK(results[2].vertices.empty());
}

TEST_CASE("gather_to_root: p=1 is local and free") {
  auto results = spawn_world(inproc(1), [](Endpoint& ep) {
    auto merged = ep.gather_to_root(VertexMessage{0, {42}}, 0);
    CHECK(ep.counters().bytes_sent == 0);
    CHECK(ep.counters().bytes_received == 0);
    return merged;
  });
  CHECK(results[0].vertices == std::vector<VertexId>{42});
}

TEST_CASE("gather_to_root: size bookkeeping across four ranks") {
  auto results = spawn_world(inproc(4), [](Endpoint& ep) {
    std::vector<VertexId> contribution;
    const std::size_t sizes[] = {0, 2, 0, 5};
    for (std::size_t i = 0; i < sizes[ep.rank()]; ++i)
      contribution.push_back(100 * ep.rank() + i);
    return ep.gather_to_root(VertexMessage{1, contribution}, 0);
  });
  CHECK(results[0].vertices.size() == 7);
  CHECK(results[0].vertices ==
        std::vector<VertexId>{100, 101, 300, 301, 302, 303, 304});
}

TEST_CASE("broadcast: every rank returns the root's message") {
  auto results = spawn_world(inproc(4), [](Endpoint& ep) {
    VertexMessage msg{3, {}};
    if (ep.rank() == 2) msg.vertices = {9};
    return ep.broadcast(msg, 2);
  });
  for (const auto& r : results) CHECK(r.vertices == std::vector<VertexId>{9});

  auto identity = spawn_world(inproc(1), [](Endpoint& ep) {
    return ep.broadcast(VertexMessage{0, {13}}, 0);
  });
  CHECK(identity[0].vertices == std::vector<VertexId>{13});
}

TEST_CASE("broadcast: empty message costs 16 bytes per non-root rank") {
  auto counters = spawn_world(inproc(4), [](Endpoint& ep) {
    ep.broadcast(VertexMessage{}, 0);
    return ep.counters();
  });
  CHECK(counters[0].bytes_sent == 16 * 3);
  for (int r = 1; r < 4; ++r) {
    CHECK(counters[r].bytes_received == 16);
    CHECK(counters[r].bytes_sent == 0);
  }
}

TEST_CASE("allreduce_sum: termination-style sums") {
  auto zeros = spawn_world(inproc(4), [](Endpoint& ep) {
    return ep.allreduce_sum(0);
  });
  for (auto v : zeros) CHECK(v == 0);

  auto sums = spawn_world(inproc(4), [](Endpoint& ep) {
    const std::uint64_t contributions[] = {3, 0, 1, 2};
    return ep.allreduce_sum(contributions[ep.rank()]);
  });
  for (auto v : sums) CHECK(v == 6);

  auto alone = spawn_world(inproc(1), [](Endpoint& ep) {
    return ep.allreduce_sum(42);
  });
  CHECK(alone[0] == 42);
}

TEST_CASE("barrier: all ranks pass together") {
  std::atomic<int> entered{0};
  auto after = spawn_world(inproc(4), [&](Endpoint& ep) {
    entered.fetch_add(1);
    ep.barrier();
    // After the barrier every rank must have entered.
    return entered.load();
  });
  for (int seen : after) CHECK(seen == 4);
}

TEST_CASE("per-pair FIFO holds under randomized scheduling stress") {
  constexpr int kP = 4;
  constexpr std::uint64_t kMessages = 50;
  auto ordered = spawn_world(inproc(kP), [](Endpoint& ep) {
    std::mt19937_64 jitter(ep.rank() + 999);
    for (std::uint64_t seq = 0; seq < kMessages; ++seq) {
      for (int d = 0; d < kP; ++d) {
        if (d == ep.rank()) continue;
        if (jitter() % 3 == 0) std::this_thread::yield();
        ep.send(d, VertexMessage{seq, {ep.rank() * 1000 + seq}});
      }
    }
    bool in_order = true;
    for (int s = 0; s < kP; ++s) {
      if (s == ep.rank()) continue;
      for (std::uint64_t seq = 0; seq < kMessages; ++seq) {
        const VertexMessage msg = ep.recv(s);
        in_order = in_order && msg.level == seq &&
                   msg.vertices == std::vector<VertexId>{s * 1000 + seq};
      }
    }
    return in_order;
  });
  for (bool ok : ordered) CHECK(ok);
}

TEST_CASE("counter conservation: global bytes sent equal bytes received") {
  constexpr int kP = 4;
  // All ranks derive the same traffic matrix, so every sent message is
  // matched by exactly one recv.
  auto counters = spawn_world(inproc(kP), [](Endpoint& ep) {
    std::mt19937_64 plan(2024);
    std::uint64_t sizes[kP][kP];
    for (int s = 0; s < kP; ++s)
      for (int d = 0; d < kP; ++d) sizes[s][d] = plan() % 7;

    for (int d = 0; d < kP; ++d) {
      if (d == ep.rank()) continue;
      std::vector<VertexId> payload(sizes[ep.rank()][d], 42);
      ep.send(d, VertexMessage{0, payload});
    }
    for (int s = 0; s < kP; ++s) {
      if (s == ep.rank()) continue;
      const VertexMessage msg = ep.recv(s);
      CHECK(msg.vertices.size() == sizes[s][ep.rank()]);
    }
    return ep.counters();
  });

  TransportCounters total;
  for (const auto& c : counters) total += c;
  CHECK(total.bytes_sent == total.bytes_received);
  CHECK(total.messages_sent == total.messages_received);
  CHECK(total.bytes_sent > 0);
}

TEST_CASE("collective misuse: mismatched gather roots surface as an error") {
  WorldConfig cfg = inproc(2);
  cfg.timeout = std::chrono::milliseconds(300);
  try {
    spawn_world(cfg, [](Endpoint& ep) -> int {
      ep.gather_to_root(VertexMessage{0, {1}}, ep.rank());  // disagree on root
      return 0;
    });
    FAIL("expected WorldError");
  } catch (const WorldError& e) {
    CHECK(std::string(e.what()).find("gather_to_root") != std::string::npos);
  }
}

TEST_CASE("collective misuse: exchange entered by a subset of ranks") {
  WorldConfig cfg = inproc(2);
  cfg.timeout = std::chrono::milliseconds(300);
  try {
    spawn_world(cfg, [](Endpoint& ep) -> int {
      if (ep.rank() == 0) {
        std::vector<VertexMessage> outgoing(2);
        outgoing[1] = VertexMessage{0, {4}};
        ep.exchange_all(outgoing);  // rank 1 never joins the collective
      }
      return 0;
    });
    FAIL("expected WorldError");
  } catch (const WorldError& e) {
    CHECK(e.failing_rank() == 0);
    CHECK(std::string(e.what()).find("exchange_all") != std::string::npos);
  }
}

TEST_CASE("collective misuse: mismatched gather levels are detected at root") {
  auto caught = spawn_world(inproc(2), [](Endpoint& ep) {
    try {
      ep.gather_to_root(VertexMessage{ep.rank() == 0 ? 1ull : 2ull, {9}}, 0);
      return ep.rank() == 0 ? false : true;  // non-root cannot detect
    } catch (const CollectiveMisuseError&) {
      return true;
    }
  });
  CHECK(caught[0]);
}

TEST_CASE("world config validation") {
  WorldConfig bad = socket_world(3);
  bad.listen_addresses = {"127.0.0.1:0"};
  CHECK_THROWS_AS(spawn_world(bad, [](Endpoint&) { return 0; }),
                  InvalidParameterError);

  WorldConfig zero = inproc(0);
  CHECK_THROWS_AS(spawn_world(zero, [](Endpoint&) { return 0; }),
                  InvalidParameterError);
}

TEST_CASE("wire format: frame bytes are little-endian and exact") {
  const auto frame = wire::encode_frame(1, VertexMessage{2, {3, 0x0102030405060708}});
  const std::vector<unsigned char> expected = {
      1, 0, 0, 0, 0, 0, 0, 0,        // dest
      2, 0, 0, 0, 0, 0, 0, 0,        // level
      2, 0, 0, 0, 0, 0, 0, 0,        // count
      3, 0, 0, 0, 0, 0, 0, 0,        // id 0
      8, 7, 6, 5, 4, 3, 2, 1,        // id 1
  };
  CHECK(frame == expected);
  CHECK(wire::load_le64(frame.data() + 24) == 3);
}

TEST_CASE("socket backend: point-to-point and collectives match in-process") {
  // One fixed schedule of operations on both backends; contents and
  // counters must be identical.
  const auto script = [](Endpoint& ep) {
    std::vector<VertexMessage> outgoing(3);
    for (int d = 0; d < 3; ++d) {
      if (d == ep.rank()) continue;
      outgoing[d] = VertexMessage{7, {static_cast<VertexId>(ep.rank() * 10 + d),
                                      static_cast<VertexId>(d)}};
    }
    auto exchanged = ep.exchange_all(outgoing);

    auto gathered = ep.gather_to_root(
        VertexMessage{9, {static_cast<VertexId>(ep.rank())}}, 1);
    auto merged = ep.broadcast(
        ep.rank() == 1 ? gathered : VertexMessage{9, {}}, 1);
    const std::uint64_t total = ep.allreduce_sum(ep.rank() + 1);
    ep.barrier();

    std::vector<VertexId> digest;
    for (const auto& m : exchanged)
      digest.insert(digest.end(), m.vertices.begin(), m.vertices.end());
    digest.insert(digest.end(), merged.vertices.begin(), merged.vertices.end());
    digest.push_back(total);
    return std::pair{digest, ep.counters()};
  };

  auto inproc_out = spawn_world(inproc(3), script);
  auto socket_out = spawn_world(socket_world(3), script);

  REQUIRE(inproc_out.size() == socket_out.size());
  for (std::size_t r = 0; r < inproc_out.size(); ++r) {
    CHECK(inproc_out[r].first == socket_out[r].first);
    CHECK(inproc_out[r].second.bytes_sent == socket_out[r].second.bytes_sent);
    CHECK(inproc_out[r].second.bytes_received ==
          socket_out[r].second.bytes_received);
    CHECK(inproc_out[r].second.messages_sent ==
          socket_out[r].second.messages_sent);
    CHECK(inproc_out[r].second.messages_received ==
          socket_out[r].second.messages_received);
    CHECK(inproc_out[r].second.aggregation_copy_bytes ==
          socket_out[r].second.aggregation_copy_bytes);
  }
}

TEST_CASE("socket backend: failing rank aborts and unblocks the world") {
  try {
    spawn_world(socket_world(3), [](Endpoint& ep) -> int {
      if (ep.rank() == 2) throw std::runtime_error("socket boom");
      ep.recv(2);
      return 0;
    });
    FAIL("expected WorldError");
  } catch (const WorldError& e) {
    CHECK(e.failing_rank() == 2);
  }
}

TEST_CASE("socket backend: single-rank world needs no connections") {
  auto results = spawn_world(socket_world(1), [](Endpoint& ep) {
    return ep.allreduce_sum(7);
  });
  CHECK(results == std::vector<std::uint64_t>{7});
}

TEST_CASE("socket backend: explicit loopback addresses with ephemeral ports") {
  WorldConfig cfg = socket_world(2);
  cfg.listen_addresses = {"127.0.0.1:0", "localhost:0"};
  auto results = spawn_world(cfg, [](Endpoint& ep) {
    if (ep.rank() == 0) {
      ep.send(1, VertexMessage{5, {11, 22}});
      return VertexMessage{};
    }
    return ep.recv(0);
  });
  CHECK(results[1] == VertexMessage{5, {11, 22}});
}
