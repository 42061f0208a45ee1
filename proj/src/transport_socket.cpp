#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <charconv>
#include <cstring>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "bfs1d/error.hpp"
#include "bfs1d/transport.hpp"
#include "bfs1d/wire.hpp"
#include "transport_internal.hpp"

namespace bfs1d::detail {

namespace {

using Clock = std::chrono::steady_clock;

[[noreturn]] void throw_errno(const std::string& what) {
  throw TransportError(what + ": " + std::strerror(errno));
}

sockaddr_in parse_address(const std::string& spec) {
  const auto colon = spec.rfind(':');
  if (colon == std::string::npos)
    throw InvalidParameterError("listen address '" + spec +
                                "' is not of the form host:port");
  std::string host = spec.substr(0, colon);
  if (host == "localhost") host = "127.0.0.1";
  const std::string port_str = spec.substr(colon + 1);

  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  if (inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1)
    throw InvalidParameterError("listen address host '" + host +
                                "' is not an IPv4 literal");
  std::uint16_t port = 0;
  auto [ptr, ec] = std::from_chars(port_str.data(),
                                   port_str.data() + port_str.size(), port);
  if (ec != std::errc{} || ptr != port_str.data() + port_str.size())
    throw InvalidParameterError("bad port in listen address '" + spec + "'");
  addr.sin_port = htons(port);
  return addr;
}

struct SocketWorld {
  explicit SocketWorld(const WorldConfig& config)
      : p(config.p), timeout(config.timeout) {
    mailboxes.reserve(static_cast<std::size_t>(p));
    for (int r = 0; r < p; ++r)
      mailboxes.push_back(std::make_unique<Mailbox>(p));
    listen_fds.assign(static_cast<std::size_t>(p), -1);
    peer_fds.assign(static_cast<std::size_t>(p),
                    std::vector<int>(static_cast<std::size_t>(p), -1));
    addresses.assign(static_cast<std::size_t>(p), sockaddr_in{});
  }

  ~SocketWorld() { close_fds(); }

  // Unblocks every rank: mailbox waiters wake with shutdown status, blocked
  // reads/writes fail once the sockets are shut down.
  void shutdown() {
    down.store(true);
    for (auto& m : mailboxes) m->shutdown();
    std::lock_guard lock(fd_mu);
    for (int fd : listen_fds)
      if (fd >= 0) ::shutdown(fd, SHUT_RDWR);
    for (auto& row : peer_fds)
      for (int fd : row)
        if (fd >= 0) ::shutdown(fd, SHUT_RDWR);
  }

  void close_fds() {
    std::lock_guard lock(fd_mu);
    for (int& fd : listen_fds)
      if (fd >= 0) {
        ::close(fd);
        fd = -1;
      }
    for (auto& row : peer_fds)
      for (int& fd : row)
        if (fd >= 0) {
          ::close(fd);
          fd = -1;
        }
  }

  int p;
  std::chrono::milliseconds timeout;
  std::atomic<bool> down{false};
  std::vector<std::unique_ptr<Mailbox>> mailboxes;
  std::vector<int> listen_fds;
  std::vector<std::vector<int>> peer_fds;  // [rank][peer]
  std::vector<sockaddr_in> addresses;      // actual bound addresses
  std::mutex fd_mu;

  std::mutex readers_mu;
  std::vector<std::thread> readers;

  std::mutex reader_failure_mu;
  RankFailures reader_failures;
};

void set_nodelay(int fd) {
  int one = 1;
  setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
}

// Waits until fd is readable, polling so world shutdown is noticed promptly.
// Returns false on shutdown or deadline.
bool wait_readable(SocketWorld& world, int fd, Clock::time_point deadline) {
  while (!world.down.load()) {
    if (Clock::now() >= deadline) return false;
    pollfd pfd{fd, POLLIN, 0};
    const int rc = ::poll(&pfd, 1, 100);
    if (rc < 0) {
      if (errno == EINTR) continue;
      throw_errno("poll");
    }
    if (rc > 0) return true;
  }
  return false;
}

// Reads exactly len bytes. Returns false on clean EOF at a frame boundary
// (start == true) or on shutdown; throws on mid-frame EOF.
bool read_exact(SocketWorld& world, int fd, unsigned char* buf, std::size_t len,
                Clock::time_point deadline, bool eof_ok_at_start = false) {
  std::size_t got = 0;
  while (got < len) {
    if (!wait_readable(world, fd, deadline)) return false;
    const ssize_t n = ::read(fd, buf + got, len - got);
    if (n < 0) {
      if (errno == EINTR) continue;
      if (world.down.load()) return false;
      throw_errno("read");
    }
    if (n == 0) {
      if (world.down.load() || (eof_ok_at_start && got == 0)) return false;
      throw TransportError("connection closed mid-frame");
    }
    got += static_cast<std::size_t>(n);
  }
  return true;
}

void write_all(SocketWorld& world, int fd, const unsigned char* buf,
               std::size_t len) {
  std::size_t sent = 0;
  while (sent < len) {
    const ssize_t n = ::send(fd, buf + sent, len - sent, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      if (world.down.load())
        throw ShutdownError("transmit: world shut down");
      throw_errno("send");
    }
    sent += static_cast<std::size_t>(n);
  }
}

// Drains frames from one peer connection into the owning rank's mailbox.
void reader_loop(SocketWorld& world, int rank, int peer, int fd) {
  try {
    // Far deadline: an idle connection is normal, shutdown wakes the poll.
    const auto deadline = Clock::time_point::max();
    while (!world.down.load()) {
      unsigned char header[wire::kFrameHeaderSize];
      if (!read_exact(world, fd, header, sizeof(header), deadline, true)) break;
      const std::uint64_t dest = wire::load_le64(header);
      const std::uint64_t level = wire::load_le64(header + 8);
      const std::uint64_t count = wire::load_le64(header + 16);
      if (dest != static_cast<std::uint64_t>(rank))
        throw TransportError("frame addressed to rank " + std::to_string(dest) +
                             " arrived at rank " + std::to_string(rank));
      if (count > (1ULL << 32))
        throw TransportError("implausible frame vertex count " +
                             std::to_string(count));
      VertexMessage msg{level, std::vector<VertexId>(count)};
      if (count > 0) {
        std::vector<unsigned char> payload(count * 8);
        if (!read_exact(world, fd, payload.data(), payload.size(), deadline))
          break;
        for (std::uint64_t i = 0; i < count; ++i)
          msg.vertices[i] = wire::load_le64(payload.data() + 8 * i);
      }
      world.mailboxes[rank]->push(peer, std::move(msg));
    }
  } catch (...) {
    bool first = false;
    {
      std::lock_guard lock(world.reader_failure_mu);
      world.reader_failures.emplace_back(rank, std::current_exception());
      first = world.reader_failures.size() == 1;
    }
    if (first) world.shutdown();
  }
}

class SocketEndpoint final : public Endpoint {
 public:
  SocketEndpoint(int rank, SocketWorld& world)
      : Endpoint(rank, world.p), world_(world) {}

 protected:
  void transmit(int to, VertexMessage msg) override {
    if (world_.down.load()) throw ShutdownError("transmit: world shut down");
    const std::vector<unsigned char> frame = wire::encode_frame(to, msg);
    write_all(world_, world_.peer_fds[rank()][to], frame.data(), frame.size());
  }

  VertexMessage receive_raw(int from, const char* op, bool collective) override {
    VertexMessage msg;
    PopStatus status = world_.mailboxes[rank()]->pop(from, world_.timeout, msg);
    return finish_pop(status, std::move(msg), from, world_.timeout, op,
                      collective);
  }

 private:
  SocketWorld& world_;
};

int make_listener(const sockaddr_in& requested, sockaddr_in& actual) {
  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) throw_errno("socket");
  int one = 1;
  setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  if (::bind(fd, reinterpret_cast<const sockaddr*>(&requested),
             sizeof(requested)) < 0) {
    const int saved = errno;
    ::close(fd);
    errno = saved;
    throw_errno("bind");
  }
  if (::listen(fd, 128) < 0) {
    const int saved = errno;
    ::close(fd);
    errno = saved;
    throw_errno("listen");
  }
  socklen_t len = sizeof(actual);
  if (::getsockname(fd, reinterpret_cast<sockaddr*>(&actual), &len) < 0) {
    const int saved = errno;
    ::close(fd);
    errno = saved;
    throw_errno("getsockname");
  }
  return fd;
}

// Dials every lower-ranked peer and accepts a connection from every
// higher-ranked one; an 8-byte little-endian rank id identifies each dialer.
void establish_mesh(SocketWorld& world, int rank) {
  const auto deadline = Clock::now() + world.timeout;

  for (int peer = 0; peer < rank; ++peer) {
    int fd = -1;
    while (true) {
      if (world.down.load()) throw ShutdownError("mesh setup aborted");
      fd = ::socket(AF_INET, SOCK_STREAM, 0);
      if (fd < 0) throw_errno("socket");
      if (::connect(fd, reinterpret_cast<const sockaddr*>(&world.addresses[peer]),
                    sizeof(sockaddr_in)) == 0)
        break;
      const int saved = errno;
      ::close(fd);
      if (Clock::now() >= deadline) {
        errno = saved;
        throw_errno("connect to rank " + std::to_string(peer));
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(10));
    }
    set_nodelay(fd);
    {
      std::lock_guard lock(world.fd_mu);
      world.peer_fds[rank][peer] = fd;
    }
    unsigned char handshake[8];
    wire::store_le64(static_cast<std::uint64_t>(rank), handshake);
    write_all(world, fd, handshake, sizeof(handshake));
  }

  for (int pending = world.p - 1 - rank; pending > 0; --pending) {
    if (!wait_readable(world, world.listen_fds[rank], deadline)) {
      if (world.down.load()) throw ShutdownError("mesh setup aborted");
      throw TransportError("rank " + std::to_string(rank) +
                           ": timed out waiting for mesh connections");
    }
    const int fd = ::accept(world.listen_fds[rank], nullptr, nullptr);
    if (fd < 0) {
      if (world.down.load()) throw ShutdownError("mesh setup aborted");
      if (errno == EINTR || errno == EAGAIN) {
        ++pending;
        continue;
      }
      throw_errno("accept");
    }
    set_nodelay(fd);
    unsigned char handshake[8];
    if (!read_exact(world, fd, handshake, sizeof(handshake), deadline)) {
      ::close(fd);
      if (world.down.load()) throw ShutdownError("mesh setup aborted");
      throw TransportError("mesh handshake interrupted");
    }
    const std::uint64_t peer = wire::load_le64(handshake);
    if (peer <= static_cast<std::uint64_t>(rank) ||
        peer >= static_cast<std::uint64_t>(world.p)) {
      ::close(fd);
      throw TransportError("mesh handshake from unexpected rank " +
                           std::to_string(peer));
    }
    std::lock_guard lock(world.fd_mu);
    if (world.peer_fds[rank][peer] != -1) {
      ::close(fd);
      throw TransportError("duplicate mesh connection from rank " +
                           std::to_string(peer));
    }
    world.peer_fds[rank][peer] = fd;
  }

  std::lock_guard lock(world.readers_mu);
  for (int peer = 0; peer < world.p; ++peer) {
    if (peer == rank) continue;
    const int fd = world.peer_fds[rank][peer];
    world.readers.emplace_back(
        [&world, rank, peer, fd] { reader_loop(world, rank, peer, fd); });
  }
}

}  // namespace

void run_socket_world(const WorldConfig& config,
                      const std::function<void(int, Endpoint&)>& rank_main) {
  SocketWorld world(config);

  std::vector<std::string> specs = config.listen_addresses;
  if (specs.empty())
    specs.assign(static_cast<std::size_t>(config.p), "127.0.0.1:0");
  for (int r = 0; r < config.p; ++r) {
    const sockaddr_in requested = parse_address(specs[r]);
    world.listen_fds[r] = make_listener(requested, world.addresses[r]);
  }

  RankFailures failures = run_ranks(
      config.p,
      [&](int r) {
        establish_mesh(world, r);
        SocketEndpoint ep(r, world);
        rank_main(r, ep);
      },
      [&] { world.shutdown(); });

  world.shutdown();
  {
    std::lock_guard lock(world.readers_mu);
    for (auto& t : world.readers) t.join();
  }
  world.close_fds();

  {
    std::lock_guard lock(world.reader_failure_mu);
    for (auto& f : world.reader_failures) failures.push_back(std::move(f));
  }
  throw_world_error(failures);
}

}  // namespace bfs1d::detail
