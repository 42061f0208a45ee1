#pragma once

#include <cstdint>
#include <cstring>
#include <vector>

#include "bfs1d/transport.hpp"

namespace bfs1d::wire {

// Socket frame layout, little-endian throughout:
//   [dest-rank:8][level:8][count:8][ids:8*count]
inline constexpr std::size_t kFrameHeaderSize = 24;

inline void store_le64(std::uint64_t v, unsigned char* out) {
  for (int i = 0; i < 8; ++i) out[i] = static_cast<unsigned char>(v >> (8 * i));
}

inline std::uint64_t load_le64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

inline std::vector<unsigned char> encode_frame(int dest, const VertexMessage& msg) {
  std::vector<unsigned char> buf(kFrameHeaderSize + 8 * msg.vertices.size());
  store_le64(static_cast<std::uint64_t>(dest), buf.data());
  store_le64(msg.level, buf.data() + 8);
  store_le64(msg.vertices.size(), buf.data() + 16);
  for (std::size_t i = 0; i < msg.vertices.size(); ++i)
    store_le64(msg.vertices[i], buf.data() + kFrameHeaderSize + 8 * i);
  return buf;
}

}  // namespace bfs1d::wire
