#pragma once

#include <string>
#include <utility>

#include "bfs1d/error.hpp"
#include "bfs1d/graph.hpp"

namespace bfs1d {

/// 1-D block partition of the vertex id range [0, n) across p ranks:
/// contiguous blocks of width ceil(n/p), last block short. Ranks beyond the
/// vertex range own empty blocks (p > n is legal).
class PartitionMap {
 public:
  PartitionMap(VertexId n, int p) : n_(n), p_(p) {
    if (p < 1) throw InvalidParameterError("rank count must be >= 1");
    chunk_ = (n + static_cast<VertexId>(p) - 1) / static_cast<VertexId>(p);
  }

  VertexId vertex_count() const { return n_; }
  int rank_count() const { return p_; }
  VertexId chunk() const { return chunk_; }

  int owner(VertexId v) const {
    check_vertex(v);
    return static_cast<int>(v / chunk_);
  }

  std::pair<VertexId, VertexId> local_range(int rank) const {
    check_rank(rank);
    const VertexId start = std::min(static_cast<VertexId>(rank) * chunk_, n_);
    const VertexId end = std::min(start + chunk_, n_);
    return {start, end};
  }

  VertexId local_count(int rank) const {
    auto [start, end] = local_range(rank);
    return end - start;
  }

  VertexId to_local(VertexId v, int rank) const {
    check_vertex(v);
    auto [start, end] = local_range(rank);
    if (v < start || v >= end)
      throw InvalidVertexError("vertex " + std::to_string(v) +
                               " not owned by rank " + std::to_string(rank));
    return v - start;
  }

  VertexId to_global(VertexId local, int rank) const {
    auto [start, end] = local_range(rank);
    if (local >= end - start)
      throw InvalidVertexError("local index " + std::to_string(local) +
                               " out of range for rank " + std::to_string(rank));
    return start + local;
  }

 private:
  void check_vertex(VertexId v) const {
    if (v >= n_)
      throw InvalidVertexError("vertex " + std::to_string(v) +
                               " out of range [0, " + std::to_string(n_) + ")");
  }
  void check_rank(int rank) const {
    if (rank < 0 || rank >= p_)
      throw InvalidRankError("rank " + std::to_string(rank) +
                             " out of range [0, " + std::to_string(p_) + ")");
  }

  VertexId n_;
  int p_;
  VertexId chunk_;
};

}  // namespace bfs1d
