#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace bfs1d {

using VertexId = std::uint64_t;

struct Edge {
  VertexId u = 0;
  VertexId v = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Interchange form between the generators, file I/O and the CSR builder.
/// Edges are stored with u < v; add() normalizes the orientation.
struct EdgeList {
  VertexId vertex_count = 0;
  std::vector<Edge> edges;

  void add(VertexId a, VertexId b) {
    if (a < b)
      edges.push_back({a, b});
    else
      edges.push_back({b, a});
  }
};

/// Immutable undirected graph in CSR form over global vertex ids.
/// Every undirected edge appears in both endpoints' adjacency lists, and
/// each list is sorted ascending so traversal order is canonical.
class Graph {
 public:
  Graph() = default;
  Graph(VertexId vertex_count, std::vector<std::uint64_t> row_offsets,
        std::vector<VertexId> neighbors)
      : vertex_count_(vertex_count),
        row_offsets_(std::move(row_offsets)),
        neighbors_(std::move(neighbors)) {}

  VertexId vertex_count() const { return vertex_count_; }
  std::uint64_t edge_count() const { return neighbors_.size() / 2; }
  std::uint64_t degree(VertexId v) const {
    return row_offsets_[v + 1] - row_offsets_[v];
  }
  std::span<const VertexId> neighbors(VertexId v) const {
    return {neighbors_.data() + row_offsets_[v],
            neighbors_.data() + row_offsets_[v + 1]};
  }
  const std::vector<std::uint64_t>& row_offsets() const { return row_offsets_; }
  const std::vector<VertexId>& neighbor_array() const { return neighbors_; }

 private:
  VertexId vertex_count_ = 0;
  std::vector<std::uint64_t> row_offsets_{0};
  std::vector<VertexId> neighbors_;
};

/// Builds the canonical CSR graph from an edge list. Rejects self-loops and
/// duplicate undirected edges, naming the offending pair.
Graph build_graph(const EdgeList& edges);

/// Inverse of build_graph for canonical graphs: one (u, v) pair with u < v
/// per undirected edge, emitted in ascending (u, v) order.
EdgeList to_edge_list(const Graph& g);

}  // namespace bfs1d
