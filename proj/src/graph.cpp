#include "bfs1d/graph.hpp"

#include <algorithm>
#include <string>

#include "bfs1d/error.hpp"

namespace bfs1d {

namespace {

std::string pair_str(VertexId u, VertexId v) {
  return "(" + std::to_string(u) + ", " + std::to_string(v) + ")";
}

}  // namespace

Graph build_graph(const EdgeList& edges) {
  const VertexId n = edges.vertex_count;
  for (const Edge& e : edges.edges) {
    if (e.u == e.v)
      throw InvalidInputError("self-loop edge " + pair_str(e.u, e.v));
    if (e.u >= n || e.v >= n)
      throw InvalidInputError("edge " + pair_str(e.u, e.v) +
                              " out of range for vertex count " +
                              std::to_string(n));
  }

  std::vector<std::uint64_t> offsets(n + 1, 0);
  for (const Edge& e : edges.edges) {
    ++offsets[e.u + 1];
    ++offsets[e.v + 1];
  }
  for (VertexId v = 0; v < n; ++v) offsets[v + 1] += offsets[v];

  std::vector<VertexId> adj(edges.edges.size() * 2);
  std::vector<std::uint64_t> cursor(offsets.begin(), offsets.end() - 1);
  for (const Edge& e : edges.edges) {
    adj[cursor[e.u]++] = e.v;
    adj[cursor[e.v]++] = e.u;
  }

  for (VertexId v = 0; v < n; ++v) {
    auto first = adj.begin() + static_cast<std::ptrdiff_t>(offsets[v]);
    auto last = adj.begin() + static_cast<std::ptrdiff_t>(offsets[v + 1]);
    std::sort(first, last);
    auto dup = std::adjacent_find(first, last);
    if (dup != last)
      throw InvalidInputError("duplicate edge " + pair_str(v, *dup));
  }

  return Graph(n, std::move(offsets), std::move(adj));
}

EdgeList to_edge_list(const Graph& g) {
  EdgeList out;
  out.vertex_count = g.vertex_count();
  out.edges.reserve(g.edge_count());
  for (VertexId u = 0; u < g.vertex_count(); ++u) {
    for (VertexId v : g.neighbors(u)) {
      if (u < v) out.edges.push_back({u, v});
    }
  }
  return out;
}

}  // namespace bfs1d
