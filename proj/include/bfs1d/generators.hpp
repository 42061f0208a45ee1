#pragma once

#include <cstdint>

#include "bfs1d/graph.hpp"

namespace bfs1d {

enum class GraphFamily { star, erdos_renyi, small_world };

const char* family_name(GraphFamily family);

/// Parameters for the three graph families. Generation is chunked by source
/// vertex: randomness is drawn from a per-source-vertex stream (mt19937_64
/// seeded with splitmix64(seed, vertex)), so chunk_size is purely a memory
/// knob and never changes the output.
struct GeneratorSpec {
  GraphFamily family = GraphFamily::star;
  VertexId n = 0;
  double edge_prob = 0.0;       // erdos_renyi
  std::uint64_t ring_degree = 0;  // small_world: even k, k < n
  double rewire_prob = 0.0;     // small_world
  std::uint64_t seed = 0;
  std::uint64_t chunk_size = 1'000'000;
};

/// Hub-and-leaves: vertex 0 connected to every other vertex.
EdgeList generate_star(VertexId n);

/// G(n, p): each unordered pair included independently with probability
/// edge_prob. Uses geometric gap skipping per source row, so the cost is
/// O(n + edges) rather than O(n^2).
EdgeList generate_erdos_renyi(const GeneratorSpec& spec);

/// Watts-Strogatz: ring lattice (each vertex linked to its k/2 clockwise
/// neighbors), then each lattice edge rewired with probability rewire_prob
/// to a uniform non-self, non-duplicate target. Edge count is exactly n*k/2.
EdgeList generate_small_world(const GeneratorSpec& spec);

/// Dispatch on spec.family.
EdgeList generate(const GeneratorSpec& spec);

namespace rng {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace rng

}  // namespace bfs1d
