#include "bfs1d/generators.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <unordered_set>

#include "bfs1d/error.hpp"

namespace bfs1d {

namespace {

// One engine per source vertex keeps the output independent of chunking.
std::mt19937_64 vertex_engine(std::uint64_t seed, VertexId v) {
  return std::mt19937_64(rng::splitmix64(seed ^ rng::splitmix64(v + 1)));
}

// Uniform in [0, 1). Hand-rolled from raw 64-bit draws so the stream does
// not depend on the standard library's distribution implementations.
double unit_double(std::mt19937_64& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, bound) via rejection sampling (no modulo bias).
std::uint64_t random_below(std::mt19937_64& eng, std::uint64_t bound) {
  const std::uint64_t limit = bound * (UINT64_MAX / bound);
  std::uint64_t x;
  do {
    x = eng();
  } while (x >= limit);
  return x % bound;
}

std::uint64_t effective_chunk(const GeneratorSpec& spec) {
  if (spec.chunk_size == 0)
    throw InvalidParameterError("chunk_size must be positive");
  return std::min<std::uint64_t>(spec.chunk_size, std::max<VertexId>(spec.n, 1));
}

}  // namespace

const char* family_name(GraphFamily family) {
  switch (family) {
    case GraphFamily::star:
      return "star";
    case GraphFamily::erdos_renyi:
      return "er";
    case GraphFamily::small_world:
      return "ws";
  }
  return "?";
}

EdgeList generate_star(VertexId n) {
  if (n == 0) throw InvalidParameterError("star graph requires n >= 1");
  EdgeList out;
  out.vertex_count = n;
  out.edges.reserve(n - 1);
  for (VertexId i = 1; i < n; ++i) out.edges.push_back({0, i});
  return out;
}

EdgeList generate_erdos_renyi(const GeneratorSpec& spec) {
  if (spec.edge_prob < 0.0 || spec.edge_prob > 1.0)
    throw InvalidParameterError("edge_prob must be in [0, 1], got " +
                                std::to_string(spec.edge_prob));
  const VertexId n = spec.n;
  const double p = spec.edge_prob;
  const std::uint64_t chunk = effective_chunk(spec);

  EdgeList out;
  out.vertex_count = n;
  if (n < 2 || p == 0.0) return out;

  std::vector<Edge> pending;
  for (VertexId chunk_begin = 0; chunk_begin < n; chunk_begin += chunk) {
    const VertexId chunk_end = std::min<VertexId>(chunk_begin + chunk, n);
    pending.clear();
    for (VertexId u = chunk_begin; u < chunk_end; ++u) {
      if (p == 1.0) {
        for (VertexId v = u + 1; v < n; ++v) pending.push_back({u, v});
        continue;
      }
      auto eng = vertex_engine(spec.seed, u);
      // Geometric skipping over the row (u, u+1 .. n-1): the gap to the
      // next included pair is 1 + floor(log(1-r) / log(1-p)).
      const double log_q = std::log1p(-p);
      double v = static_cast<double>(u);
      while (true) {
        const double r = unit_double(eng);
        v += 1.0 + std::floor(std::log1p(-r) / log_q);
        if (v >= static_cast<double>(n)) break;
        pending.push_back({u, static_cast<VertexId>(v)});
      }
    }
    out.edges.insert(out.edges.end(), pending.begin(), pending.end());
  }
  return out;
}

EdgeList generate_small_world(const GeneratorSpec& spec) {
  const VertexId n = spec.n;
  const std::uint64_t k = spec.ring_degree;
  if (k % 2 != 0 || k < 2 || k >= n)
    throw InvalidParameterError(
        "small world requires even ring degree k with 2 <= k < n, got k=" +
        std::to_string(k) + " n=" + std::to_string(n));
  if (spec.rewire_prob < 0.0 || spec.rewire_prob > 1.0)
    throw InvalidParameterError("rewire_prob must be in [0, 1]");
  const double beta = spec.rewire_prob;
  const std::uint64_t half_k = k / 2;
  const std::uint64_t chunk = effective_chunk(spec);

  // Edge slots in lattice order; slot s = u*half_k + (j-1) holds the edge
  // that started as (u, (u+j) mod n). Rewiring replaces slot values in
  // place, so the emitted order is canonical whatever the chunking.
  std::vector<Edge> slots;
  slots.reserve(n * half_k);
  std::unordered_set<std::uint64_t> present;
  present.reserve(n * half_k * 2);
  const auto key = [n](VertexId a, VertexId b) {
    return std::min(a, b) * n + std::max(a, b);
  };
  for (VertexId u = 0; u < n; ++u) {
    for (std::uint64_t j = 1; j <= half_k; ++j) {
      const VertexId v = (u + j) % n;
      slots.push_back({u, v});
      present.insert(key(u, v));
    }
  }

  for (VertexId chunk_begin = 0; chunk_begin < n; chunk_begin += chunk) {
    const VertexId chunk_end = std::min<VertexId>(chunk_begin + chunk, n);
    for (VertexId u = chunk_begin; u < chunk_end; ++u) {
      auto eng = vertex_engine(spec.seed, u);
      for (std::uint64_t j = 1; j <= half_k; ++j) {
        if (unit_double(eng) >= beta) continue;
        const std::size_t slot = u * half_k + (j - 1);
        const VertexId old_target = slots[slot].v;
        // Redraw until the target is non-self and non-duplicate, bounded by
        // n retries; on exhaustion the edge keeps its lattice target.
        for (std::uint64_t attempt = 0; attempt < n; ++attempt) {
          const VertexId w = random_below(eng, n);
          if (w == u || present.contains(key(u, w))) continue;
          present.erase(key(u, old_target));
          present.insert(key(u, w));
          slots[slot].v = w;
          break;
        }
      }
    }
  }

  EdgeList out;
  out.vertex_count = n;
  out.edges.reserve(slots.size());
  for (const Edge& e : slots) out.add(e.u, e.v);
  return out;
}

EdgeList generate(const GeneratorSpec& spec) {
  switch (spec.family) {
    case GraphFamily::star:
      return generate_star(spec.n);
    case GraphFamily::erdos_renyi:
      return generate_erdos_renyi(spec);
    case GraphFamily::small_world:
      return generate_small_world(spec);
  }
  throw InvalidParameterError("unknown graph family");
}

}  // namespace bfs1d
