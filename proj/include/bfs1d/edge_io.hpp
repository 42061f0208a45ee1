#pragma once

#include <filesystem>
#include <iosfwd>

#include "bfs1d/graph.hpp"

namespace bfs1d {

/// Text format: header "<vertex_count> <edge_count>", then one "<u> <v>"
/// line per edge with u < v, ASCII decimal. Lines starting with '#' are
/// comments and may appear anywhere.
void write_edge_list(const EdgeList& edges, std::ostream& out);
void write_edge_list(const EdgeList& edges, const std::filesystem::path& path);

EdgeList read_edge_list(std::istream& in);
EdgeList read_edge_list(const std::filesystem::path& path);

}  // namespace bfs1d
