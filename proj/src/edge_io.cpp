#include "bfs1d/edge_io.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>

#include "bfs1d/error.hpp"

namespace bfs1d {

namespace {

bool skippable(std::string_view line) {
  return line.empty() || line[0] == '#';
}

// Parses exactly two decimal u64 fields separated by whitespace.
bool parse_two(std::string_view line, std::uint64_t& a, std::uint64_t& b) {
  const char* p = line.data();
  const char* end = p + line.size();
  while (p < end && (*p == ' ' || *p == '\t')) ++p;
  auto r1 = std::from_chars(p, end, a);
  if (r1.ec != std::errc{}) return false;
  p = r1.ptr;
  while (p < end && (*p == ' ' || *p == '\t')) ++p;
  auto r2 = std::from_chars(p, end, b);
  if (r2.ec != std::errc{}) return false;
  p = r2.ptr;
  while (p < end && (*p == ' ' || *p == '\t' || *p == '\r')) ++p;
  return p == end;
}

}  // namespace

void write_edge_list(const EdgeList& edges, std::ostream& out) {
  out << edges.vertex_count << ' ' << edges.edges.size() << '\n';
  for (const Edge& e : edges.edges) out << e.u << ' ' << e.v << '\n';
  if (!out) throw IoError("failed writing edge list stream");
}

void write_edge_list(const EdgeList& edges, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_edge_list(edges, out);
}

EdgeList read_edge_list(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;

  EdgeList out;
  std::uint64_t edge_count = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (skippable(line)) continue;
    if (!parse_two(line, out.vertex_count, edge_count))
      throw ParseError("malformed header, expected '<vertices> <edges>'",
                       line_no);
    have_header = true;
    break;
  }
  if (!have_header) throw ParseError("missing header", line_no + 1);

  out.edges.reserve(edge_count);
  while (std::getline(in, line)) {
    ++line_no;
    if (skippable(line)) continue;
    std::uint64_t u = 0, v = 0;
    if (!parse_two(line, u, v))
      throw ParseError("malformed edge, expected '<u> <v>'", line_no);
    if (u >= out.vertex_count || v >= out.vertex_count)
      throw ParseError("vertex id out of range [0, " +
                           std::to_string(out.vertex_count) + ")",
                       line_no);
    if (u >= v) throw ParseError("edge endpoints must satisfy u < v", line_no);
    out.edges.push_back({u, v});
  }
  if (out.edges.size() != edge_count)
    throw ParseError("header promised " + std::to_string(edge_count) +
                         " edges, file holds " + std::to_string(out.edges.size()),
                     line_no);
  return out;
}

EdgeList read_edge_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  return read_edge_list(in);
}

}  // namespace bfs1d
