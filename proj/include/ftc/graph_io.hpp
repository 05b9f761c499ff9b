#ifndef FTC_GRAPH_IO_HPP
#define FTC_GRAPH_IO_HPP

#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ftc/errors.hpp"
#include "ftc/graph.hpp"

namespace ftc {

/// Contents of an edge-list file: declared vertex count and the "e" lines in file
/// order, converted to 0-based ids. Order matters for oriented factor files.
struct EdgeListFile {
  int n = 0;
  std::vector<std::pair<Vertex, Vertex>> arcs;
};

/// Parses the line format
///   c <comment>
///   p <n> <m>
///   e <u> <v>        (1-indexed, m lines)
/// Blank lines are ignored. Loops and out-of-range ids are rejected here;
/// duplicate detection is left to the consumer.
inline EdgeListFile parse_edge_list(std::string_view text) {
  EdgeListFile out;
  bool have_header = false;
  long declared_m = -1;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    auto fail = [&](const std::string& why) {
      throw PreconditionError("line " + std::to_string(lineno) + ": " + why);
    };
    if (tag == "c") continue;
    if (tag == "p") {
      if (have_header) fail("second header line");
      long n = -1, m = -1;
      if (!(ls >> n >> m) || n < 0 || m < 0) fail("malformed header, expected 'p <n> <m>'");
      std::string extra;
      if (ls >> extra) fail("trailing tokens after header");
      out.n = static_cast<int>(n);
      declared_m = m;
      have_header = true;
      continue;
    }
    if (tag == "e") {
      if (!have_header) fail("edge before header");
      long u = 0, v = 0;
      if (!(ls >> u >> v)) fail("malformed edge line, expected 'e <u> <v>'");
      std::string extra;
      if (ls >> extra) fail("trailing tokens after edge");
      if (u < 1 || v < 1 || u > out.n || v > out.n)
        fail("vertex id out of range: " + std::to_string(u) + " " + std::to_string(v));
      if (u == v) fail("loop at vertex " + std::to_string(u));
      out.arcs.emplace_back(static_cast<Vertex>(u - 1), static_cast<Vertex>(v - 1));
      continue;
    }
    fail("unknown line tag '" + tag + "'");
  }
  if (!have_header) throw PreconditionError("missing 'p <n> <m>' header");
  if (static_cast<long>(out.arcs.size()) != declared_m)
    throw PreconditionError("header declares " + std::to_string(declared_m) + " edges, found " +
                            std::to_string(out.arcs.size()));
  return out;
}

inline Graph parse_graph(std::string_view text) {
  auto file = parse_edge_list(text);
  return Graph(file.n, file.arcs);
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PreconditionError("cannot read file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Graph load_graph(const std::string& path) { return parse_graph(read_text_file(path)); }

/// Writes arcs in the given order (1-indexed).
inline std::string format_edge_list(int n, const std::vector<std::pair<Vertex, Vertex>>& arcs,
                                    std::string_view comment = {}) {
  std::ostringstream out;
  if (!comment.empty()) out << "c " << comment << '\n';
  out << "p " << n << ' ' << arcs.size() << '\n';
  for (auto [u, v] : arcs) out << "e " << (u + 1) << ' ' << (v + 1) << '\n';
  return out.str();
}

/// Canonical writer: edges in sorted order, smaller endpoint first.
inline std::string format_graph(const Graph& g, std::string_view comment = {}) {
  std::vector<std::pair<Vertex, Vertex>> arcs;
  arcs.reserve(g.num_edges());
  for (const auto& e : g.edges()) arcs.emplace_back(e.u, e.v);
  return format_edge_list(g.num_vertices(), arcs, comment);
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw PreconditionError("cannot write file: " + path);
  out << text;
}

}  // namespace ftc

#endif  // FTC_GRAPH_IO_HPP
