#include "graphrank/graph_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

#include "graphrank/error.hpp"

namespace graphrank {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// Splits on spaces/tabs and parses unsigned integers; false on any junk.
bool parse_numbers(std::string_view line, std::vector<std::uint64_t>& out) {
  out.clear();
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
    if (pos == line.size()) break;
    std::uint64_t value = 0;
    auto [ptr, ec] =
        std::from_chars(line.data() + pos, line.data() + line.size(), value);
    if (ec != std::errc{}) return false;
    pos = static_cast<std::size_t>(ptr - line.data());
    if (pos < line.size() && line[pos] != ' ' && line[pos] != '\t') return false;
    out.push_back(value);
  }
  return true;
}

}  // namespace

Graph parse_graph(std::string_view text) {
  std::size_t line_no = 0;
  std::size_t start = 0;
  bool have_n = false;
  std::uint64_t n = 0;
  std::vector<Edge> edges;
  std::set<Edge> seen;
  std::vector<std::uint64_t> numbers;

  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = trim(text.substr(start, end - start));
    ++line_no;
    start = end + 1;
    if (line.empty() || line.front() == '#') {
      if (end == text.size()) break;
      continue;
    }
    if (!parse_numbers(line, numbers)) {
      throw ParseError(line_no, "expected non-negative integers, got '" +
                                    std::string(line) + "'");
    }
    if (!have_n) {
      if (numbers.size() != 1) {
        throw ParseError(line_no, "first line must hold the vertex count");
      }
      n = numbers[0];
      have_n = true;
    } else {
      if (numbers.size() != 2) {
        throw ParseError(line_no, "edge line must hold exactly two vertices");
      }
      const auto u = numbers[0];
      const auto v = numbers[1];
      if (u < 1 || u > n || v < 1 || v > n) {
        throw ParseError(line_no, "vertex out of range 1.." + std::to_string(n));
      }
      if (u == v) {
        throw ParseError(line_no, "self-loop at vertex " + std::to_string(u));
      }
      Edge e{static_cast<Vertex>(std::min(u, v) - 1),
             static_cast<Vertex>(std::max(u, v) - 1)};
      if (!seen.insert(e).second) {
        throw ParseError(line_no, "duplicate edge " + std::to_string(u) + " " +
                                      std::to_string(v));
      }
      edges.push_back(e);
    }
    if (end == text.size()) break;
  }
  if (!have_n) throw ParseError(line_no, "missing vertex count");
  return Graph::from_edges(n, edges);
}

std::string serialize_graph(const Graph& graph) {
  std::ostringstream out;
  out << graph.order() << '\n';
  for (auto [u, v] : graph.edges()) out << (u + 1) << ' ' << (v + 1) << '\n';
  return out.str();
}

Graph read_graph_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::io, "cannot read graph file " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_graph(buffer.str());
}

}  // namespace graphrank
