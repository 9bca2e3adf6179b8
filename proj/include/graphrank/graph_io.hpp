#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "graphrank/graph.hpp"

namespace graphrank {

// Edge-list text format:
//
//   <n>
//   <u> <v>
//   ...
//
// Vertices are 1-based. Blank lines and lines starting with '#' are ignored
// on input. Output lists each edge once as "u v" with u < v, sorted.

/// Throws ParseError (with the 1-based line number) on malformed lines,
/// self-loops, repeated edges and out-of-range vertices.
Graph parse_graph(std::string_view text);

std::string serialize_graph(const Graph& graph);

/// Throws Error(ErrorKind::io) naming the path when the file is unreadable.
Graph read_graph_file(const std::filesystem::path& path);

}  // namespace graphrank
