#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "mpllab/graph.hpp"

namespace mpllab {

// Edge-list text: one "u v c" line per edge, '#' starts a comment. The vertex
// count is one more than the largest id mentioned.
//
// JSON: {"n": int, "edges": [[u, v, c], ...]}.
//
// Conductances are written in shortest round-trip form, so reading what was
// written reproduces every double exactly.

WeightedGraph parse_edge_list(std::string_view text);
std::string format_edge_list(const WeightedGraph& g);

WeightedGraph graph_from_json(const nlohmann::json& j);
nlohmann::json graph_to_json(const WeightedGraph& g);

/// Reads either format; JSON is detected by a leading '{'.
WeightedGraph load_graph(const std::filesystem::path& path);
void save_graph(const WeightedGraph& g, const std::filesystem::path& path);

/// Shortest decimal string that parses back to exactly x.
std::string format_double(double x);

}  // namespace mpllab
