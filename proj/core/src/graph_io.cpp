#include "mpllab/graph_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "mpllab/error.hpp"

namespace mpllab {

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

namespace {

template <typename T>
T parse_number(std::string_view token, std::size_t line) {
  T value{};
  const auto res = std::from_chars(token.data(), token.data() + token.size(), value);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size()) {
    throw Error(ErrorCode::ParseError,
                "line " + std::to_string(line) + ": bad number '" + std::string(token) + "'");
  }
  return value;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

WeightedGraph parse_edge_list(std::string_view text) {
  std::vector<Edge> edges;
  int max_id = -1;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    ++line_no;
    pos = end + 1;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto tokens = split_ws(line);
    if (tokens.empty()) continue;
    if (tokens.size() != 3) {
      throw Error(ErrorCode::ParseError,
                  "line " + std::to_string(line_no) + ": expected 'u v c', got " +
                      std::to_string(tokens.size()) + " fields");
    }
    Edge e{parse_number<int>(tokens[0], line_no), parse_number<int>(tokens[1], line_no),
           parse_number<double>(tokens[2], line_no)};
    if (e.u < 0 || e.v < 0) {
      throw Error(ErrorCode::VertexOutOfRange, "line " + std::to_string(line_no) + ": negative vertex id");
    }
    max_id = std::max({max_id, e.u, e.v});
    edges.push_back(e);
  }
  if (edges.empty()) throw Error(ErrorCode::ParseError, "edge list is empty");
  return WeightedGraph(max_id + 1, std::move(edges));
}

std::string format_edge_list(const WeightedGraph& g) {
  std::string out;
  for (const Edge& e : g.edges()) {
    out += std::to_string(e.u);
    out += ' ';
    out += std::to_string(e.v);
    out += ' ';
    out += format_double(e.c);
    out += '\n';
  }
  return out;
}

WeightedGraph graph_from_json(const nlohmann::json& j) {
  try {
    const int n = j.at("n").get<int>();
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 3) {
        throw Error(ErrorCode::ParseError, "each edge must be [u, v, c]");
      }
      edges.push_back({e[0].get<int>(), e[1].get<int>(), e[2].get<double>()});
    }
    return WeightedGraph(n, std::move(edges));
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::ParseError, ex.what());
  }
}

nlohmann::json graph_to_json(const WeightedGraph& g) {
  nlohmann::json edges = nlohmann::json::array();
  for (const Edge& e : g.edges()) edges.push_back({e.u, e.v, e.c});
  return {{"n", g.vertex_count()}, {"edges", std::move(edges)}};
}

WeightedGraph load_graph(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::exists(path, ec)) throw Error(ErrorCode::IoError, "graph file not found: '" + path.string() + "'");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open graph file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& ex) {
      throw Error(ErrorCode::ParseError, path.string() + ": " + ex.what());
    }
    return graph_from_json(j);
  }
  return parse_edge_list(text);
}

void save_graph(const WeightedGraph& g, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path.string() + "'");
  if (path.extension() == ".json") {
    out << graph_to_json(g).dump() << '\n';
  } else {
    out << format_edge_list(g);
  }
}

}  // namespace mpllab
