#include "cimqubo/graph.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "cimqubo/errors.hpp"
#include "cimqubo/text.hpp"

namespace cimq {

void Graph::add_edge(std::size_t u, std::size_t v, double weight) {
  if (u >= n_ || v >= n_) throw DimensionError("edge endpoint out of range");
  if (u == v) throw DimensionError("self-loop on vertex " + std::to_string(u));
  if (u > v) std::swap(u, v);
  edges_[{u, v}] += weight;
}

bool Graph::has_edge(std::size_t u, std::size_t v) const {
  if (u > v) std::swap(u, v);
  return edges_.count({u, v}) != 0;
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(edges_.size());
  for (const auto& [key, w] : edges_) out.push_back({key.first, key.second, w});
  return out;
}

namespace {

std::size_t vertex(std::string_view tok, std::size_t n, std::size_t line_no) {
  const long long v = text::parse_int(tok, line_no);
  if (v < 1 || static_cast<std::size_t>(v) > n)
    throw ParseError("vertex " + std::string(tok) + " outside 1.." + std::to_string(n), line_no);
  return static_cast<std::size_t>(v - 1);
}

void add_parsed_edge(Graph& g, std::size_t u, std::size_t v, double w, std::size_t line_no) {
  if (u == v) throw ParseError("self-loop", line_no);
  g.add_edge(u, v, w);
}

}  // namespace

Graph read_dimacs(std::istream& is) {
  std::string line;
  std::size_t line_no = 0;
  Graph g;
  bool have_header = false;
  while (std::getline(is, line)) {
    ++line_no;
    auto tok = text::split_ws(line);
    if (tok.empty() || tok[0] == "c") continue;
    if (tok[0] == "p") {
      if (have_header) throw ParseError("duplicate problem line", line_no);
      if (tok.size() != 4 || (tok[1] != "edge" && tok[1] != "col"))
        throw ParseError("expected 'p edge <n> <m>'", line_no);
      const long long n = text::parse_int(tok[2], line_no);
      if (n < 0) throw ParseError("negative vertex count", line_no);
      g = Graph(static_cast<std::size_t>(n));
      have_header = true;
    } else if (tok[0] == "e") {
      if (!have_header) throw ParseError("edge before problem line", line_no);
      if (tok.size() != 3) throw ParseError("expected 'e <u> <v>'", line_no);
      const auto u = vertex(tok[1], g.n_vertices(), line_no);
      const auto v = vertex(tok[2], g.n_vertices(), line_no);
      // Coloring files often list both directions; keep unit weight.
      if (u == v) throw ParseError("self-loop", line_no);
      if (!g.has_edge(u, v)) add_parsed_edge(g, u, v, 1.0, line_no);
    } else {
      throw ParseError("unrecognized record '" + line + "'", line_no);
    }
  }
  if (!have_header) throw ParseError("missing 'p edge' line", line_no);
  return g;
}

Graph read_gset(std::istream& is) {
  std::string line;
  std::size_t line_no = 0;
  Graph g;
  bool have_header = false;
  long long declared = 0, seen = 0;
  while (std::getline(is, line)) {
    ++line_no;
    auto tok = text::split_ws(line);
    if (tok.empty() || tok[0].front() == '#') continue;
    if (!have_header) {
      if (tok.size() != 2) throw ParseError("expected '<n> <m>'", line_no);
      const long long n = text::parse_int(tok[0], line_no);
      declared = text::parse_int(tok[1], line_no);
      if (n < 0 || declared < 0) throw ParseError("negative size in header", line_no);
      g = Graph(static_cast<std::size_t>(n));
      have_header = true;
      continue;
    }
    if (tok.size() != 3 && tok.size() != 2) throw ParseError("expected '<u> <v> <w>'", line_no);
    const auto u = vertex(tok[0], g.n_vertices(), line_no);
    const auto v = vertex(tok[1], g.n_vertices(), line_no);
    const double w = tok.size() == 3 ? text::parse_double(tok[2], line_no) : 1.0;
    add_parsed_edge(g, u, v, w, line_no);
    ++seen;
  }
  if (!have_header) throw ParseError("missing '<n> <m>' header", line_no);
  if (seen != declared)
    throw ParseError("header declares " + std::to_string(declared) + " edges, found " +
                         std::to_string(seen),
                     line_no);
  return g;
}

Graph read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'", 0);
  const bool dimacs = path.size() >= 4 && path.compare(path.size() - 4, 4, ".col") == 0;
  return dimacs ? read_dimacs(in) : read_gset(in);
}

void write_dimacs(std::ostream& os, const Graph& g) {
  os << "p edge " << g.n_vertices() << ' ' << g.n_edges() << '\n';
  for (const auto& e : g.edges()) os << "e " << e.u + 1 << ' ' << e.v + 1 << '\n';
}

}  // namespace cimq
