#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "cimqubo/qubo.hpp"

namespace cimq {

struct Edge {
  std::size_t u;
  std::size_t v;
  double weight;
};

// Undirected, loop-free. Parallel edges merge by summing weights.
class Graph {
 public:
  Graph() = default;
  explicit Graph(std::size_t n_vertices) : n_(n_vertices) {}

  void add_edge(std::size_t u, std::size_t v, double weight = 1.0);

  std::size_t n_vertices() const noexcept { return n_; }
  std::size_t n_edges() const noexcept { return edges_.size(); }
  bool has_edge(std::size_t u, std::size_t v) const;
  // Sorted by (u, v) with u < v.
  std::vector<Edge> edges() const;

 private:
  std::size_t n_ = 0;
  std::map<IndexPair, double> edges_;
};

// DIMACS .col: "c ..." comments, "p edge <n> <m>", "e <u> <v>" (1-based).
Graph read_dimacs(std::istream& is);
// Gset / rudy: "<n> <m>" then "<u> <v> <w>" per edge (1-based).
Graph read_gset(std::istream& is);
// Chooses the parser by extension: .col -> DIMACS, anything else -> Gset.
Graph read_graph_file(const std::string& path);

void write_dimacs(std::ostream& os, const Graph& g);

}  // namespace cimq
