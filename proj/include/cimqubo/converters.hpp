#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "cimqubo/graph.hpp"
#include "cimqubo/qubo.hpp"

namespace cimq {

// ---- Max-Cut ------------------------------------------------------------

struct Bipartition {
  std::vector<std::size_t> side_a;  // x_i == 1
  std::vector<std::size_t> side_b;  // x_i == 0
};

// Per edge (i,j,w): +2w x_i x_j - w x_i - w x_j. Minimum = -(max cut weight).
QuboProblem maxcut_to_qubo(const Graph& g);
Bipartition decode_cut(std::span<const Bit> x);
double cut_value(const Graph& g, std::span<const Bit> x);

// ---- K-coloring ---------------------------------------------------------

class ColoringEncoding {
 public:
  ColoringEncoding() = default;
  ColoringEncoding(const Graph& g, std::size_t colors);

  std::size_t n_vertices() const noexcept { return n_vertices_; }
  std::size_t colors() const noexcept { return colors_; }
  std::size_t n_variables() const noexcept { return n_vertices_ * colors_; }
  std::size_t var_index(std::size_t vertex, std::size_t color) const { return vertex * colors_ + color; }
  // Unweighted, deduplicated edge list of the source graph.
  const std::vector<IndexPair>& edges() const noexcept { return edges_; }

 private:
  std::size_t n_vertices_ = 0;
  std::size_t colors_ = 0;
  std::vector<IndexPair> edges_;
};

struct ColoringQubo {
  QuboProblem qubo;
  ColoringEncoding encoding;
};

// penalty * sum_i (sum_p x_ip - 1)^2 + sum_{(m,n) in E} sum_p x_mp x_np.
// Minimum 0 iff the graph is K-colorable. Edge weights are ignored.
ColoringQubo coloring_to_qubo(const Graph& g, std::size_t colors, double penalty = 1.0);

struct ColoringReport {
  std::vector<std::vector<std::size_t>> colors;  // per vertex, colors with x_ip = 1
  std::vector<std::size_t> uncolored;
  std::vector<std::size_t> multicolored;
  std::vector<IndexPair> conflicts;  // edges whose endpoints share a color
  bool valid = false;
};

ColoringReport decode_coloring(const ColoringEncoding& enc, std::span<const Bit> x);

// ---- Prime factorization -------------------------------------------------
//
// N = P * Q with P = (1 p_k ... p_1 1)_2 and Q = (1 q_l ... q_1 1)_2. One
// equation per binary column of the multiplication table:
//   sum(partial products in column s) + carry_{s-1} = N_s + 2 carry_s,
// and the top column absorbs the remaining high bits of N. Products of two
// free bits are replaced by auxiliary bits z_ab, tied to p_a q_b by a
// Rosenberg penalty. Variable layout: p bits, q bits, z bits, carry bits.

class FactorizationEncoding {
 public:
  FactorizationEncoding() = default;
  // Throws UnsupportedInstance for even N, N < 9, or bit lengths that cannot
  // multiply to the bit length of N.
  FactorizationEncoding(std::uint64_t n, std::size_t k, std::size_t l);

  std::uint64_t target() const noexcept { return n_; }
  std::size_t k() const noexcept { return k_; }
  std::size_t l() const noexcept { return l_; }
  std::size_t n_variables() const noexcept { return n_vars_; }

  // a in 1..k, b in 1..l
  std::size_t p_index(std::size_t a) const { return a - 1; }
  std::size_t q_index(std::size_t b) const { return k_ + b - 1; }
  std::size_t z_index(std::size_t a, std::size_t b) const { return k_ + l_ + (a - 1) * l_ + (b - 1); }
  std::size_t carry_begin() const noexcept { return k_ + l_ + k_ * l_; }

  // Index of the top column S = k + l + 2.
  std::size_t top_column() const noexcept { return k_ + l_ + 2; }
  // Carry-out bits of column s (LSB first); empty when the carry is always 0.
  const std::vector<std::size_t>& carry_bits(std::size_t column) const { return carries_.at(column); }

 private:
  std::uint64_t n_ = 0;
  std::size_t k_ = 0;
  std::size_t l_ = 0;
  std::size_t n_vars_ = 0;
  std::vector<std::vector<std::size_t>> carries_;  // per column 0..S
};

// Equal-length factors: ceil(bitlen(N)/2) bits each, so k = l = that - 2.
IndexPair suggest_bit_lengths(std::uint64_t n);

// reduction_penalty <= 0 selects 2 * max |coefficient| of the unreduced objective.
QuboProblem pfp_to_qubo(const FactorizationEncoding& enc, double reduction_penalty = 0.0);

struct FactorDecode {
  std::uint64_t p = 0;
  std::uint64_t q = 0;
  bool consistent = false;  // P*Q == N and every auxiliary/carry bit matches
};

FactorDecode decode_factors(const FactorizationEncoding& enc, std::span<const Bit> x);

// Assignment encoding a given factor pair, with consistent z and carry bits.
BinaryVector encode_factors(const FactorizationEncoding& enc, std::uint64_t p, std::uint64_t q);

// Four-variable two-block formulation of 35 = 5 x 7 over (p_1, q_1, c, t):
// (p+q+2t+3-4c)^2 + (p+q+c-2)^2 with every p*q replaced by t and no penalty
// tying t to p*q. Its negative part is {x1x3: 6, x2x3: 6, x3x4: 16} and its
// positive part {x1x4: 4, x2x4: 4}; used to check compression bookkeeping.
// Not a faithful encoding: (1,1,1,0) evaluates to -2.
QuboProblem reference_pfp35_block_qubo();

}  // namespace cimq
