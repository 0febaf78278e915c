#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "cimqubo/qubo.hpp"

namespace cimq {

// Row-major dense matrix.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  std::size_t nonzeros() const;
  double max_abs() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;
};

// x_h^T Q' x_v + linear + constant, with x_h = x[row_vars], x_v = x[col_vars].
struct CompressedQubo {
  std::vector<std::size_t> row_vars;
  std::vector<std::size_t> col_vars;
  Matrix qprime;
  std::vector<double> linear;
  double constant = 0.0;
  std::size_t source_n = 0;

  std::size_t p() const noexcept { return row_vars.size(); }
  std::size_t q() const noexcept { return col_vars.size(); }

  friend bool operator==(const CompressedQubo&, const CompressedQubo&) = default;
};

// Counts over the off-diagonal coefficient array (n x n before, p x q after).
// The *_with_diag variants also count nonzero linear terms as stored cells.
struct CompressionStats {
  std::size_t n = 0;
  std::size_t cells_before = 0;  // n^2
  std::size_t cells_after = 0;   // p*q
  std::size_t rows_removed = 0;
  std::size_t cols_removed = 0;
  double sparsity_before = 1.0;
  double sparsity_before_with_diag = 1.0;
  double sparsity_after = 0.0;
  double sparsity_reduction = 0.0;
  double sparsity_reduction_with_diag = 0.0;
  double chip_size_saving = 0.0;  // 1 - p*q / n^2
};

struct Compression {
  CompressedQubo compressed;
  CompressionStats stats;
};

// Greedy row/column folding:
//  1. order variables by ascending off-diagonal degree (ties: ascending index);
//  2. in that order, a row without fixed entries is removed: each entry moves
//     to its mirror slot and every nonzero of the matching column is fixed;
//  3. the same pass over columns, fixing the matching row;
//  4. surviving rows index x_h and surviving columns x_v.
// Each off-diagonal coefficient ends up in exactly one cell of Q'.
Compression compress(const QuboProblem& q);

double compressed_energy(const CompressedQubo& c, std::span<const Bit> x);

// Rebuilds an upper-triangular QUBO carrying the same coefficients.
QuboProblem decompress(const CompressedQubo& c);

struct SignSplit {
  Matrix plus;   // max(Q', 0)
  Matrix minus;  // max(-Q', 0)
};

SignSplit split_signs(const CompressedQubo& c);

// Positive and negative coefficients compressed as two separate matrices, as
// when Q+ and Q- are mapped onto their own crossbars. Before: both n x n
// upper triangles with the diagonal split by sign (2 n^2 cells). After: the
// cells of the two compressed matrices.
struct SignSplitStats {
  std::size_t cells_before = 0;
  std::size_t nonzeros_before = 0;
  std::size_t cells_after = 0;
  std::size_t nonzeros_after = 0;
  double sparsity_before = 1.0;
  double sparsity_after = 0.0;
  double sparsity_reduction = 0.0;
  double chip_size_saving = 0.0;
};

struct SignSplitCompression {
  Compression positive;
  Compression negative;  // magnitudes of the negative coefficients
  SignSplitStats stats;
};

SignSplitCompression compress_sign_split(const QuboProblem& q);

// Text format:
//   cqubo <n> <p> <q>
//   c <constant>
//   l <i> <value>           (nonzero linear terms)
//   r <row var> ...
//   v <col var> ...
//   m <q values>            (p lines)
void write_cqubo(std::ostream& os, const CompressedQubo& c);
CompressedQubo read_cqubo(std::istream& is);

}  // namespace cimq
