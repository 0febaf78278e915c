#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <utility>
#include <vector>

namespace cimq {

using Bit = std::uint8_t;
using BinaryVector = std::vector<Bit>;
using SpinVector = std::vector<int>;
using IndexPair = std::pair<std::size_t, std::size_t>;

// Canonical QUBO: constant + sum linear_i x_i + sum_{i<j} offdiag_ij x_i x_j.
// Diagonal entries of a matrix form live in `linear` since x_i^2 == x_i.
class QuboProblem {
 public:
  QuboProblem() = default;
  explicit QuboProblem(std::size_t n);

  // Construction. (i,j) and (j,i) accumulate into the same slot; i == j goes
  // to the linear term; slots that sum to zero are erased.
  void add_constant(double v);
  void add_linear(std::size_t i, double v);
  void add_quadratic(std::size_t i, std::size_t j, double v);

  std::size_t n() const noexcept { return linear_.size(); }
  double constant() const noexcept { return constant_; }
  const std::vector<double>& linear() const noexcept { return linear_; }
  const std::map<IndexPair, double>& offdiag() const noexcept { return offdiag_; }
  std::size_t nnz() const noexcept { return offdiag_.size(); }
  double quadratic(std::size_t i, std::size_t j) const;

  // Coefficient-wise sum; both operands must have the same n.
  QuboProblem& operator+=(const QuboProblem& other);

  friend bool operator==(const QuboProblem&, const QuboProblem&) = default;

 private:
  std::vector<double> linear_;
  std::map<IndexPair, double> offdiag_;
  double constant_ = 0.0;
};

// Spin model: constant + sum h_i s_i + sum_{i<j} J_ij s_i s_j, s_i in {-1,+1}.
class IsingModel {
 public:
  IsingModel() = default;
  explicit IsingModel(std::size_t n);

  void add_constant(double v);
  void add_field(std::size_t i, double v);
  void add_coupling(std::size_t i, std::size_t j, double v);

  std::size_t n() const noexcept { return fields_.size(); }
  double constant() const noexcept { return constant_; }
  const std::vector<double>& fields() const noexcept { return fields_; }
  const std::map<IndexPair, double>& couplings() const noexcept { return couplings_; }

 private:
  std::vector<double> fields_;
  std::map<IndexPair, double> couplings_;
  double constant_ = 0.0;
};

// Throws DimensionError if x.size() != n or an entry is not 0/1.
void check_binary(std::span<const Bit> x, std::size_t n);

double energy(const QuboProblem& q, std::span<const Bit> x);
double ising_energy(const IsingModel& m, std::span<const int> spins);

// s_i = 1 - 2 x_i.
QuboProblem ising_to_qubo(const IsingModel& m);
IsingModel qubo_to_ising(const QuboProblem& q);
SpinVector to_spins(std::span<const Bit> x);

// Fraction of zero entries of the upper triangle including the diagonal.
double sparsity(const QuboProblem& q);

// Text format:
//   qubo <n> <nnz>
//   c <constant>
//   l <i> <value>        (nonzero linear terms)
//   q <i> <j> <value>    (i < j)
void write_qubo(std::ostream& os, const QuboProblem& q);
QuboProblem read_qubo(std::istream& is);

}  // namespace cimq
