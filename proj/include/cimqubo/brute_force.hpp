#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cimqubo/qubo.hpp"

namespace cimq {

inline constexpr std::size_t kDefaultBruteForceCap = 24;

struct BruteForceResult {
  BinaryVector minimizer;     // lexicographically smallest global minimizer
  double energy = 0.0;
  std::size_t multiplicity = 0;  // number of distinct minimizers
};

// Energies within this distance of the minimum count as ties.
double tie_tolerance(double min_energy);

// Exhaustive minimization. Enumeration is lexicographic over (x_0, ..., x_{n-1})
// and the first minimizer encountered is returned. Throws CapacityError when
// q.n() > cap.
BruteForceResult brute_force_minimize(const QuboProblem& q, std::size_t cap = kDefaultBruteForceCap);

namespace serial {
// Reference: straight lexicographic loop over energy(). Same contract.
BruteForceResult brute_force_minimize(const QuboProblem& q, std::size_t cap = kDefaultBruteForceCap);
}  // namespace serial

// The `index`-th vector in lexicographic order (x_0 is the most significant bit).
BinaryVector lexicographic_vector(std::uint64_t index, std::size_t n);

// Batch evaluation, OpenMP over the batch.
std::vector<double> energies(const QuboProblem& q, std::span<const BinaryVector> xs);

namespace serial {
std::vector<double> energies(const QuboProblem& q, std::span<const BinaryVector> xs);
}  // namespace serial

}  // namespace cimq
