#pragma once

#include <cstdint>
#include <string>

#include "cimqubo/qubo.hpp"
#include "cimqubo/rng.hpp"

namespace testing_support {

// Random QUBO with integer-valued coefficients in [-range, range]; each
// off-diagonal pair is present with probability `density`.
inline cimq::QuboProblem random_qubo(std::size_t n, double density, std::uint64_t seed, int range = 9) {
  cimq::Rng rng(seed);
  cimq::QuboProblem q(n);
  auto coef = [&] {
    long long v = 0;
    while (v == 0) v = static_cast<long long>(rng.below(2 * range + 1)) - range;
    return static_cast<double>(v);
  };
  q.add_constant(static_cast<double>(rng.below(7)) - 3.0);
  for (std::size_t i = 0; i < n; ++i)
    if (rng.uniform() < 0.7) q.add_linear(i, coef());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (rng.uniform() < density) q.add_quadratic(i, j, coef());
  return q;
}

inline cimq::BinaryVector bits_of(std::uint64_t mask, std::size_t n) {
  cimq::BinaryVector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<cimq::Bit>((mask >> i) & 1u);
  return x;
}

inline std::string data_path(const std::string& name) { return std::string(CIMQ_DATA_DIR) + "/" + name; }

}  // namespace testing_support
