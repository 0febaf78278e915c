#include <limits>

#include "cimqubo/brute_force.hpp"
#include "cimqubo/errors.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace cimq;
using testing_support::random_qubo;

TEST_CASE("lexicographic order puts x0 in the most significant position") {
  CHECK(lexicographic_vector(0, 3) == BinaryVector{0, 0, 0});
  CHECK(lexicographic_vector(1, 3) == BinaryVector{0, 0, 1});
  CHECK(lexicographic_vector(4, 3) == BinaryVector{1, 0, 0});
}

TEST_CASE("brute force on small hand instances") {
  QuboProblem q(2);
  q.add_linear(0, -1);
  q.add_linear(1, -1);
  q.add_quadratic(0, 1, 3);
  // Minima at (1,0) and (0,1): E = -1; lexicographically first is (0,1).
  const auto r = brute_force_minimize(q);
  CHECK(r.energy == -1.0);
  CHECK(r.multiplicity == 2);
  CHECK(r.minimizer == BinaryVector{0, 1});
  CHECK(serial::brute_force_minimize(q).minimizer == r.minimizer);

  const QuboProblem flat(3);
  const auto z = brute_force_minimize(flat);
  CHECK(z.multiplicity == 8);
  CHECK(z.minimizer == BinaryVector{0, 0, 0});
}

TEST_CASE("parallel brute force matches the serial reference") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const std::size_t n = 1 + seed % 16;
    const QuboProblem q = random_qubo(n, 0.5, seed, 3);  // small range -> many ties
    const auto a = brute_force_minimize(q);
    const auto b = serial::brute_force_minimize(q);
    CHECK(a.energy == b.energy);
    CHECK(a.minimizer == b.minimizer);
    CHECK(a.multiplicity == b.multiplicity);
    CHECK(energy(q, a.minimizer) == a.energy);
  }
}

TEST_CASE("brute force minimum is a lower bound on every assignment") {
  const QuboProblem q = random_qubo(10, 0.6, 5);
  const auto r = brute_force_minimize(q);
  double best = std::numeric_limits<double>::infinity();
  for (std::uint64_t i = 0; i < 1024; ++i) best = std::min(best, energy(q, lexicographic_vector(i, 10)));
  CHECK(best == r.energy);
}

TEST_CASE("batch energies agree between serial and parallel") {
  const QuboProblem q = random_qubo(12, 0.3, 9);
  std::vector<BinaryVector> xs;
  for (std::uint64_t i = 0; i < 300; ++i) xs.push_back(lexicographic_vector(i * 13, 12));
  const auto a = energies(q, xs);
  const auto b = serial::energies(q, xs);
  REQUIRE(a.size() == xs.size());
  CHECK(a == b);
}

TEST_CASE("brute force capacity limit") {
  CHECK_THROWS_AS(brute_force_minimize(QuboProblem(25)), CapacityError);
  CHECK_THROWS_AS(brute_force_minimize(QuboProblem(6), 5), CapacityError);
  CHECK_NOTHROW(brute_force_minimize(QuboProblem(0)));
}
