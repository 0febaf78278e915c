#include <algorithm>
#include <functional>
#include <set>

#include "cimqubo/brute_force.hpp"
#include "cimqubo/converters.hpp"
#include "cimqubo/errors.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace cimq;
using testing_support::bits_of;

namespace {

Graph random_graph(std::size_t n, double p, std::uint64_t seed, bool weighted) {
  Rng rng(seed);
  Graph g(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (rng.uniform() < p) g.add_edge(i, j, weighted ? static_cast<double>(rng.below(5)) - 2.0 + 0.5 : 1.0);
  return g;
}

// Maximum cut by direct enumeration of vertex bipartitions.
double exhaustive_max_cut(const Graph& g) {
  const auto edges = g.edges();
  double best = 0.0;
  for (std::uint64_t side = 0; side < (1ull << g.n_vertices()); ++side) {
    double cut = 0.0;
    for (const auto& e : edges)
      if (((side >> e.u) ^ (side >> e.v)) & 1u) cut += e.weight;
    best = std::max(best, cut);
  }
  return best;
}

// Counts proper K-colorings by backtracking (stops early when limit > 0).
std::size_t count_colorings(const Graph& g, std::size_t k, std::size_t limit = 0) {
  const std::size_t n = g.n_vertices();
  std::vector<std::size_t> color(n, 0);
  std::size_t found = 0;
  std::function<bool(std::size_t)> place = [&](std::size_t v) {
    if (v == n) {
      ++found;
      return limit && found >= limit;
    }
    for (std::size_t c = 0; c < k; ++c) {
      bool ok = true;
      for (std::size_t u = 0; u < v && ok; ++u)
        if (color[u] == c && g.has_edge(u, v)) ok = false;
      if (!ok) continue;
      color[v] = c;
      if (place(v + 1)) return true;
    }
    return false;
  };
  place(0);
  return found;
}

std::set<std::pair<std::uint64_t, std::uint64_t>> factor_pairs(std::uint64_t n, std::size_t k, std::size_t l) {
  std::set<std::pair<std::uint64_t, std::uint64_t>> out;
  for (std::uint64_t p = 1ull << (k + 1); p < (1ull << (k + 2)); ++p) {
    if (!(p & 1u) || n % p) continue;
    const std::uint64_t q = n / p;
    if ((q & 1u) && q >= (1ull << (l + 1)) && q < (1ull << (l + 2))) out.insert({p, q});
  }
  return out;
}

}  // namespace

TEST_CASE("Max-Cut QUBO minimum equals the exhaustive maximum cut") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const std::size_t n = 3 + seed % 10;
    const Graph g = random_graph(n, 0.5, seed, seed % 2 == 0);
    const QuboProblem q = maxcut_to_qubo(g);
    const auto bf = brute_force_minimize(q);
    const double best = exhaustive_max_cut(g);
    CHECK(-bf.energy == doctest::Approx(best));
    CHECK(cut_value(g, bf.minimizer) == doctest::Approx(best));
  }
}

TEST_CASE("Max-Cut triangle") {
  Graph g(3);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  g.add_edge(0, 2);
  const QuboProblem q = maxcut_to_qubo(g);
  CHECK(q.n() == 3);
  const auto bf = brute_force_minimize(q);
  CHECK(bf.energy == -2.0);
  CHECK(bf.multiplicity == 6);
  const Bipartition b = decode_cut(bf.minimizer);
  CHECK(b.side_a.size() + b.side_b.size() == 3);
}

TEST_CASE("coloring encoding layout and penalty validation") {
  const Graph g = read_graph_file(testing_support::data_path("toy7.col"));
  const auto cq = coloring_to_qubo(g, 3);
  CHECK(cq.qubo.n() == 21);
  CHECK(cq.encoding.var_index(2, 1) == 7);
  CHECK(cq.qubo.constant() == 7.0);
  for (double v : cq.qubo.linear()) CHECK(v == -1.0);
  for (const auto& [ij, v] : cq.qubo.offdiag()) CHECK((v == 1.0 || v == 2.0));
  CHECK_THROWS_AS(coloring_to_qubo(g, 0), ConfigError);
  CHECK_THROWS_AS(coloring_to_qubo(g, 3, 0.0), ConfigError);
}

TEST_CASE("coloring single edge with two colors") {
  Graph g(2);
  g.add_edge(0, 1);
  const auto cq = coloring_to_qubo(g, 2);
  const auto bf = brute_force_minimize(cq.qubo);
  CHECK(bf.energy == 0.0);
  CHECK(bf.multiplicity == 2);
}

TEST_CASE("coloring ground states are exactly the proper colorings") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const std::size_t n = 3 + seed % 4;       // 3..6 vertices
    const std::size_t k = 2 + seed % 2;       // 2..3 colors, n*k <= 18
    const Graph g = random_graph(n, 0.55, 1000 + seed, false);
    const auto cq = coloring_to_qubo(g, k);
    const auto bf = brute_force_minimize(cq.qubo);
    const std::size_t proper = count_colorings(g, k);
    CHECK((bf.energy == 0.0) == (proper > 0));
    if (proper > 0) {
      CHECK(bf.multiplicity == proper);
      CHECK(decode_coloring(cq.encoding, bf.minimizer).valid);
    } else {
      CHECK(bf.energy >= 1.0);
      CHECK_FALSE(decode_coloring(cq.encoding, bf.minimizer).valid);
    }
  }
}

TEST_CASE("coloring decoder flags each error kind") {
  Graph g(3);
  g.add_edge(0, 1);
  const auto cq = coloring_to_qubo(g, 2);
  // vertex 0: colors {0,1}; vertex 1: color 0; vertex 2: none
  const BinaryVector x{1, 1, 1, 0, 0, 0};
  const ColoringReport r = decode_coloring(cq.encoding, x);
  CHECK_FALSE(r.valid);
  CHECK(r.multicolored == std::vector<std::size_t>{0});
  CHECK(r.uncolored == std::vector<std::size_t>{2});
  REQUIRE(r.conflicts.size() == 1);
  CHECK(r.conflicts[0] == IndexPair{0, 1});
  CHECK(decode_coloring(cq.encoding, BinaryVector{1, 0, 0, 1, 1, 0}).valid);
}

TEST_CASE("factorization encodings: sizes and bit-length rules") {
  const FactorizationEncoding e35(35, 1, 1);
  CHECK(e35.n_variables() == 5);
  CHECK(suggest_bit_lengths(35) == IndexPair{1, 1});
  CHECK(suggest_bit_lengths(323) == IndexPair{3, 3});
  CHECK(suggest_bit_lengths(9) == IndexPair{0, 0});
  const FactorizationEncoding e323(323, 3, 3);
  CHECK(e323.n_variables() == 26);
  CHECK_THROWS_AS(FactorizationEncoding(34, 1, 1), UnsupportedInstance);
  CHECK_THROWS_AS(FactorizationEncoding(7, 0, 0), UnsupportedInstance);
  CHECK_THROWS_AS(FactorizationEncoding(35, 3, 3), UnsupportedInstance);
}

TEST_CASE("factorization ground states decode to exactly the factor pairs") {
  struct Case {
    std::uint64_t n;
    std::size_t k, l;
  };
  const std::vector<Case> cases = {{9, 0, 0},  {15, 0, 1}, {15, 1, 0}, {21, 0, 1}, {25, 1, 1}, {35, 1, 1},
                                   {37, 1, 1}, {49, 1, 1}, {39, 0, 2}, {55, 1, 2}, {77, 1, 2}, {91, 1, 2},
                                   {143, 2, 2}, {45, 1, 1}};
  for (const auto& c : cases) {
    CAPTURE(c.n);
    const FactorizationEncoding enc(c.n, c.k, c.l);
    REQUIRE(enc.n_variables() <= 20);
    const QuboProblem q = pfp_to_qubo(enc);
    const auto expected = factor_pairs(c.n, c.k, c.l);
    std::set<std::pair<std::uint64_t, std::uint64_t>> got;
    double min_e = 1e300;
    for (std::uint64_t i = 0; i < (1ull << enc.n_variables()); ++i) {
      const BinaryVector x = lexicographic_vector(i, enc.n_variables());
      const double e = energy(q, x);
      CHECK(e >= -1e-9);
      min_e = std::min(min_e, e);
      if (std::abs(e) <= 1e-9) {
        const FactorDecode d = decode_factors(enc, x);
        CHECK(d.consistent);
        got.insert({d.p, d.q});
      }
    }
    CHECK(got == expected);
    CHECK((min_e <= 1e-9) == !expected.empty());
    for (const auto& [p, qv] : expected) CHECK(energy(q, encode_factors(enc, p, qv)) == 0.0);
  }
}

TEST_CASE("factorization with an explicit reduction penalty keeps the zero set") {
  const FactorizationEncoding enc(35, 1, 1);
  for (double lambda : {0.5, 1.0, 40.0}) {
    const QuboProblem q = pfp_to_qubo(enc, lambda);
    std::size_t zeros = 0;
    for (std::uint64_t i = 0; i < 32; ++i) {
      const auto x = lexicographic_vector(i, 5);
      if (std::abs(energy(q, x)) <= 1e-9) {
        ++zeros;
        CHECK(decode_factors(enc, x).consistent);
      }
    }
    CHECK(zeros == 2);
  }
}

TEST_CASE("decode_factors notices inconsistent auxiliary bits") {
  const FactorizationEncoding enc(35, 1, 1);
  BinaryVector x = encode_factors(enc, 5, 7);
  CHECK(decode_factors(enc, x).consistent);
  x[enc.z_index(1, 1)] ^= 1;
  const FactorDecode d = decode_factors(enc, x);
  CHECK(d.p == 5);
  CHECK(d.q == 7);
  CHECK_FALSE(d.consistent);
  CHECK_THROWS_AS(encode_factors(enc, 9, 7), EncodingError);
}

TEST_CASE("reference two-block formulation of 35") {
  const QuboProblem q = reference_pfp35_block_qubo();
  CHECK(q.n() == 4);
  CHECK(q.quadratic(0, 2) == -6.0);
  CHECK(q.quadratic(1, 2) == -6.0);
  CHECK(q.quadratic(2, 3) == -16.0);
  CHECK(q.quadratic(0, 3) == 4.0);
  CHECK(q.quadratic(1, 3) == 4.0);
  CHECK(q.nnz() == 5);
  // (p, q, c, t) = (0, 1, 1, 0) encodes 5 x 7 and (1, 0, 1, 0) encodes 7 x 5.
  CHECK(energy(q, BinaryVector{0, 1, 1, 0}) == 0.0);
  CHECK(energy(q, BinaryVector{1, 0, 1, 0}) == 0.0);
  // t is not tied to p*q, so the formulation is not a faithful encoding.
  CHECK(energy(q, BinaryVector{1, 1, 1, 0}) == -2.0);
}
