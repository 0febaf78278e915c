#include "cimqubo/brute_force.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "cimqubo/errors.hpp"

namespace cimq {

namespace {

void check_cap(const QuboProblem& q, std::size_t cap) {
  if (q.n() > cap || q.n() > 62)
    throw CapacityError("brute force over n=" + std::to_string(q.n()) + " exceeds cap " +
                        std::to_string(cap));
}

// Dense symmetric coupling rows plus linear terms, indexed by bit position in
// the enumeration counter (bit n-1-i holds x_i).
struct DenseForm {
  std::size_t n;
  std::vector<double> coupling;  // n*n, symmetric, zero diagonal, counter-bit indexed
  std::vector<double> linear;    // counter-bit indexed
  double constant;

  explicit DenseForm(const QuboProblem& q)
      : n(q.n()), coupling(q.n() * q.n(), 0.0), linear(q.n(), 0.0), constant(q.constant()) {
    auto bit = [&](std::size_t var) { return n - 1 - var; };
    for (std::size_t i = 0; i < n; ++i) linear[bit(i)] = q.linear()[i];
    for (const auto& [key, v] : q.offdiag()) {
      const auto a = bit(key.first), b = bit(key.second);
      coupling[a * n + b] = v;
      coupling[b * n + a] = v;
    }
  }

  double full(std::uint64_t c) const {
    double e = constant;
    for (std::size_t a = 0; a < n; ++a) {
      if (!((c >> a) & 1u)) continue;
      e += linear[a];
      for (std::size_t b = a + 1; b < n; ++b)
        if ((c >> b) & 1u) e += coupling[a * n + b];
    }
    return e;
  }

  // Energy change for toggling counter bit a in state c.
  double delta(std::uint64_t c, std::size_t a) const {
    double local = linear[a];
    const double* row = &coupling[a * n];
    for (std::size_t b = 0; b < n; ++b)
      if ((c >> b) & 1u) local += row[b];
    return ((c >> a) & 1u) ? -local : local;
  }
};

// Visits every counter with fixed high bits `prefix` via a Gray-code walk over
// the low `low_bits` bits.
template <class Visit>
void walk_block(const DenseForm& f, std::uint64_t prefix, std::size_t low_bits, Visit&& visit) {
  std::uint64_t c = prefix << low_bits;
  double e = f.full(c);
  visit(c, e);
  const std::uint64_t count = std::uint64_t{1} << low_bits;
  for (std::uint64_t k = 1; k < count; ++k) {
    const auto a = static_cast<std::size_t>(std::countr_zero(k));
    e += f.delta(c, a);
    c ^= std::uint64_t{1} << a;
    visit(c, e);
  }
}

}  // namespace

double tie_tolerance(double min_energy) { return 1e-9 * std::max(1.0, std::abs(min_energy)); }

BinaryVector lexicographic_vector(std::uint64_t index, std::size_t n) {
  BinaryVector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<Bit>((index >> (n - 1 - i)) & 1u);
  return x;
}

BruteForceResult brute_force_minimize(const QuboProblem& q, std::size_t cap) {
  check_cap(q, cap);
  const std::size_t n = q.n();
  const DenseForm form(q);
  const std::size_t low_bits = std::min<std::size_t>(n, 12);
  const auto blocks = static_cast<std::int64_t>(std::uint64_t{1} << (n - low_bits));

  // Pass 1: the minimum value (order independent).
  double best = std::numeric_limits<double>::infinity();
#pragma omp parallel for reduction(min : best) schedule(static)
  for (std::int64_t blk = 0; blk < blocks; ++blk) {
    walk_block(form, static_cast<std::uint64_t>(blk), low_bits, [&](std::uint64_t, double e) {
      if (e < best) best = e;
    });
  }

  // Pass 2: ties against the minimum, smallest counter wins.
  const double cut = best + tie_tolerance(best);
  std::uint64_t first = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t ties = 0;
#pragma omp parallel for reduction(min : first) reduction(+ : ties) schedule(static)
  for (std::int64_t blk = 0; blk < blocks; ++blk) {
    walk_block(form, static_cast<std::uint64_t>(blk), low_bits, [&](std::uint64_t c, double e) {
      if (e <= cut) {
        ++ties;
        if (c < first) first = c;
      }
    });
  }

  BruteForceResult r;
  r.minimizer = lexicographic_vector(first, n);
  r.energy = energy(q, r.minimizer);
  r.multiplicity = static_cast<std::size_t>(ties);
  return r;
}

std::vector<double> energies(const QuboProblem& q, std::span<const BinaryVector> xs) {
  std::vector<double> out(xs.size());
  const auto count = static_cast<std::int64_t>(xs.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < count; ++k) out[k] = energy(q, xs[k]);
  return out;
}

namespace serial {

BruteForceResult brute_force_minimize(const QuboProblem& q, std::size_t cap) {
  check_cap(q, cap);
  const std::size_t n = q.n();
  const std::uint64_t total = std::uint64_t{1} << n;
  double best = std::numeric_limits<double>::infinity();
  for (std::uint64_t c = 0; c < total; ++c) best = std::min(best, energy(q, lexicographic_vector(c, n)));
  const double cut = best + tie_tolerance(best);
  BruteForceResult r;
  for (std::uint64_t c = 0; c < total; ++c) {
    auto x = lexicographic_vector(c, n);
    const double e = energy(q, x);
    if (e > cut) continue;
    if (r.multiplicity++ == 0) {
      r.minimizer = std::move(x);
      r.energy = e;
    }
  }
  return r;
}

std::vector<double> energies(const QuboProblem& q, std::span<const BinaryVector> xs) {
  std::vector<double> out;
  out.reserve(xs.size());
  for (const auto& x : xs) out.push_back(energy(q, x));
  return out;
}

}  // namespace serial

}  // namespace cimq
