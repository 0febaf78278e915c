#include "cimqubo/converters.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <string>

#include "cimqubo/errors.hpp"

namespace cimq {

QuboProblem maxcut_to_qubo(const Graph& g) {
  QuboProblem q(g.n_vertices());
  for (const auto& e : g.edges()) {
    q.add_quadratic(e.u, e.v, 2.0 * e.weight);
    q.add_linear(e.u, -e.weight);
    q.add_linear(e.v, -e.weight);
  }
  return q;
}

Bipartition decode_cut(std::span<const Bit> x) {
  Bipartition b;
  for (std::size_t i = 0; i < x.size(); ++i) (x[i] ? b.side_a : b.side_b).push_back(i);
  return b;
}

double cut_value(const Graph& g, std::span<const Bit> x) {
  check_binary(x, g.n_vertices());
  double cut = 0.0;
  for (const auto& e : g.edges())
    if (x[e.u] != x[e.v]) cut += e.weight;
  return cut;
}

ColoringEncoding::ColoringEncoding(const Graph& g, std::size_t colors)
    : n_vertices_(g.n_vertices()), colors_(colors) {
  if (colors == 0) throw ConfigError("coloring needs at least one color");
  for (const auto& e : g.edges()) edges_.emplace_back(e.u, e.v);
}

ColoringQubo coloring_to_qubo(const Graph& g, std::size_t colors, double penalty) {
  if (!(penalty > 0.0)) throw ConfigError("coloring penalty must be positive");
  ColoringQubo out{QuboProblem(g.n_vertices() * colors), ColoringEncoding(g, colors)};
  const auto& enc = out.encoding;
  auto& q = out.qubo;
  for (std::size_t i = 0; i < enc.n_vertices(); ++i) {
    q.add_constant(penalty);
    for (std::size_t p = 0; p < colors; ++p) {
      q.add_linear(enc.var_index(i, p), -penalty);
      for (std::size_t r = p + 1; r < colors; ++r)
        q.add_quadratic(enc.var_index(i, p), enc.var_index(i, r), 2.0 * penalty);
    }
  }
  for (const auto& [m, n] : enc.edges())
    for (std::size_t p = 0; p < colors; ++p) q.add_quadratic(enc.var_index(m, p), enc.var_index(n, p), 1.0);
  return out;
}

ColoringReport decode_coloring(const ColoringEncoding& enc, std::span<const Bit> x) {
  check_binary(x, enc.n_variables());
  ColoringReport r;
  r.colors.resize(enc.n_vertices());
  for (std::size_t i = 0; i < enc.n_vertices(); ++i) {
    for (std::size_t p = 0; p < enc.colors(); ++p)
      if (x[enc.var_index(i, p)]) r.colors[i].push_back(p);
    if (r.colors[i].empty()) r.uncolored.push_back(i);
    if (r.colors[i].size() > 1) r.multicolored.push_back(i);
  }
  for (const auto& [m, n] : enc.edges()) {
    for (std::size_t p = 0; p < enc.colors(); ++p) {
      if (x[enc.var_index(m, p)] && x[enc.var_index(n, p)]) {
        r.conflicts.emplace_back(m, n);
        break;
      }
    }
  }
  r.valid = r.uncolored.empty() && r.multicolored.empty() && r.conflicts.empty();
  return r;
}

// ---- prime factorization --------------------------------------------------

namespace {

constexpr std::uint64_t kMaxTarget = std::uint64_t{1} << 62;

std::size_t bit_length(std::uint64_t v) { return static_cast<std::size_t>(std::bit_width(v)); }

// Partial product P_a * Q_b of one multiplication-table column.
struct Term {
  enum class Kind { One, P, Q, Z } kind;
  std::size_t a;
  std::size_t b;
};

std::vector<Term> column_terms(std::size_t s, std::size_t k, std::size_t l) {
  std::vector<Term> terms;
  for (std::size_t a = 0; a <= k + 1; ++a) {
    if (s < a || s - a > l + 1) continue;
    const std::size_t b = s - a;
    const bool p_fixed = a == 0 || a == k + 1;
    const bool q_fixed = b == 0 || b == l + 1;
    Term::Kind kind = p_fixed && q_fixed ? Term::Kind::One
                      : q_fixed          ? Term::Kind::P
                      : p_fixed          ? Term::Kind::Q
                                         : Term::Kind::Z;
    terms.push_back({kind, a, b});
  }
  return terms;
}

// constant + sum coef_v x_v
struct LinearExpr {
  double constant = 0.0;
  std::map<std::size_t, double> coef;

  void add(std::size_t var, double c) { coef[var] += c; }
};

void add_square(QuboProblem& q, const LinearExpr& e) {
  q.add_constant(e.constant * e.constant);
  std::vector<std::pair<std::size_t, double>> terms;
  for (const auto& [v, c] : e.coef)
    if (c != 0.0) terms.emplace_back(v, c);
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const auto [u, a] = terms[i];
    q.add_linear(u, a * a + 2.0 * e.constant * a);
    for (std::size_t j = i + 1; j < terms.size(); ++j) q.add_quadratic(u, terms[j].first, 2.0 * a * terms[j].second);
  }
}

std::uint64_t factor_value(std::span<const Bit> x, std::size_t free_bits, auto index_of) {
  std::uint64_t v = 1 | (std::uint64_t{1} << (free_bits + 1));
  for (std::size_t a = 1; a <= free_bits; ++a)
    if (x[index_of(a)]) v |= std::uint64_t{1} << a;
  return v;
}

std::uint64_t fixed_part_bit(std::uint64_t value, std::size_t pos) { return (value >> pos) & 1u; }

}  // namespace

FactorizationEncoding::FactorizationEncoding(std::uint64_t n, std::size_t k, std::size_t l)
    : n_(n), k_(k), l_(l) {
  if (n % 2 == 0) throw UnsupportedInstance("N must be odd, got " + std::to_string(n));
  if (n < 9) throw UnsupportedInstance("N must be at least 9, got " + std::to_string(n));
  if (n >= kMaxTarget) throw UnsupportedInstance("N too large");
  const std::size_t len = bit_length(n);
  if (len != k + l + 3 && len != k + l + 4)
    throw UnsupportedInstance("factor bit lengths " + std::to_string(k + 2) + "+" + std::to_string(l + 2) +
                              " cannot produce a " + std::to_string(len) + "-bit N");

  std::size_t next = carry_begin();
  const std::size_t top = top_column();
  carries_.resize(top + 1);
  std::uint64_t max_carry_in = 0;
  for (std::size_t s = 0; s < top; ++s) {
    const std::uint64_t height = column_terms(s, k, l).size();
    const std::uint64_t max_sum = height + max_carry_in;
    const std::uint64_t ns = (n >> s) & 1u;
    const std::uint64_t max_carry = max_sum >= ns ? (max_sum - ns) / 2 : 0;
    for (std::size_t r = 0; r < bit_length(max_carry); ++r) carries_[s].push_back(next++);
    max_carry_in = max_carry;
  }
  n_vars_ = next;
}

IndexPair suggest_bit_lengths(std::uint64_t n) {
  const std::size_t each = (bit_length(n) + 1) / 2;
  const std::size_t free = each >= 2 ? each - 2 : 0;
  return {free, free};
}

QuboProblem pfp_to_qubo(const FactorizationEncoding& enc, double reduction_penalty) {
  const std::size_t k = enc.k(), l = enc.l(), top = enc.top_column();
  QuboProblem q(enc.n_variables());
  for (std::size_t s = 0; s <= top; ++s) {
    LinearExpr e;
    for (const auto& t : column_terms(s, k, l)) {
      switch (t.kind) {
        case Term::Kind::One: e.constant += 1.0; break;
        case Term::Kind::P: e.add(enc.p_index(t.a), 1.0); break;
        case Term::Kind::Q: e.add(enc.q_index(t.b), 1.0); break;
        case Term::Kind::Z: e.add(enc.z_index(t.a, t.b), 1.0); break;
      }
    }
    if (s > 0) {
      const auto& cin = enc.carry_bits(s - 1);
      for (std::size_t r = 0; r < cin.size(); ++r) e.add(cin[r], std::ldexp(1.0, static_cast<int>(r)));
    }
    if (s < top) {
      e.constant -= static_cast<double>((enc.target() >> s) & 1u);
      const auto& cout = enc.carry_bits(s);
      for (std::size_t r = 0; r < cout.size(); ++r) e.add(cout[r], -std::ldexp(2.0, static_cast<int>(r)));
    } else {
      e.constant -= static_cast<double>(enc.target() >> s);
    }
    add_square(q, e);
  }

  double penalty = reduction_penalty;
  if (!(penalty > 0.0)) {
    double max_coef = 0.0;
    for (double v : q.linear()) max_coef = std::max(max_coef, std::abs(v));
    for (const auto& [key, v] : q.offdiag()) max_coef = std::max(max_coef, std::abs(v));
    penalty = 2.0 * std::max(max_coef, 1.0);
  }
  for (std::size_t a = 1; a <= k; ++a) {
    for (std::size_t b = 1; b <= l; ++b) {
      const auto p = enc.p_index(a), qq = enc.q_index(b), z = enc.z_index(a, b);
      q.add_quadratic(p, qq, penalty);
      q.add_quadratic(p, z, -2.0 * penalty);
      q.add_quadratic(qq, z, -2.0 * penalty);
      q.add_linear(z, 3.0 * penalty);
    }
  }
  return q;
}

namespace {

// Runs the column recurrence for factors (P, Q). Calls on_carry(column, value)
// for every carry-out; returns false if a column equation fails.
template <class OnCarry>
bool column_chain(const FactorizationEncoding& enc, std::uint64_t p, std::uint64_t q, OnCarry&& on_carry) {
  const std::size_t top = enc.top_column();
  std::uint64_t carry = 0;
  for (std::size_t s = 0; s <= top; ++s) {
    std::uint64_t sum = carry;
    for (const auto& t : column_terms(s, enc.k(), enc.l())) sum += fixed_part_bit(p, t.a) & fixed_part_bit(q, t.b);
    if (s == top) return sum == (enc.target() >> s);
    const std::uint64_t ns = (enc.target() >> s) & 1u;
    if (sum < ns || (sum - ns) % 2 != 0) return false;
    carry = (sum - ns) / 2;
    if (!on_carry(s, carry)) return false;
  }
  return true;
}

}  // namespace

FactorDecode decode_factors(const FactorizationEncoding& enc, std::span<const Bit> x) {
  check_binary(x, enc.n_variables());
  FactorDecode d;
  d.p = factor_value(x, enc.k(), [&](std::size_t a) { return enc.p_index(a); });
  d.q = factor_value(x, enc.l(), [&](std::size_t b) { return enc.q_index(b); });
  std::uint64_t product = 0;
  if (__builtin_mul_overflow(d.p, d.q, &product) || product != enc.target()) return d;
  for (std::size_t a = 1; a <= enc.k(); ++a)
    for (std::size_t b = 1; b <= enc.l(); ++b)
      if (x[enc.z_index(a, b)] != (x[enc.p_index(a)] & x[enc.q_index(b)])) return d;
  d.consistent = column_chain(enc, d.p, d.q, [&](std::size_t s, std::uint64_t carry) {
    const auto& bits = enc.carry_bits(s);
    if (bits.size() < 64 && (carry >> bits.size()) != 0) return false;
    for (std::size_t r = 0; r < bits.size(); ++r)
      if (x[bits[r]] != ((carry >> r) & 1u)) return false;
    return true;
  });
  return d;
}

BinaryVector encode_factors(const FactorizationEncoding& enc, std::uint64_t p, std::uint64_t q) {
  auto check_form = [](std::uint64_t v, std::size_t free_bits) {
    return bit_length(v) == free_bits + 2 && (v & 1u);
  };
  if (!check_form(p, enc.k()) || !check_form(q, enc.l()))
    throw EncodingError("factor does not match the encoding's bit lengths");
  BinaryVector x(enc.n_variables(), 0);
  for (std::size_t a = 1; a <= enc.k(); ++a) x[enc.p_index(a)] = (p >> a) & 1u;
  for (std::size_t b = 1; b <= enc.l(); ++b) x[enc.q_index(b)] = (q >> b) & 1u;
  for (std::size_t a = 1; a <= enc.k(); ++a)
    for (std::size_t b = 1; b <= enc.l(); ++b) x[enc.z_index(a, b)] = x[enc.p_index(a)] & x[enc.q_index(b)];
  column_chain(enc, p, q, [&](std::size_t s, std::uint64_t carry) {
    const auto& bits = enc.carry_bits(s);
    for (std::size_t r = 0; r < bits.size(); ++r) x[bits[r]] = (carry >> r) & 1u;
    return true;
  });
  return x;
}

QuboProblem reference_pfp35_block_qubo() {
  // x1 = p_1, x2 = q_1, x3 = c, x4 = t
  QuboProblem q(4);
  q.add_constant(13);
  q.add_linear(0, 4);
  q.add_linear(1, 4);
  q.add_linear(2, -11);
  q.add_linear(3, 20);
  q.add_quadratic(0, 2, -6);
  q.add_quadratic(1, 2, -6);
  q.add_quadratic(2, 3, -16);
  q.add_quadratic(0, 3, 4);
  q.add_quadratic(1, 3, 4);
  return q;
}

}  // namespace cimq
