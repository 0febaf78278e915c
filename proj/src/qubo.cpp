#include "cimqubo/qubo.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "cimqubo/errors.hpp"
#include "cimqubo/text.hpp"

namespace cimq {

namespace {

void check_finite(double v) {
  if (!std::isfinite(v)) throw DimensionError("non-finite coefficient");
}

void check_index(std::size_t i, std::size_t n) {
  if (i >= n)
    throw DimensionError("variable index " + std::to_string(i) + " out of range for n=" +
                         std::to_string(n));
}

void accumulate(std::map<IndexPair, double>& terms, std::size_t i, std::size_t j, double v) {
  if (i > j) std::swap(i, j);
  auto [it, inserted] = terms.try_emplace({i, j}, v);
  if (!inserted) it->second += v;
  if (it->second == 0.0) terms.erase(it);
}

}  // namespace

QuboProblem::QuboProblem(std::size_t n) : linear_(n, 0.0) {}

void QuboProblem::add_constant(double v) {
  check_finite(v);
  constant_ += v;
}

void QuboProblem::add_linear(std::size_t i, double v) {
  check_index(i, n());
  check_finite(v);
  linear_[i] += v;
}

void QuboProblem::add_quadratic(std::size_t i, std::size_t j, double v) {
  if (i == j) {
    add_linear(i, v);
    return;
  }
  check_index(i, n());
  check_index(j, n());
  check_finite(v);
  if (v == 0.0) return;
  accumulate(offdiag_, i, j, v);
}

double QuboProblem::quadratic(std::size_t i, std::size_t j) const {
  if (i > j) std::swap(i, j);
  auto it = offdiag_.find({i, j});
  return it == offdiag_.end() ? 0.0 : it->second;
}

QuboProblem& QuboProblem::operator+=(const QuboProblem& other) {
  if (other.n() != n()) throw DimensionError("QUBO size mismatch in sum");
  constant_ += other.constant_;
  for (std::size_t i = 0; i < n(); ++i) linear_[i] += other.linear_[i];
  for (const auto& [key, v] : other.offdiag_) accumulate(offdiag_, key.first, key.second, v);
  return *this;
}

IsingModel::IsingModel(std::size_t n) : fields_(n, 0.0) {}

void IsingModel::add_constant(double v) {
  check_finite(v);
  constant_ += v;
}

void IsingModel::add_field(std::size_t i, double v) {
  check_index(i, n());
  check_finite(v);
  fields_[i] += v;
}

void IsingModel::add_coupling(std::size_t i, std::size_t j, double v) {
  if (i == j) {
    // s_i^2 == 1
    add_constant(v);
    return;
  }
  check_index(i, n());
  check_index(j, n());
  check_finite(v);
  if (v == 0.0) return;
  accumulate(couplings_, i, j, v);
}

void check_binary(std::span<const Bit> x, std::size_t n) {
  if (x.size() != n)
    throw DimensionError("binary vector has length " + std::to_string(x.size()) +
                         ", expected " + std::to_string(n));
  for (Bit b : x)
    if (b > 1) throw DimensionError("binary vector entry is not 0/1");
}

double energy(const QuboProblem& q, std::span<const Bit> x) {
  check_binary(x, q.n());
  double e = q.constant();
  const auto& lin = q.linear();
  for (std::size_t i = 0; i < lin.size(); ++i)
    if (x[i]) e += lin[i];
  for (const auto& [key, v] : q.offdiag())
    if (x[key.first] && x[key.second]) e += v;
  return e;
}

double ising_energy(const IsingModel& m, std::span<const int> spins) {
  if (spins.size() != m.n()) throw DimensionError("spin vector length mismatch");
  for (int s : spins)
    if (s != 1 && s != -1) throw DimensionError("spin entry is not +-1");
  double e = m.constant();
  for (std::size_t i = 0; i < m.n(); ++i) e += m.fields()[i] * spins[i];
  for (const auto& [key, v] : m.couplings()) e += v * spins[key.first] * spins[key.second];
  return e;
}

QuboProblem ising_to_qubo(const IsingModel& m) {
  QuboProblem q(m.n());
  q.add_constant(m.constant());
  for (std::size_t i = 0; i < m.n(); ++i) {
    const double h = m.fields()[i];
    if (h == 0.0) continue;
    q.add_constant(h);
    q.add_linear(i, -2.0 * h);
  }
  for (const auto& [key, j] : m.couplings()) {
    q.add_constant(j);
    q.add_linear(key.first, -2.0 * j);
    q.add_linear(key.second, -2.0 * j);
    q.add_quadratic(key.first, key.second, 4.0 * j);
  }
  return q;
}

IsingModel qubo_to_ising(const QuboProblem& q) {
  IsingModel m(q.n());
  m.add_constant(q.constant());
  for (std::size_t i = 0; i < q.n(); ++i) {
    const double l = q.linear()[i];
    if (l == 0.0) continue;
    m.add_constant(0.5 * l);
    m.add_field(i, -0.5 * l);
  }
  for (const auto& [key, v] : q.offdiag()) {
    const double w = 0.25 * v;
    m.add_constant(w);
    m.add_field(key.first, -w);
    m.add_field(key.second, -w);
    m.add_coupling(key.first, key.second, w);
  }
  return m;
}

SpinVector to_spins(std::span<const Bit> x) {
  SpinVector s(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) s[i] = x[i] ? -1 : 1;
  return s;
}

double sparsity(const QuboProblem& q) {
  const std::size_t n = q.n();
  if (n == 0) return 1.0;
  std::size_t nonzero = q.nnz();
  for (double v : q.linear())
    if (v != 0.0) ++nonzero;
  const double cells = static_cast<double>(n) * static_cast<double>(n + 1) / 2.0;
  return 1.0 - static_cast<double>(nonzero) / cells;
}

void write_qubo(std::ostream& os, const QuboProblem& q) {
  os << "qubo " << q.n() << ' ' << q.nnz() << '\n';
  os << "c " << text::format_double(q.constant()) << '\n';
  for (std::size_t i = 0; i < q.n(); ++i)
    if (q.linear()[i] != 0.0) os << "l " << i << ' ' << text::format_double(q.linear()[i]) << '\n';
  for (const auto& [key, v] : q.offdiag())
    os << "q " << key.first << ' ' << key.second << ' ' << text::format_double(v) << '\n';
}

QuboProblem read_qubo(std::istream& is) {
  std::string line;
  std::size_t line_no = 0;
  QuboProblem q;
  bool have_header = false;
  long long declared_nnz = 0;
  std::size_t seen_q = 0;
  while (std::getline(is, line)) {
    ++line_no;
    auto tok = text::split_ws(line);
    if (tok.empty() || tok[0].front() == '#') continue;
    if (!have_header) {
      if (tok.size() != 3 || tok[0] != "qubo") throw ParseError("expected 'qubo <n> <nnz>'", line_no);
      const long long n = text::parse_int(tok[1], line_no);
      declared_nnz = text::parse_int(tok[2], line_no);
      if (n < 0 || declared_nnz < 0) throw ParseError("negative size in header", line_no);
      q = QuboProblem(static_cast<std::size_t>(n));
      have_header = true;
      continue;
    }
    auto index = [&](std::string_view t) {
      const long long i = text::parse_int(t, line_no);
      if (i < 0 || static_cast<std::size_t>(i) >= q.n())
        throw ParseError("index " + std::string(t) + " out of range", line_no);
      return static_cast<std::size_t>(i);
    };
    if (tok[0] == "c" && tok.size() == 2) {
      q.add_constant(text::parse_double(tok[1], line_no));
    } else if (tok[0] == "l" && tok.size() == 3) {
      q.add_linear(index(tok[1]), text::parse_double(tok[2], line_no));
    } else if (tok[0] == "q" && tok.size() == 4) {
      const auto i = index(tok[1]);
      const auto j = index(tok[2]);
      if (i >= j) throw ParseError("quadratic record requires i < j", line_no);
      const double v = text::parse_double(tok[3], line_no);
      if (q.quadratic(i, j) != 0.0) throw ParseError("duplicate quadratic record", line_no);
      q.add_quadratic(i, j, v);
      ++seen_q;
    } else {
      throw ParseError("unrecognized record '" + line + "'", line_no);
    }
  }
  if (!have_header) throw ParseError("missing 'qubo' header", line_no);
  if (static_cast<long long>(seen_q) != declared_nnz)
    throw ParseError("header declares " + std::to_string(declared_nnz) + " quadratic records, found " +
                         std::to_string(seen_q),
                     line_no);
  return q;
}

}  // namespace cimq
