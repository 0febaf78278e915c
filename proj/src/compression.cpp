#include "cimqubo/compression.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <string>

#include "cimqubo/errors.hpp"
#include "cimqubo/text.hpp"

namespace cimq {

std::size_t Matrix::nonzeros() const {
  return static_cast<std::size_t>(std::count_if(data.begin(), data.end(), [](double v) { return v != 0.0; }));
}

double Matrix::max_abs() const {
  double m = 0.0;
  for (double v : data) m = std::max(m, std::abs(v));
  return m;
}

namespace {

struct Slot {
  double value;
  bool fixed;
};

// Sparse working copy of the off-diagonal coefficients. Each unordered pair
// occupies exactly one slot (r,c); moving it means re-keying it to (c,r).
class FoldingMatrix {
 public:
  explicit FoldingMatrix(const QuboProblem& q)
      : rows_(q.n()), cols_(q.n()), fixed_in_row_(q.n(), 0), fixed_in_col_(q.n(), 0) {
    for (const auto& [key, v] : q.offdiag()) insert(key.first, key.second, {v, false});
  }

  bool row_has_fixed(std::size_t r) const { return fixed_in_row_[r] > 0; }
  bool col_has_fixed(std::size_t c) const { return fixed_in_col_[c] > 0; }

  // Moves every entry of row i to its mirror, then fixes column i.
  void fold_row(std::size_t i) {
    auto entries = std::move(rows_[i]);
    rows_[i].clear();
    for (const auto& [j, slot] : entries) {
      cols_[j].erase(i);
      insert(j, i, {slot.value, false});
    }
    for (std::size_t r : cols_[i]) fix(r, i);
  }

  // Moves every entry of column c to its mirror, then fixes row c.
  void fold_col(std::size_t c) {
    const auto sources = std::move(cols_[c]);
    cols_[c].clear();
    for (std::size_t r : sources) {
      auto node = rows_[r].extract(c);
      insert(c, r, {node.mapped().value, false});
    }
    for (auto& [j, slot] : rows_[c]) fix(c, j);
  }

  const std::map<std::size_t, Slot>& row(std::size_t r) const { return rows_[r]; }

 private:
  void insert(std::size_t r, std::size_t c, Slot s) {
    // The mirror of a live slot is always empty.
    auto [it, inserted] = rows_[r].emplace(c, s);
    if (!inserted) throw Error("compression invariant violated: mirror slot occupied");
    cols_[c].insert(r);
  }

  void fix(std::size_t r, std::size_t c) {
    auto& slot = rows_[r].at(c);
    if (slot.fixed) return;
    slot.fixed = true;
    ++fixed_in_row_[r];
    ++fixed_in_col_[c];
  }

  std::vector<std::map<std::size_t, Slot>> rows_;
  std::vector<std::set<std::size_t>> cols_;
  std::vector<std::size_t> fixed_in_row_;
  std::vector<std::size_t> fixed_in_col_;
};

std::vector<std::size_t> degree_order(const QuboProblem& q) {
  std::vector<std::size_t> degree(q.n(), 0);
  for (const auto& [key, v] : q.offdiag()) {
    ++degree[key.first];
    ++degree[key.second];
  }
  std::vector<std::size_t> order(q.n());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return degree[a] < degree[b]; });
  return order;
}

double fraction(std::size_t part, std::size_t whole) {
  return whole == 0 ? 0.0 : static_cast<double>(part) / static_cast<double>(whole);
}

std::size_t nonzero_linear(const QuboProblem& q) {
  return static_cast<std::size_t>(
      std::count_if(q.linear().begin(), q.linear().end(), [](double v) { return v != 0.0; }));
}

}  // namespace

Compression compress(const QuboProblem& q) {
  const std::size_t n = q.n();
  FoldingMatrix m(q);
  const auto order = degree_order(q);

  std::vector<bool> row_removed(n, false), col_removed(n, false);
  for (std::size_t i : order) {
    if (m.row_has_fixed(i)) continue;
    row_removed[i] = true;
    m.fold_row(i);
  }
  for (std::size_t c : order) {
    if (m.col_has_fixed(c)) continue;
    col_removed[c] = true;
    m.fold_col(c);
  }

  Compression out;
  auto& cq = out.compressed;
  cq.source_n = n;
  cq.linear = q.linear();
  cq.constant = q.constant();
  std::vector<std::size_t> col_pos(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (!row_removed[i]) cq.row_vars.push_back(i);
    if (!col_removed[i]) {
      col_pos[i] = cq.col_vars.size();
      cq.col_vars.push_back(i);
    }
  }
  cq.qprime = Matrix(cq.p(), cq.q());
  for (std::size_t a = 0; a < cq.p(); ++a) {
    for (const auto& [c, slot] : m.row(cq.row_vars[a])) {
      if (col_removed[c]) throw Error("compression invariant violated: entry in removed column");
      cq.qprime(a, col_pos[c]) = slot.value;
    }
  }
  for (std::size_t r = 0; r < n; ++r)
    if (row_removed[r] && !m.row(r).empty()) throw Error("compression invariant violated: entry in removed row");

  auto& st = out.stats;
  st.n = n;
  st.cells_before = n * n;
  st.cells_after = cq.p() * cq.q();
  st.rows_removed = n - cq.p();
  st.cols_removed = n - cq.q();
  st.sparsity_before = n == 0 ? 1.0 : 1.0 - fraction(q.nnz(), st.cells_before);
  st.sparsity_before_with_diag = n == 0 ? 1.0 : 1.0 - fraction(q.nnz() + nonzero_linear(q), st.cells_before);
  st.sparsity_after = st.cells_after == 0 ? 0.0 : 1.0 - fraction(cq.qprime.nonzeros(), st.cells_after);
  st.sparsity_reduction = st.sparsity_before - st.sparsity_after;
  st.sparsity_reduction_with_diag = st.sparsity_before_with_diag - st.sparsity_after;
  st.chip_size_saving = n == 0 ? 0.0 : 1.0 - fraction(st.cells_after, st.cells_before);
  return out;
}

double compressed_energy(const CompressedQubo& c, std::span<const Bit> x) {
  check_binary(x, c.source_n);
  double e = c.constant;
  for (std::size_t i = 0; i < c.linear.size(); ++i)
    if (x[i]) e += c.linear[i];
  for (std::size_t a = 0; a < c.p(); ++a) {
    if (!x[c.row_vars[a]]) continue;
    for (std::size_t b = 0; b < c.q(); ++b)
      if (x[c.col_vars[b]]) e += c.qprime(a, b);
  }
  return e;
}

QuboProblem decompress(const CompressedQubo& c) {
  QuboProblem q(c.source_n);
  q.add_constant(c.constant);
  for (std::size_t i = 0; i < c.source_n; ++i) q.add_linear(i, c.linear[i]);
  for (std::size_t a = 0; a < c.p(); ++a)
    for (std::size_t b = 0; b < c.q(); ++b)
      if (c.qprime(a, b) != 0.0) q.add_quadratic(c.row_vars[a], c.col_vars[b], c.qprime(a, b));
  return q;
}

SignSplit split_signs(const CompressedQubo& c) {
  SignSplit s{Matrix(c.p(), c.q()), Matrix(c.p(), c.q())};
  for (std::size_t k = 0; k < c.qprime.data.size(); ++k) {
    const double v = c.qprime.data[k];
    if (v > 0.0) s.plus.data[k] = v;
    if (v < 0.0) s.minus.data[k] = -v;
  }
  return s;
}

SignSplitCompression compress_sign_split(const QuboProblem& q) {
  const std::size_t n = q.n();
  QuboProblem pos(n), neg(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double v = q.linear()[i];
    if (v > 0.0) pos.add_linear(i, v);
    if (v < 0.0) neg.add_linear(i, -v);
  }
  for (const auto& [key, v] : q.offdiag()) {
    if (v > 0.0) pos.add_quadratic(key.first, key.second, v);
    if (v < 0.0) neg.add_quadratic(key.first, key.second, -v);
  }
  SignSplitCompression out{compress(pos), compress(neg), {}};
  auto& st = out.stats;
  const auto& cp = out.positive.compressed;
  const auto& cn = out.negative.compressed;
  st.cells_before = 2 * n * n;
  st.nonzeros_before = q.nnz() + nonzero_linear(q);
  st.cells_after = cp.p() * cp.q() + cn.p() * cn.q();
  st.nonzeros_after = cp.qprime.nonzeros() + cn.qprime.nonzeros();
  st.sparsity_before = n == 0 ? 1.0 : 1.0 - fraction(st.nonzeros_before, st.cells_before);
  st.sparsity_after = st.cells_after == 0 ? 0.0 : 1.0 - fraction(st.nonzeros_after, st.cells_after);
  st.sparsity_reduction = st.sparsity_before - st.sparsity_after;
  st.chip_size_saving = n == 0 ? 0.0 : 1.0 - fraction(st.cells_after, st.cells_before);
  return out;
}

void write_cqubo(std::ostream& os, const CompressedQubo& c) {
  os << "cqubo " << c.source_n << ' ' << c.p() << ' ' << c.q() << '\n';
  os << "c " << text::format_double(c.constant) << '\n';
  for (std::size_t i = 0; i < c.linear.size(); ++i)
    if (c.linear[i] != 0.0) os << "l " << i << ' ' << text::format_double(c.linear[i]) << '\n';
  os << 'r';
  for (auto v : c.row_vars) os << ' ' << v;
  os << "\nv";
  for (auto v : c.col_vars) os << ' ' << v;
  os << '\n';
  for (std::size_t a = 0; a < c.p(); ++a) {
    os << 'm';
    for (std::size_t b = 0; b < c.q(); ++b) os << ' ' << text::format_double(c.qprime(a, b));
    os << '\n';
  }
}

CompressedQubo read_cqubo(std::istream& is) {
  std::string line;
  std::size_t line_no = 0;
  CompressedQubo c;
  bool have_header = false, have_rows = false, have_cols = false;
  std::size_t p = 0, q = 0, matrix_rows = 0;
  auto index = [&](std::string_view t) {
    const long long i = text::parse_int(t, line_no);
    if (i < 0 || static_cast<std::size_t>(i) >= c.source_n)
      throw ParseError("index " + std::string(t) + " out of range", line_no);
    return static_cast<std::size_t>(i);
  };
  while (std::getline(is, line)) {
    ++line_no;
    auto tok = text::split_ws(line);
    if (tok.empty() || tok[0].front() == '#') continue;
    if (!have_header) {
      if (tok.size() != 4 || tok[0] != "cqubo") throw ParseError("expected 'cqubo <n> <p> <q>'", line_no);
      const long long n = text::parse_int(tok[1], line_no);
      const long long pp = text::parse_int(tok[2], line_no);
      const long long qq = text::parse_int(tok[3], line_no);
      if (n < 0 || pp < 0 || qq < 0 || pp > n || qq > n) throw ParseError("invalid sizes in header", line_no);
      c.source_n = static_cast<std::size_t>(n);
      p = static_cast<std::size_t>(pp);
      q = static_cast<std::size_t>(qq);
      c.linear.assign(c.source_n, 0.0);
      c.qprime = Matrix(p, q);
      have_header = true;
    } else if (tok[0] == "c" && tok.size() == 2) {
      c.constant += text::parse_double(tok[1], line_no);
    } else if (tok[0] == "l" && tok.size() == 3) {
      c.linear[index(tok[1])] += text::parse_double(tok[2], line_no);
    } else if (tok[0] == "r" && !have_rows) {
      if (tok.size() - 1 != p) throw ParseError("row index count does not match header", line_no);
      for (std::size_t k = 1; k < tok.size(); ++k) c.row_vars.push_back(index(tok[k]));
      have_rows = true;
    } else if (tok[0] == "v" && !have_cols) {
      if (tok.size() - 1 != q) throw ParseError("column index count does not match header", line_no);
      for (std::size_t k = 1; k < tok.size(); ++k) c.col_vars.push_back(index(tok[k]));
      have_cols = true;
    } else if (tok[0] == "m") {
      if (matrix_rows >= p) throw ParseError("too many matrix rows", line_no);
      if (tok.size() - 1 != q) throw ParseError("matrix row length does not match header", line_no);
      for (std::size_t b = 0; b < q; ++b) c.qprime(matrix_rows, b) = text::parse_double(tok[b + 1], line_no);
      ++matrix_rows;
    } else {
      throw ParseError("unrecognized record '" + line + "'", line_no);
    }
  }
  if (!have_header) throw ParseError("missing 'cqubo' header", line_no);
  if (!have_rows || !have_cols) throw ParseError("missing row or column index line", line_no);
  if (matrix_rows != p) throw ParseError("expected " + std::to_string(p) + " matrix rows", line_no);
  return c;
}

}  // namespace cimq
