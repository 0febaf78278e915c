#include "cimqubo/annealer.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <ostream>
#include <string>

#include "cimqubo/errors.hpp"
#include "cimqubo/rng.hpp"
#include "cimqubo/text.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cimq {

namespace {

struct FlatQubo {
  double constant = 0.0;
  std::vector<double> linear;
  std::vector<std::size_t> qi, qj;
  std::vector<double> qv;
};

struct FlatCompressed {
  double constant = 0.0;
  std::size_t n = 0;
  std::vector<double> linear;
  std::vector<std::size_t> rows, cols;
  Matrix qprime;
};

constexpr std::uint64_t kT0Stream = 0x7430'5eed'0000'0001ULL;

// Toggles `flips` distinct positions chosen by a partial Fisher-Yates pass
// over a persistent index permutation.
class Perturber {
 public:
  explicit Perturber(std::size_t n) : idx_(n) { std::iota(idx_.begin(), idx_.end(), std::size_t{0}); }

  void apply(BinaryVector& x, std::size_t flips, Rng& rng) {
    const std::size_t n = idx_.size();
    flips = std::min(flips, n);
    for (std::size_t k = 0; k < flips; ++k) {
      const std::size_t j = k + static_cast<std::size_t>(rng.below(n - k));
      std::swap(idx_[k], idx_[j]);
      x[idx_[k]] ^= 1;
    }
  }

 private:
  std::vector<std::size_t> idx_;
};

BinaryVector random_bits(std::size_t n, Rng& rng) {
  BinaryVector x(n);
  for (auto& b : x) b = static_cast<Bit>(rng.next() >> 63);
  return x;
}

bool metropolis(double delta, double t, Rng& rng) {
  const double u = rng.uniform();
  return t > 0.0 && u < std::exp(-delta / t);
}

void check_size(std::size_t n) {
  if (n == 0) throw DimensionError("annealing needs at least one variable");
}

}  // namespace

EnergyOracle make_exact_oracle(const QuboProblem& q) {
  auto f = std::make_shared<FlatQubo>();
  f->constant = q.constant();
  f->linear = q.linear();
  for (const auto& [ij, v] : q.offdiag()) {
    f->qi.push_back(ij.first);
    f->qj.push_back(ij.second);
    f->qv.push_back(v);
  }
  return [f](std::span<const Bit> x) {
    if (x.size() != f->linear.size()) throw DimensionError("oracle: vector size mismatch");
    double e = f->constant;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (x[i]) e += f->linear[i];
    for (std::size_t k = 0; k < f->qv.size(); ++k)
      if (x[f->qi[k]] && x[f->qj[k]]) e += f->qv[k];
    return e;
  };
}

EnergyOracle make_compressed_oracle(const CompressedQubo& c) {
  auto f = std::make_shared<FlatCompressed>();
  f->constant = c.constant;
  f->n = c.source_n;
  f->linear = c.linear;
  f->rows = c.row_vars;
  f->cols = c.col_vars;
  f->qprime = c.qprime;
  return [f](std::span<const Bit> x) {
    if (x.size() != f->n) throw DimensionError("oracle: vector size mismatch");
    double e = f->constant;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (x[i]) e += f->linear[i];
    for (std::size_t r = 0; r < f->rows.size(); ++r) {
      if (!x[f->rows[r]]) continue;
      for (std::size_t k = 0; k < f->cols.size(); ++k)
        if (x[f->cols[k]]) e += f->qprime(r, k);
    }
    return e;
  };
}

void AnnealConfig::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must be in (0, 1)");
  if (!(eps_trap >= 0.0)) throw ConfigError("eps_trap must be >= 0");
  if (count_max == 0) throw ConfigError("count_max must be >= 1");
  if (max_epochs == 0) throw ConfigError("max_epochs must be >= 1");
  if (max_iters == 0) throw ConfigError("max_iters must be >= 1");
  if (flip_base == 0) throw ConfigError("flip_base must be >= 1");
  if (!std::isfinite(t0)) throw ConfigError("t0 must be finite");
}

double resolve_t0(const EnergyOracle& oracle, std::size_t n, const AnnealConfig& cfg) {
  if (cfg.t0 > 0.0) return cfg.t0;
  check_size(n);
  Rng rng(derive_seed(cfg.seed, kT0Stream));
  constexpr int kSamples = 100;
  double mean = 0.0, m2 = 0.0;
  for (int k = 1; k <= kSamples; ++k) {
    const BinaryVector x = random_bits(n, rng);
    const double e = oracle(x);
    const double d = e - mean;
    mean += d / k;
    m2 += d * (e - mean);
  }
  return std::max(1.0, std::sqrt(m2 / kSamples));
}

void AnnealTrace::write_csv(std::ostream& os) const {
  os << "iter,epoch,E_new,E_o,E_best,accepted,trapped,T,flips\n";
  for (const auto& r : records) {
    os << r.iter << ',' << r.epoch << ',' << text::format_double(r.e_new) << ',' << text::format_double(r.e_o) << ','
       << text::format_double(r.e_best) << ',' << (r.accepted ? 1 : 0) << ',' << (r.trapped ? 1 : 0) << ','
       << text::format_double(r.temperature) << ',' << r.flips << '\n';
  }
}

AnnealResult mesa_solve(const EnergyOracle& oracle, std::size_t n, const AnnealConfig& cfg) {
  cfg.validate();
  check_size(n);
  const double t0 = resolve_t0(oracle, n, cfg);
  const std::size_t flip_cap = std::max<std::size_t>(1, n / 4);
  Rng rng(cfg.seed);
  Perturber perturb(n);

  AnnealResult out;
  AnnealTrace& tr = out.trace;
  tr.t0 = t0;
  tr.records.reserve(std::min<std::size_t>(cfg.max_iters, 1u << 16));

  BinaryVector x_cur = random_bits(n, rng);
  double e_o = oracle(x_cur);
  tr.initial_energy = e_o;
  BinaryVector x_opt = x_cur;
  double e_opt = e_o;

  std::size_t epoch = 0, trap = 0;
  std::size_t flips = std::min(cfg.flip_base, n);
  double t = t0;
  BinaryVector cand = x_cur;
  perturb.apply(cand, flips, rng);

  for (std::size_t iter = 1; iter <= cfg.max_iters; ++iter) {
    const double e_new = oracle(cand);
    IterationRecord rec{iter, epoch, e_new, e_o, 0.0, false, false, t, flips};
    const double delta = e_new - e_o;
    if (delta < -cfg.eps_trap) {
      rec.accepted = true;
    } else if (std::abs(delta) <= cfg.eps_trap) {
      rec.trapped = true;
    } else if (metropolis(delta, t, rng)) {
      rec.accepted = true;
    } else {
      rec.trapped = cfg.trap_on_reject;
    }

    if (rec.accepted) {
      x_cur = cand;
      e_o = e_new;
      trap = 0;
      if (e_new < e_opt) {
        e_opt = e_new;
        x_opt = x_cur;
      }
      if (cfg.adaptive_flips && flips > 1) --flips;
    } else if (rec.trapped) {
      ++trap;
      if (cfg.adaptive_flips) flips = std::min(flips + 1, flip_cap);
    }
    rec.e_best = e_opt;
    tr.records.push_back(rec);
    tr.iters_used = iter;

    if (trap >= cfg.count_max) {
      if (epoch + 1 >= cfg.max_epochs) break;
      ++epoch;
      trap = 0;
      t = t0;
      x_cur = x_opt;
      e_o = e_opt;
      if (cfg.adaptive_flips) flips = std::min(cfg.flip_base, n);
    } else {
      t *= cfg.alpha;
    }
    cand = x_cur;
    perturb.apply(cand, flips, rng);
  }

  tr.epochs_used = epoch + 1;
  tr.x_best = x_opt;
  tr.e_best = e_opt;
  out.x = x_opt;
  out.energy = e_opt;
  return out;
}

AnnealResult sa_solve(const EnergyOracle& oracle, std::size_t n, const AnnealConfig& cfg) {
  cfg.validate();
  check_size(n);
  const double t0 = resolve_t0(oracle, n, cfg);
  Rng rng(cfg.seed);
  Perturber perturb(n);
  const std::size_t flips = std::min(cfg.flip_base, n);

  AnnealResult out;
  AnnealTrace& tr = out.trace;
  tr.t0 = t0;
  tr.records.reserve(std::min<std::size_t>(cfg.max_iters, 1u << 16));

  BinaryVector x_cur = random_bits(n, rng);
  double e_o = oracle(x_cur);
  tr.initial_energy = e_o;
  BinaryVector x_opt = x_cur;
  double e_opt = e_o;
  double t = t0;

  for (std::size_t iter = 1; iter <= cfg.max_iters; ++iter) {
    BinaryVector cand = x_cur;
    perturb.apply(cand, flips, rng);
    const double e_new = oracle(cand);
    IterationRecord rec{iter, 0, e_new, e_o, 0.0, false, false, t, flips};
    if (e_new <= e_o || metropolis(e_new - e_o, t, rng)) {
      rec.accepted = true;
      x_cur = std::move(cand);
      e_o = e_new;
      if (e_new < e_opt) {
        e_opt = e_new;
        x_opt = x_cur;
      }
    }
    rec.e_best = e_opt;
    tr.records.push_back(rec);
    tr.iters_used = iter;
    t *= cfg.alpha;
  }

  tr.epochs_used = 1;
  tr.x_best = x_opt;
  tr.e_best = e_opt;
  out.x = x_opt;
  out.energy = e_opt;
  return out;
}

std::optional<std::size_t> iterations_to_reach(const AnnealTrace& trace, double target, double tol) {
  if (trace.initial_energy <= target + tol) return std::size_t{0};
  for (const auto& r : trace.records)
    if (r.e_best <= target + tol) return r.iter;
  return std::nullopt;
}

std::vector<AnnealResult> run_trials(const EnergyOracle& oracle, std::size_t n, const AnnealConfig& cfg,
                                     Solver solver, std::size_t trials, std::size_t jobs) {
  cfg.validate();
  std::vector<AnnealResult> results(trials);
  std::vector<std::string> errors(trials);
  const auto count = static_cast<long long>(trials);
#ifdef _OPENMP
  const int threads = jobs == 0 ? omp_get_max_threads() : static_cast<int>(jobs);
#pragma omp parallel for schedule(dynamic) num_threads(threads)
#endif
  for (long long t = 0; t < count; ++t) {
    AnnealConfig c = cfg;
    c.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(t));
    try {
      results[t] = solver == Solver::Mesa ? mesa_solve(oracle, n, c) : sa_solve(oracle, n, c);
    } catch (const std::exception& e) {
      errors[t] = e.what();
    }
  }
  (void)jobs;
  for (const auto& e : errors)
    if (!e.empty()) throw Error("trial failed: " + e);
  return results;
}

double success_rate(std::span<const AnnealResult> results, double optimum,
                    const std::function<double(const AnnealResult&)>& score) {
  if (results.empty()) return 0.0;
  std::size_t hits = 0;
  for (const auto& r : results) {
    const double s = score ? score(r) : r.energy;
    if (s <= optimum + 1e-9) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(results.size());
}

double success_rate(const EnergyOracle& oracle, std::size_t n, const AnnealConfig& cfg, Solver solver,
                    std::size_t trials, double optimum, std::size_t jobs) {
  const auto results = run_trials(oracle, n, cfg, solver, trials, jobs);
  return success_rate(results, optimum);
}

}  // namespace cimq
