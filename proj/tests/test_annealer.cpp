#include <cmath>
#include <set>
#include <sstream>

#include "cimqubo/annealer.hpp"
#include "cimqubo/brute_force.hpp"
#include "cimqubo/errors.hpp"
#include "cimqubo/rng.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace cimq;
using testing_support::random_qubo;

namespace {

EnergyOracle zero_oracle() {
  return [](std::span<const Bit>) { return 0.0; };
}

// n = 4 instance with a unique minimum.
QuboProblem unique_min_problem() {
  for (std::uint64_t seed = 1;; ++seed) {
    const QuboProblem q = random_qubo(4, 0.8, seed);
    if (brute_force_minimize(q).multiplicity == 1) return q;
  }
}

std::string csv_of(const AnnealTrace& t) {
  std::ostringstream os;
  t.write_csv(os);
  return os.str();
}

}  // namespace

TEST_CASE("zero oracle: best is 0 immediately and every iteration is trapped") {
  AnnealConfig cfg;
  cfg.max_iters = 100000;
  const AnnealResult r = mesa_solve(zero_oracle(), 4, cfg);
  CHECK(r.energy == 0.0);
  REQUIRE_FALSE(r.trace.records.empty());
  CHECK(r.trace.records.front().e_best == 0.0);
  for (const auto& rec : r.trace.records) {
    CHECK(rec.trapped);
    CHECK_FALSE(rec.accepted);
  }
  CHECK(r.trace.epochs_used == cfg.max_epochs);
  CHECK(r.trace.iters_used == cfg.max_epochs * cfg.count_max);
  CHECK(iterations_to_reach(r.trace, 0.0) == std::size_t{0});

  const AnnealResult s = sa_solve(zero_oracle(), 4, cfg);
  CHECK(s.energy == 0.0);
  CHECK(s.trace.iters_used == cfg.max_iters);
}

TEST_CASE("MESA finds a unique n=4 minimum in at least 99 of 100 seeds") {
  const QuboProblem q = unique_min_problem();
  const auto bf = brute_force_minimize(q);
  AnnealConfig cfg;
  cfg.seed = 11;
  const auto results = run_trials(make_exact_oracle(q), 4, cfg, Solver::Mesa, 100);
  std::size_t hits = 0;
  for (const auto& r : results) hits += r.x == bf.minimizer;
  CHECK(hits >= 99);
  CHECK(success_rate(results, bf.energy) == doctest::Approx(hits / 100.0));
}

TEST_CASE("SA finds a unique n=4 minimum in at least 95 of 100 seeds") {
  const QuboProblem q = unique_min_problem();
  const auto bf = brute_force_minimize(q);
  AnnealConfig cfg;
  cfg.seed = 12;
  cfg.max_iters = 2000;
  const double rate = success_rate(make_exact_oracle(q), 4, cfg, Solver::Sa, 100, bf.energy);
  CHECK(rate >= 0.95);
}

TEST_CASE("traces are reproducible bit for bit and independent of jobs") {
  const QuboProblem q = random_qubo(14, 0.3, 5);
  AnnealConfig cfg;
  cfg.seed = 99;
  cfg.max_iters = 3000;
  const auto a = mesa_solve(make_exact_oracle(q), 14, cfg);
  const auto b = mesa_solve(make_exact_oracle(q), 14, cfg);
  CHECK(csv_of(a.trace) == csv_of(b.trace));
  const auto serial = run_trials(make_exact_oracle(q), 14, cfg, Solver::Mesa, 6, 1);
  const auto parallel = run_trials(make_exact_oracle(q), 14, cfg, Solver::Mesa, 6, 3);
  for (std::size_t t = 0; t < 6; ++t) CHECK(csv_of(serial[t].trace) == csv_of(parallel[t].trace));
  cfg.seed = 100;
  CHECK(csv_of(mesa_solve(make_exact_oracle(q), 14, cfg).trace) != csv_of(a.trace));
}

TEST_CASE("trace invariants: monotone best, epoch chaining, best value bookkeeping") {
  const QuboProblem q = random_qubo(16, 0.3, 21);
  const EnergyOracle oracle = make_exact_oracle(q);
  for (bool adaptive : {false, true}) {
    AnnealConfig cfg;
    cfg.seed = 5;
    cfg.max_iters = 5000;
    cfg.adaptive_flips = adaptive;
    const AnnealResult r = mesa_solve(oracle, 16, cfg);
    const auto& recs = r.trace.records;
    double best = r.trace.initial_energy;
    double prev_best = best;
    for (std::size_t k = 0; k < recs.size(); ++k) {
      const auto& rec = recs[k];
      CHECK(rec.iter == k + 1);
      if (rec.accepted) best = std::min(best, rec.e_new);
      CHECK(rec.e_best == best);
      CHECK(rec.e_best <= prev_best);
      prev_best = rec.e_best;
      CHECK(!(rec.accepted && rec.trapped));
      CHECK(rec.flips >= 1);
      if (adaptive) CHECK(rec.flips <= 4);
      if (k + 1 < recs.size() && recs[k + 1].epoch != rec.epoch) {
        CHECK(recs[k + 1].epoch == rec.epoch + 1);
        CHECK(recs[k + 1].e_o == rec.e_best);  // new epoch starts from the global best
        CHECK(recs[k + 1].temperature == r.trace.t0);
      }
    }
    CHECK(r.energy == best);
    CHECK(r.energy == energy(q, r.x));
  }
}

TEST_CASE("epochs end after count_max trapped iterations") {
  AnnealConfig cfg;
  cfg.count_max = 7;
  cfg.max_epochs = 3;
  const AnnealResult r = mesa_solve(zero_oracle(), 5, cfg);
  CHECK(r.trace.iters_used == 21);
  CHECK(r.trace.records[6].epoch == 0);
  CHECK(r.trace.records[7].epoch == 1);
}

TEST_CASE("uphill acceptance frequency follows exp(-dE/T)") {
  // Oracle: E = 0 for the all-zero vector, dE otherwise. Start at zeros (x_opt),
  // force the annealer to propose a flip every iteration at fixed temperature.
  const double dE = 1.0, T = 1.5;
  const std::size_t n = 3;
  const EnergyOracle oracle = [&](std::span<const Bit> x) {
    for (Bit b : x)
      if (b) return dE;
    return 0.0;
  };
  // Count, over many independent SA runs, how often the first uphill proposal
  // from the ground state is accepted. alpha close to 1 keeps T essentially fixed.
  std::size_t proposals = 0, accepted = 0;
  for (std::uint64_t seed = 1; seed <= 4000; ++seed) {
    AnnealConfig cfg;
    cfg.t0 = T;
    cfg.alpha = 1.0 - 1e-12;
    cfg.max_iters = 40;
    cfg.seed = seed;
    const AnnealResult r = sa_solve(oracle, n, cfg);
    for (const auto& rec : r.trace.records) {
      if (rec.e_o == 0.0 && rec.e_new == dE) {
        ++proposals;
        accepted += rec.accepted;
      }
    }
  }
  REQUIRE(proposals > 10000);
  const double p = std::exp(-dE / T);
  const double freq = static_cast<double>(accepted) / static_cast<double>(proposals);
  const double sigma = std::sqrt(p * (1 - p) / static_cast<double>(proposals));
  CHECK(std::abs(freq - p) <= 3 * sigma);
}

TEST_CASE("perturbation toggles exactly `flips` distinct bits") {
  // With a flips-counting oracle the candidate's Hamming distance from the
  // current state is visible through E_new when the state never moves.
  const std::size_t n = 12;
  for (std::size_t flips : {1u, 2u, 5u, 12u}) {
    const EnergyOracle oracle = [&](std::span<const Bit> x) {
      // Energy: number of ones; never accepted uphill at tiny T.
      double e = 0;
      for (Bit b : x) e += b;
      return e;
    };
    AnnealConfig cfg;
    cfg.flip_base = flips;
    cfg.t0 = 1e-300;
    cfg.max_iters = 200;
    cfg.trap_on_reject = true;
    const AnnealResult r = mesa_solve(oracle, n, cfg);
    for (const auto& rec : r.trace.records) {
      CHECK(rec.flips == flips);
      // |E_new - E_o| <= flips and has the parity of flips
      const double d = std::abs(rec.e_new - rec.e_o);
      CHECK(d <= static_cast<double>(flips));
      CHECK(static_cast<long long>(std::llround(rec.e_new - rec.e_o + 100)) % 2 ==
            static_cast<long long>((flips + 100) % 2));
    }
  }
}

TEST_CASE("automatic T0 is at least 1 and uses the spread of random energies") {
  const QuboProblem q = random_qubo(20, 0.5, 3);
  AnnealConfig cfg;
  const double t0 = resolve_t0(make_exact_oracle(q), 20, cfg);
  CHECK(t0 >= 1.0);
  CHECK(resolve_t0(zero_oracle(), 3, cfg) == 1.0);
  cfg.t0 = 2.5;
  CHECK(resolve_t0(zero_oracle(), 3, cfg) == 2.5);
}

TEST_CASE("configuration errors") {
  auto bad = [](auto mutate) {
    AnnealConfig c;
    mutate(c);
    return c;
  };
  CHECK_THROWS_AS(mesa_solve(zero_oracle(), 3, bad([](AnnealConfig& c) { c.alpha = 1.0; })), ConfigError);
  CHECK_THROWS_AS(mesa_solve(zero_oracle(), 3, bad([](AnnealConfig& c) { c.alpha = 0.0; })), ConfigError);
  CHECK_THROWS_AS(mesa_solve(zero_oracle(), 3, bad([](AnnealConfig& c) { c.count_max = 0; })), ConfigError);
  CHECK_THROWS_AS(mesa_solve(zero_oracle(), 3, bad([](AnnealConfig& c) { c.flip_base = 0; })), ConfigError);
  CHECK_THROWS_AS(sa_solve(zero_oracle(), 3, bad([](AnnealConfig& c) { c.eps_trap = -1; })), ConfigError);
  CHECK_THROWS_AS(mesa_solve(zero_oracle(), 0, AnnealConfig{}), DimensionError);
}

TEST_CASE("trace CSV layout") {
  AnnealConfig cfg;
  cfg.max_iters = 3;
  const AnnealResult r = sa_solve(zero_oracle(), 2, cfg);
  std::istringstream is(csv_of(r.trace));
  std::string header, row;
  std::getline(is, header);
  CHECK(header == "iter,epoch,E_new,E_o,E_best,accepted,trapped,T,flips");
  std::getline(is, row);
  CHECK(row.rfind("1,0,0,0,0,1,0,", 0) == 0);
}

TEST_CASE("success rate of a trivial problem is 1") {
  QuboProblem q(3);
  q.add_linear(0, 1);
  AnnealConfig cfg;
  cfg.max_iters = 300;
  CHECK(success_rate(make_exact_oracle(q), 3, cfg, Solver::Mesa, 10, 0.0) == 1.0);
  CHECK(success_rate(make_exact_oracle(q), 3, cfg, Solver::Sa, 10, 0.0) == 1.0);
}

TEST_CASE("seed derivation spreads trial indices") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t t = 0; t < 1000; ++t) seen.insert(derive_seed(7, t));
  CHECK(seen.size() == 1000);
  CHECK(derive_seed(7, 3) != derive_seed(8, 3));
  Rng a(5), b(5);
  for (int i = 0; i < 10; ++i) CHECK(a.next() == b.next());
}

TEST_CASE("only flat moves count as trapped unless trap_on_reject is set") {
  const QuboProblem q = random_qubo(12, 0.5, 21);
  AnnealConfig cfg;
  cfg.max_iters = 3000;
  for (bool tor : {false, true}) {
    cfg.trap_on_reject = tor;
    const AnnealResult r = mesa_solve(make_exact_oracle(q), q.n(), cfg);
    std::size_t rejected_uphill_trapped = 0;
    for (const auto& rec : r.trace.records) {
      const double d = rec.e_new - rec.e_o;
      if (rec.trapped && d > cfg.eps_trap) ++rejected_uphill_trapped;
      if (!rec.accepted && d > cfg.eps_trap) CHECK(rec.trapped == tor);
      if (std::abs(d) <= cfg.eps_trap) CHECK(rec.trapped);
    }
    CHECK((rejected_uphill_trapped > 0) == tor);
  }
}
