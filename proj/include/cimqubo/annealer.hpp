#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "cimqubo/compression.hpp"
#include "cimqubo/qubo.hpp"

namespace cimq {

// Must be callable concurrently when used with run_trials(jobs > 1).
using EnergyOracle = std::function<double(std::span<const Bit>)>;

EnergyOracle make_exact_oracle(const QuboProblem& q);
EnergyOracle make_compressed_oracle(const CompressedQubo& c);

struct AnnealConfig {
  double t0 = 0.0;            // <= 0: max(1, stddev of 100 random-x energies)
  double alpha = 0.98;        // per-iteration geometric cooling
  double eps_trap = 1e-9;     // |E_new - E_o| <= eps counts as trapped
  std::size_t count_max = 20; // trap count that ends an epoch
  std::size_t max_epochs = 50;
  std::size_t max_iters = 10000;
  std::size_t flip_base = 1;
  bool adaptive_flips = false;  // -1 on accept, +1 on trap, clamped to [1, n/4]
  bool trap_on_reject = false;  // also count a rejected uphill move as trapped
  std::uint64_t seed = 1;

  // Throws ConfigError.
  void validate() const;
};

struct IterationRecord {
  std::size_t iter;
  std::size_t epoch;
  double e_new;
  double e_o;     // reference energy the candidate was compared against
  double e_best;  // global best after this iteration
  bool accepted;
  bool trapped;
  double temperature;
  std::size_t flips;
};

struct AnnealTrace {
  double initial_energy = 0.0;
  double t0 = 0.0;
  std::vector<IterationRecord> records;
  BinaryVector x_best;
  double e_best = 0.0;
  std::size_t iters_used = 0;
  std::size_t epochs_used = 0;

  // Header: iter,epoch,E_new,E_o,E_best,accepted,trapped,T,flips
  void write_csv(std::ostream& os) const;
};

struct AnnealResult {
  BinaryVector x;
  double energy = 0.0;
  AnnealTrace trace;
};

// Multi-epoch simulated annealing. An epoch ends after count_max trapped
// iterations; the next epoch restarts at t0 from the best solution so far.
AnnealResult mesa_solve(const EnergyOracle& oracle, std::size_t n, const AnnealConfig& cfg);

// Single-epoch Metropolis baseline with the same cooling and trace format.
AnnealResult sa_solve(const EnergyOracle& oracle, std::size_t n, const AnnealConfig& cfg);

enum class Solver { Mesa, Sa };

// Initial temperature actually used for cfg (resolves t0 <= 0).
double resolve_t0(const EnergyOracle& oracle, std::size_t n, const AnnealConfig& cfg);

// First iteration at which E_best <= target + tol (0 = the initial state);
// nullopt if the trace never gets there.
std::optional<std::size_t> iterations_to_reach(const AnnealTrace& trace, double target, double tol = 1e-9);

// Independent trials with seeds derive_seed(cfg.seed, t). Runs on `jobs`
// OpenMP threads (0 = runtime default). Results are ordered by trial index and
// do not depend on jobs.
std::vector<AnnealResult> run_trials(const EnergyOracle& oracle, std::size_t n, const AnnealConfig& cfg,
                                     Solver solver, std::size_t trials, std::size_t jobs = 1);

// Fraction of results whose score (default: oracle energy) is <= optimum + 1e-9.
double success_rate(std::span<const AnnealResult> results, double optimum,
                    const std::function<double(const AnnealResult&)>& score = {});

double success_rate(const EnergyOracle& oracle, std::size_t n, const AnnealConfig& cfg, Solver solver,
                    std::size_t trials, double optimum, std::size_t jobs = 1);

}  // namespace cimq
