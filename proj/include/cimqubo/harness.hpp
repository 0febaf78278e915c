#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "cimqubo/annealer.hpp"
#include "cimqubo/compression.hpp"
#include "cimqubo/converters.hpp"
#include "cimqubo/crossbar.hpp"
#include "cimqubo/graph.hpp"
#include "cimqubo/qubo.hpp"

namespace cimq {

enum class ProblemKind { MaxCut, Coloring, Pfp, Qubo };

ProblemKind parse_problem_kind(const std::string& s);  // throws ConfigError
std::string to_string(ProblemKind k);

// Everything a pipeline run needs. Set from a key=value file and/or CLI flags;
// keys are listed in config_keys().
struct RunConfig {
  ProblemKind kind = ProblemKind::Qubo;
  std::string input;              // graph file (maxcut/coloring) or qubo file
  std::size_t colors = 3;
  std::uint64_t pfp_n = 0;
  std::optional<std::size_t> pfp_k, pfp_l;  // default: suggest_bit_lengths
  double coloring_penalty = 1.0;
  double reduction_penalty = 0.0;  // <= 0: automatic

  bool compress = false;
  std::string oracle = "exact";    // exact | hw
  bool ternary = false;            // hw: 2-cell ternary mapping instead of bit slicing
  unsigned bits = 5;
  DeviceParams device;
  AdcParams adc;
  std::uint64_t device_seed = 0;   // 0: derived from seed
  std::size_t max_tiles = 4096;

  std::string solver = "mesa";     // mesa | sa
  AnnealConfig anneal;
  bool eps_set = false;            // eps_trap given explicitly
  std::size_t trials = 1;
  std::size_t jobs = 1;
  std::optional<double> target;    // success threshold; default: known optimum
  std::string out_dir;             // empty: no files written
  bool write_traces = true;

  void validate() const;  // throws ConfigError
};

std::vector<std::string> config_keys();

// Applies one key=value setting; `line` is used in error messages.
void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value, std::size_t line = 0);

// Reads "key = value" lines; '#' starts a comment. Throws ParseError for
// malformed lines and ConfigError for unknown keys or bad values.
void read_config(std::istream& is, RunConfig& cfg);
void read_config_file(const std::string& path, RunConfig& cfg);

// A parsed instance together with its decoder metadata.
struct ProblemInstance {
  ProblemKind kind = ProblemKind::Qubo;
  std::string source;
  QuboProblem qubo;
  std::optional<Graph> graph;
  std::optional<ColoringEncoding> coloring;
  std::optional<FactorizationEncoding> factoring;
};

ProblemInstance build_instance(const RunConfig& cfg);

// Domain view of an assignment (cut value, coloring validity, factors).
nlohmann::json decode_metric(const ProblemInstance& inst, std::span<const Bit> x);

// Encoding metadata written next to converted QUBO files.
nlohmann::json encoding_json(const ProblemInstance& inst);

// Identity bilinear form of q: every variable is both a row and a column and
// Q' holds the strict upper triangle.
CompressedQubo as_bilinear(const QuboProblem& q);

nlohmann::json stats_json(const CompressionStats& s);
nlohmann::json stats_json(const SignSplitStats& s);
nlohmann::json anneal_json(const AnnealConfig& c);

struct TrialSummary {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  double e_best = 0.0;      // as seen by the oracle
  double energy = 0.0;      // exact energy of the returned vector
  bool success = false;
  std::optional<std::size_t> iterations_to_target;
  std::size_t iterations = 0;
  std::size_t epochs = 0;
  BinaryVector x;
  std::string trace_path;
};

struct SolveOutcome {
  nlohmann::json report;
  std::vector<TrialSummary> trials;
  std::optional<double> success_rate;
  double mean_e_best = 0.0;
};

// Pipelines. Each writes its outputs when paths are given and returns the
// JSON that is also printed by the CLI.
nlohmann::json cmd_convert(const RunConfig& cfg, const std::string& out_path);
nlohmann::json cmd_compress(const std::string& qubo_path, const std::string& out_path);
nlohmann::json cmd_stats(const RunConfig& cfg);
SolveOutcome cmd_solve(const RunConfig& cfg);

// axis: bits | sigma | adc_bits. One report per value under out_dir/<axis>_<value>/
// and a combined sweep.csv (value,success_rate,mean_E_best).
nlohmann::json cmd_sweep(const RunConfig& cfg, const std::string& axis, const std::vector<std::string>& values);

// CLI exit code for an exception (0 never returned).
int exit_code_for(const std::exception& e);

}  // namespace cimq
