#include "cimqubo/harness.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "cimqubo/brute_force.hpp"
#include "cimqubo/errors.hpp"
#include "cimqubo/rng.hpp"
#include "cimqubo/text.hpp"

namespace cimq {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kDeviceStream = 0xdeu;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true" || v == "on" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "off" || v == "no") return false;
  throw ConfigError(key + ": expected a boolean, got '" + v + "'");
}

double parse_real(const std::string& key, const std::string& v) {
  try {
    return text::parse_double(v, 0);
  } catch (const ParseError&) {
    throw ConfigError(key + ": expected a number, got '" + v + "'");
  }
}

std::uint64_t parse_count(const std::string& key, const std::string& v) {
  long long r = 0;
  try {
    r = text::parse_int(v, 0);
  } catch (const ParseError&) {
    throw ConfigError(key + ": expected an integer, got '" + v + "'");
  }
  if (r < 0) throw ConfigError(key + ": must be >= 0");
  return static_cast<std::uint64_t>(r);
}

using Setter = std::function<void(RunConfig&, const std::string& key, const std::string& value)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"kind", [](RunConfig& c, auto&, auto& v) { c.kind = parse_problem_kind(v); }},
      {"input", [](RunConfig& c, auto&, auto& v) { c.input = v; }},
      {"colors", [](RunConfig& c, auto& k, auto& v) { c.colors = parse_count(k, v); }},
      {"pfp", [](RunConfig& c, auto& k, auto& v) {
         c.pfp_n = parse_count(k, v);
         c.kind = ProblemKind::Pfp;
       }},
      {"pfp_k", [](RunConfig& c, auto& k, auto& v) { c.pfp_k = parse_count(k, v); }},
      {"pfp_l", [](RunConfig& c, auto& k, auto& v) { c.pfp_l = parse_count(k, v); }},
      {"coloring_penalty", [](RunConfig& c, auto& k, auto& v) { c.coloring_penalty = parse_real(k, v); }},
      {"reduction_penalty", [](RunConfig& c, auto& k, auto& v) { c.reduction_penalty = parse_real(k, v); }},
      {"compress", [](RunConfig& c, auto& k, auto& v) { c.compress = parse_bool(k, v); }},
      {"oracle", [](RunConfig& c, auto&, auto& v) { c.oracle = v; }},
      {"ternary", [](RunConfig& c, auto& k, auto& v) { c.ternary = parse_bool(k, v); }},
      {"bits", [](RunConfig& c, auto& k, auto& v) { c.bits = static_cast<unsigned>(parse_count(k, v)); }},
      {"sigma", [](RunConfig& c, auto& k, auto& v) { c.device.i_on_rel_sigma = parse_real(k, v); }},
      {"off_ratio", [](RunConfig& c, auto& k, auto& v) { c.device.i_off_ratio = parse_real(k, v); }},
      {"die_sigma", [](RunConfig& c, auto& k, auto& v) { c.device.die_rel_sigma = parse_real(k, v); }},
      {"i_on", [](RunConfig& c, auto& k, auto& v) { c.device.i_on_mean = parse_real(k, v); }},
      {"adc_bits", [](RunConfig& c, auto& k, auto& v) { c.adc.bits = static_cast<unsigned>(parse_count(k, v)); }},
      {"adc_full_scale", [](RunConfig& c, auto& k, auto& v) { c.adc.full_scale = parse_real(k, v); }},
      {"device_seed", [](RunConfig& c, auto& k, auto& v) { c.device_seed = parse_count(k, v); }},
      {"max_tiles", [](RunConfig& c, auto& k, auto& v) { c.max_tiles = parse_count(k, v); }},
      {"solver", [](RunConfig& c, auto&, auto& v) { c.solver = v; }},
      {"t0", [](RunConfig& c, auto& k, auto& v) { c.anneal.t0 = parse_real(k, v); }},
      {"alpha", [](RunConfig& c, auto& k, auto& v) { c.anneal.alpha = parse_real(k, v); }},
      {"eps_trap", [](RunConfig& c, auto& k, auto& v) {
         c.anneal.eps_trap = parse_real(k, v);
         c.eps_set = true;
       }},
      {"count_max", [](RunConfig& c, auto& k, auto& v) { c.anneal.count_max = parse_count(k, v); }},
      {"max_epochs", [](RunConfig& c, auto& k, auto& v) { c.anneal.max_epochs = parse_count(k, v); }},
      {"max_iters", [](RunConfig& c, auto& k, auto& v) { c.anneal.max_iters = parse_count(k, v); }},
      {"flip_base", [](RunConfig& c, auto& k, auto& v) { c.anneal.flip_base = parse_count(k, v); }},
      {"adaptive_flips", [](RunConfig& c, auto& k, auto& v) { c.anneal.adaptive_flips = parse_bool(k, v); }},
      {"trap_on_reject", [](RunConfig& c, auto& k, auto& v) { c.anneal.trap_on_reject = parse_bool(k, v); }},
      {"seed", [](RunConfig& c, auto& k, auto& v) { c.anneal.seed = parse_count(k, v); }},
      {"trials", [](RunConfig& c, auto& k, auto& v) { c.trials = parse_count(k, v); }},
      {"jobs", [](RunConfig& c, auto& k, auto& v) { c.jobs = parse_count(k, v); }},
      {"target", [](RunConfig& c, auto& k, auto& v) { c.target = parse_real(k, v); }},
      {"out", [](RunConfig& c, auto&, auto& v) { c.out_dir = v; }},
      {"traces", [](RunConfig& c, auto& k, auto& v) { c.write_traces = parse_bool(k, v); }},
  };
  return table;
}

std::ofstream open_out(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream os(p);
  if (!os) throw Error("cannot write " + p.string());
  return os;
}

std::ifstream open_in(const std::string& p) {
  std::ifstream is(p);
  if (!is) throw ConfigError("cannot open " + p);
  return is;
}

void write_json(const fs::path& p, const json& j) { open_out(p) << j.dump(2) << '\n'; }

json vector_json(std::span<const Bit> x) {
  std::string s;
  s.reserve(x.size());
  for (Bit b : x) s.push_back(b ? '1' : '0');
  return s;
}

json index_json(const std::vector<std::size_t>& v) { return json(v); }

std::uint64_t device_seed(const RunConfig& cfg) {
  return cfg.device_seed ? cfg.device_seed : derive_seed(cfg.anneal.seed, kDeviceStream);
}

// Optimum used for success: explicit target, the zero ground state of
// satisfiable penalty encodings, or brute force for small instances.
std::optional<double> known_optimum(const RunConfig& cfg, const ProblemInstance& inst) {
  if (cfg.target) return cfg.target;
  if (inst.kind == ProblemKind::Pfp) return 0.0;
  if (inst.qubo.n() <= 20) return brute_force_minimize(inst.qubo).energy;
  if (inst.kind == ProblemKind::Coloring) return 0.0;
  return std::nullopt;
}

struct Pipeline {
  EnergyOracle oracle;
  std::optional<Compression> compression;
  json oracle_info;
  double eps_trap = 1e-9;
};

void check_tiles(const CrossbarStack& s, std::size_t cap) {
  if (s.tile_count() > cap)
    throw CapacityError("crossbar needs " + std::to_string(s.tile_count()) + " tiles, limit is " +
                        std::to_string(cap));
}

Pipeline build_pipeline(const RunConfig& cfg, const ProblemInstance& inst) {
  Pipeline pl;
  CompressedQubo form;
  if (cfg.compress) {
    pl.compression = compress(inst.qubo);
    form = pl.compression->compressed;
  } else {
    form = as_bilinear(inst.qubo);
  }
  pl.oracle_info = {{"kind", cfg.oracle}, {"p", form.p()}, {"q", form.q()}};
  if (cfg.oracle == "exact") {
    pl.oracle = cfg.compress ? make_compressed_oracle(form) : make_exact_oracle(inst.qubo);
    pl.eps_trap = cfg.anneal.eps_trap;
    return pl;
  }
  const std::uint64_t dseed = device_seed(cfg);
  HwOracle hw = cfg.ternary ? make_ternary_hw_oracle(form, cfg.device, cfg.adc, dseed)
                            : make_hw_oracle(form, cfg.bits, cfg.device, cfg.adc, dseed);
  check_tiles(*hw.stack, cfg.max_tiles);
  pl.oracle = hw.oracle;
  pl.eps_trap = cfg.eps_set ? cfg.anneal.eps_trap : hw.eps_trap;
  pl.oracle_info["ternary"] = cfg.ternary;
  pl.oracle_info["bits"] = cfg.ternary ? 0u : cfg.bits;
  pl.oracle_info["device_seed"] = dseed;
  pl.oracle_info["tiles"] = hw.stack->tile_count();
  pl.oracle_info["planes"] = hw.stack->planes().size();
  pl.oracle_info["scale"] = hw.stack->scale();
  pl.oracle_info["energy_lsb"] = hw.energy_lsb;
  pl.oracle_info["sigma"] = cfg.device.i_on_rel_sigma;
  pl.oracle_info["off_ratio"] = cfg.device.i_off_ratio;
  pl.oracle_info["die_sigma"] = cfg.device.die_rel_sigma;
  pl.oracle_info["adc_bits"] = cfg.adc.bits;
  pl.oracle_info["adc_full_scale"] = hw.stack->full_scale(cfg.adc);
  return pl;
}

std::string value_tag(const std::string& v) {
  std::string t;
  for (char ch : v) t.push_back(std::isalnum(static_cast<unsigned char>(ch)) || ch == '.' || ch == '-' ? ch : '_');
  return t;
}

}  // namespace

ProblemKind parse_problem_kind(const std::string& s) {
  if (s == "maxcut") return ProblemKind::MaxCut;
  if (s == "coloring") return ProblemKind::Coloring;
  if (s == "pfp") return ProblemKind::Pfp;
  if (s == "qubo") return ProblemKind::Qubo;
  throw ConfigError("unknown problem kind '" + s + "' (maxcut|coloring|pfp|qubo)");
}

std::string to_string(ProblemKind k) {
  switch (k) {
    case ProblemKind::MaxCut: return "maxcut";
    case ProblemKind::Coloring: return "coloring";
    case ProblemKind::Pfp: return "pfp";
    case ProblemKind::Qubo: return "qubo";
  }
  return "?";
}

void RunConfig::validate() const {
  if (kind == ProblemKind::Pfp) {
    if (pfp_n == 0) throw ConfigError("pfp needs an integer to factor");
  } else if (input.empty()) {
    throw ConfigError(to_string(kind) + " needs an input file");
  } else if (!fs::exists(input)) {
    throw ConfigError("input file not found: " + input);
  }
  if (kind == ProblemKind::Coloring && colors == 0) throw ConfigError("colors must be >= 1");
  if (oracle != "exact" && oracle != "hw") throw ConfigError("oracle must be exact or hw");
  if (solver != "mesa" && solver != "sa") throw ConfigError("solver must be mesa or sa");
  if (oracle == "hw") {
    device.validate();
    if (!ternary && (bits < 1 || bits > 24)) throw ConfigError("bits must be in [1, 24]");
    if (adc.bits > 24) throw ConfigError("adc_bits must be <= 24");
    if (adc.full_scale < 0.0) throw ConfigError("adc_full_scale must be >= 0");
  }
  if (trials == 0) throw ConfigError("trials must be >= 1");
  anneal.validate();
}

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const auto& [k, _] : setters()) keys.push_back(k);
  return keys;
}

void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value, std::size_t line) {
  const auto it = setters().find(key);
  const std::string where = line ? "line " + std::to_string(line) + ": " : "";
  if (it == setters().end()) throw ConfigError(where + "unknown config key '" + key + "'");
  try {
    it->second(cfg, key, value);
  } catch (const ConfigError& e) {
    throw ConfigError(where + e.what());
  }
}

void read_config(std::istream& is, RunConfig& cfg) {
  std::string raw;
  std::size_t line = 0;
  while (std::getline(is, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ParseError("expected key = value", line);
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (key.empty()) throw ParseError("missing key", line);
    apply_config_entry(cfg, key, value, line);
  }
}

void read_config_file(const std::string& path, RunConfig& cfg) {
  auto is = open_in(path);
  read_config(is, cfg);
}

ProblemInstance build_instance(const RunConfig& cfg) {
  ProblemInstance inst;
  inst.kind = cfg.kind;
  switch (cfg.kind) {
    case ProblemKind::MaxCut: {
      inst.source = cfg.input;
      inst.graph = read_graph_file(cfg.input);
      inst.qubo = maxcut_to_qubo(*inst.graph);
      break;
    }
    case ProblemKind::Coloring: {
      inst.source = cfg.input;
      inst.graph = read_graph_file(cfg.input);
      auto cq = coloring_to_qubo(*inst.graph, cfg.colors, cfg.coloring_penalty);
      inst.qubo = std::move(cq.qubo);
      inst.coloring = std::move(cq.encoding);
      break;
    }
    case ProblemKind::Pfp: {
      inst.source = "pfp:" + std::to_string(cfg.pfp_n);
      auto [k, l] = suggest_bit_lengths(cfg.pfp_n);
      inst.factoring = FactorizationEncoding(cfg.pfp_n, cfg.pfp_k.value_or(k), cfg.pfp_l.value_or(l));
      inst.qubo = pfp_to_qubo(*inst.factoring, cfg.reduction_penalty);
      break;
    }
    case ProblemKind::Qubo: {
      inst.source = cfg.input;
      auto is = open_in(cfg.input);
      inst.qubo = read_qubo(is);
      break;
    }
  }
  return inst;
}

json decode_metric(const ProblemInstance& inst, std::span<const Bit> x) {
  switch (inst.kind) {
    case ProblemKind::MaxCut: {
      const Bipartition b = decode_cut(x);
      return {{"cut_value", cut_value(*inst.graph, x)}, {"side_a", index_json(b.side_a)}};
    }
    case ProblemKind::Coloring: {
      const ColoringReport r = decode_coloring(*inst.coloring, x);
      json colors = json::array();
      for (const auto& c : r.colors) colors.push_back(c.size() == 1 ? json(c[0]) : json(nullptr));
      json conflicts = json::array();
      for (const auto& [u, v] : r.conflicts) conflicts.push_back({u, v});
      return {{"valid", r.valid},
              {"colors", colors},
              {"uncolored", index_json(r.uncolored)},
              {"multicolored", index_json(r.multicolored)},
              {"conflicts", conflicts}};
    }
    case ProblemKind::Pfp: {
      const FactorDecode d = decode_factors(*inst.factoring, x);
      return {{"p", d.p}, {"q", d.q}, {"consistent", d.consistent}};
    }
    case ProblemKind::Qubo: return json::object();
  }
  return json::object();
}

json encoding_json(const ProblemInstance& inst) {
  json j = {{"kind", to_string(inst.kind)}, {"source", inst.source}, {"n_variables", inst.qubo.n()}};
  if (inst.graph) {
    j["vertices"] = inst.graph->n_vertices();
    j["edges"] = inst.graph->n_edges();
  }
  if (inst.coloring) {
    j["colors"] = inst.coloring->colors();
    j["layout"] = "var(vertex, color) = vertex * colors + color";
  }
  if (inst.factoring) {
    const auto& f = *inst.factoring;
    j["target"] = f.target();
    j["k"] = f.k();
    j["l"] = f.l();
    json p = json::array(), q = json::array(), z = json::array(), carries = json::object();
    for (std::size_t a = 1; a <= f.k(); ++a) p.push_back(f.p_index(a));
    for (std::size_t b = 1; b <= f.l(); ++b) q.push_back(f.q_index(b));
    for (std::size_t a = 1; a <= f.k(); ++a)
      for (std::size_t b = 1; b <= f.l(); ++b) z.push_back({{"a", a}, {"b", b}, {"var", f.z_index(a, b)}});
    for (std::size_t s = 0; s <= f.top_column(); ++s)
      if (!f.carry_bits(s).empty()) carries[std::to_string(s)] = f.carry_bits(s);
    j["p_bits"] = p;
    j["q_bits"] = q;
    j["z_bits"] = z;
    j["carry_bits"] = carries;
  }
  return j;
}

CompressedQubo as_bilinear(const QuboProblem& q) {
  CompressedQubo c;
  c.source_n = q.n();
  c.constant = q.constant();
  c.linear = q.linear();
  c.row_vars.resize(q.n());
  for (std::size_t i = 0; i < q.n(); ++i) c.row_vars[i] = i;
  c.col_vars = c.row_vars;
  c.qprime = Matrix(q.n(), q.n());
  for (const auto& [ij, v] : q.offdiag()) c.qprime(ij.first, ij.second) = v;
  return c;
}

json stats_json(const CompressionStats& s) {
  return {{"n", s.n},
          {"cells_before", s.cells_before},
          {"cells_after", s.cells_after},
          {"rows_removed", s.rows_removed},
          {"cols_removed", s.cols_removed},
          {"sparsity_before", s.sparsity_before},
          {"sparsity_before_with_diag", s.sparsity_before_with_diag},
          {"sparsity_after", s.sparsity_after},
          {"sparsity_reduction", s.sparsity_reduction},
          {"sparsity_reduction_with_diag", s.sparsity_reduction_with_diag},
          {"chip_size_saving", s.chip_size_saving}};
}

json stats_json(const SignSplitStats& s) {
  return {{"cells_before", s.cells_before},     {"nonzeros_before", s.nonzeros_before},
          {"cells_after", s.cells_after},       {"nonzeros_after", s.nonzeros_after},
          {"sparsity_before", s.sparsity_before}, {"sparsity_after", s.sparsity_after},
          {"sparsity_reduction", s.sparsity_reduction}, {"chip_size_saving", s.chip_size_saving}};
}

json anneal_json(const AnnealConfig& c) {
  return {{"t0", c.t0},
          {"alpha", c.alpha},
          {"eps_trap", c.eps_trap},
          {"count_max", c.count_max},
          {"max_epochs", c.max_epochs},
          {"max_iters", c.max_iters},
          {"flip_base", c.flip_base},
          {"adaptive_flips", c.adaptive_flips},
          {"trap_on_reject", c.trap_on_reject},
          {"seed", c.seed}};
}

json cmd_convert(const RunConfig& cfg, const std::string& out_path) {
  cfg.validate();
  const ProblemInstance inst = build_instance(cfg);
  json enc = encoding_json(inst);
  if (!out_path.empty()) {
    auto os = open_out(out_path);
    write_qubo(os, inst.qubo);
    write_json(out_path + ".enc.json", enc);
  }
  return {{"qubo", out_path}, {"n", inst.qubo.n()}, {"nnz", inst.qubo.nnz()}, {"encoding", enc}};
}

json cmd_compress(const std::string& qubo_path, const std::string& out_path) {
  auto is = open_in(qubo_path);
  const QuboProblem q = read_qubo(is);
  const Compression c = compress(q);
  const SignSplitCompression ss = compress_sign_split(q);
  json j = {{"input", qubo_path},
            {"p", c.compressed.p()},
            {"q", c.compressed.q()},
            {"row_vars", c.compressed.row_vars},
            {"col_vars", c.compressed.col_vars},
            {"stats", stats_json(c.stats)},
            {"sign_split", stats_json(ss.stats)}};
  if (!out_path.empty()) {
    auto os = open_out(out_path);
    write_cqubo(os, c.compressed);
    write_json(out_path + ".stats.json", j);
    j["output"] = out_path;
  }
  return j;
}

json cmd_stats(const RunConfig& cfg) {
  cfg.validate();
  const ProblemInstance inst = build_instance(cfg);
  const Compression c = compress(inst.qubo);
  const SignSplitCompression ss = compress_sign_split(inst.qubo);
  return {{"instance", encoding_json(inst)},
          {"nnz", inst.qubo.nnz()},
          {"sparsity_upper_triangle", sparsity(inst.qubo)},
          {"compressed", {{"p", c.compressed.p()}, {"q", c.compressed.q()}}},
          {"stats", stats_json(c.stats)},
          {"sign_split",
           {{"positive", {{"p", ss.positive.compressed.p()}, {"q", ss.positive.compressed.q()}}},
            {"negative", {{"p", ss.negative.compressed.p()}, {"q", ss.negative.compressed.q()}}},
            {"stats", stats_json(ss.stats)}}}};
}

SolveOutcome cmd_solve(const RunConfig& cfg) {
  cfg.validate();
  const ProblemInstance inst = build_instance(cfg);
  const std::size_t n = inst.qubo.n();
  if (n == 0) throw ConfigError("instance has no variables");
  const std::optional<double> optimum = known_optimum(cfg, inst);
  const Pipeline pl = build_pipeline(cfg, inst);

  AnnealConfig ac = cfg.anneal;
  ac.eps_trap = pl.eps_trap;
  const Solver solver = cfg.solver == "sa" ? Solver::Sa : Solver::Mesa;

  const auto start = std::chrono::steady_clock::now();
  const std::vector<AnnealResult> results = run_trials(pl.oracle, n, ac, solver, cfg.trials, cfg.jobs);
  const double wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

  SolveOutcome out;
  json trials = json::array();
  std::size_t hits = 0;
  double sum_best = 0.0;
  for (std::size_t t = 0; t < results.size(); ++t) {
    const AnnealResult& r = results[t];
    TrialSummary s;
    s.trial = t;
    s.seed = derive_seed(ac.seed, t);
    s.e_best = r.energy;
    s.energy = energy(inst.qubo, r.x);
    s.x = r.x;
    s.iterations = r.trace.iters_used;
    s.epochs = r.trace.epochs_used;
    if (optimum) {
      s.success = s.energy <= *optimum + 1e-9;
      s.iterations_to_target = iterations_to_reach(r.trace, *optimum);
      hits += s.success;
    }
    if (!cfg.out_dir.empty() && cfg.write_traces) {
      const fs::path p = fs::path(cfg.out_dir) / ("trace_" + std::to_string(t) + ".csv");
      auto os = open_out(p);
      r.trace.write_csv(os);
      s.trace_path = p.string();
    }
    sum_best += s.e_best;
    json tj = {{"trial", t},
               {"seed", s.seed},
               {"e_best", s.e_best},
               {"energy", s.energy},
               {"iterations", s.iterations},
               {"epochs", s.epochs},
               {"t0", r.trace.t0},
               {"x", vector_json(s.x)},
               {"metric", decode_metric(inst, s.x)}};
    tj["success"] = optimum ? json(s.success) : json(nullptr);
    tj["iterations_to_target"] = s.iterations_to_target ? json(*s.iterations_to_target) : json(nullptr);
    tj["trace"] = s.trace_path.empty() ? json(nullptr) : json(s.trace_path);
    trials.push_back(std::move(tj));
    out.trials.push_back(std::move(s));
  }
  out.mean_e_best = sum_best / static_cast<double>(results.size());
  if (optimum) out.success_rate = static_cast<double>(hits) / static_cast<double>(results.size());

  json& rep = out.report;
  rep["schema"] = "cimqubo.report/1";
  rep["instance"] = encoding_json(inst);
  rep["instance"]["nnz"] = inst.qubo.nnz();
  rep["pipeline"] = {{"compress", cfg.compress}, {"oracle", pl.oracle_info}, {"solver", cfg.solver}};
  rep["anneal"] = anneal_json(ac);
  rep["compression"] = pl.compression ? stats_json(pl.compression->stats) : json(nullptr);
  rep["optimum"] = optimum ? json(*optimum) : json(nullptr);
  rep["trials"] = std::move(trials);
  rep["success_rate"] = out.success_rate ? json(*out.success_rate) : json(nullptr);
  rep["mean_e_best"] = out.mean_e_best;
  rep["jobs"] = cfg.jobs;
  rep["wall_ms"] = wall_ms;
  if (!cfg.out_dir.empty()) write_json(fs::path(cfg.out_dir) / "report.json", rep);
  return out;
}

json cmd_sweep(const RunConfig& cfg, const std::string& axis, const std::vector<std::string>& values) {
  if (axis != "bits" && axis != "sigma" && axis != "adc_bits")
    throw ConfigError("sweep axis must be bits, sigma or adc_bits");
  if (values.empty()) throw ConfigError("sweep needs at least one value");
  json series = json::array();
  std::ostringstream csv;
  csv << "value,success_rate,mean_E_best\n";
  for (const std::string& v : values) {
    RunConfig c = cfg;
    apply_config_entry(c, axis, v);
    if (!cfg.out_dir.empty()) c.out_dir = (fs::path(cfg.out_dir) / (axis + "_" + value_tag(v))).string();
    const SolveOutcome o = cmd_solve(c);
    csv << v << ',' << (o.success_rate ? text::format_double(*o.success_rate) : std::string("nan")) << ','
        << text::format_double(o.mean_e_best) << '\n';
    series.push_back({{"value", v},
                      {"success_rate", o.success_rate ? json(*o.success_rate) : json(nullptr)},
                      {"mean_e_best", o.mean_e_best},
                      {"report", c.out_dir.empty() ? json(nullptr) : json(c.out_dir + "/report.json")}});
  }
  json j = {{"axis", axis}, {"series", series}};
  if (!cfg.out_dir.empty()) {
    const fs::path p = fs::path(cfg.out_dir) / "sweep.csv";
    open_out(p) << csv.str();
    j["csv"] = p.string();
    write_json(fs::path(cfg.out_dir) / "sweep.json", j);
  }
  return j;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ParseError*>(&e)) return 2;
  if (dynamic_cast<const CapacityError*>(&e)) return 4;
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const UnsupportedInstance*>(&e) ||
      dynamic_cast<const EncodingError*>(&e))
    return 3;
  return 1;
}

}  // namespace cimq
