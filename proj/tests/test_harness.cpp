#include <filesystem>
#include <fstream>
#include <sstream>

#include "cimqubo/errors.hpp"
#include "cimqubo/harness.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace cimq;
using testing_support::data_path;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("cimqubo_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

RunConfig toy_config() {
  RunConfig cfg;
  cfg.kind = ProblemKind::Coloring;
  cfg.input = data_path("toy7.col");
  cfg.colors = 3;
  return cfg;
}

}  // namespace

TEST_CASE("config files: keys, comments, errors") {
  RunConfig cfg;
  std::istringstream ok(
      "# demo\nkind = coloring\ncolors=3\ncompress = on\noracle = hw\nternary = true\n"
      "sigma = 0.05\nadc_bits = 6\nalpha = 0.95  # cooling\ntrials = 9\nseed = 42\n");
  read_config(ok, cfg);
  CHECK(cfg.kind == ProblemKind::Coloring);
  CHECK(cfg.compress);
  CHECK(cfg.oracle == "hw");
  CHECK(cfg.ternary);
  CHECK(cfg.device.i_on_rel_sigma == 0.05);
  CHECK(cfg.adc.bits == 6);
  CHECK(cfg.anneal.alpha == 0.95);
  CHECK(cfg.trials == 9);
  CHECK(cfg.anneal.seed == 42);

  std::istringstream no_eq("kind coloring\n");
  CHECK_THROWS_AS(read_config(no_eq, cfg), ParseError);
  std::istringstream unknown("\nfoo = 1\n");
  CHECK_THROWS_WITH_AS(read_config(unknown, cfg), doctest::Contains("line 2"), ConfigError);
  std::istringstream bad_num("alpha = fast\n");
  CHECK_THROWS_AS(read_config(bad_num, cfg), ConfigError);
  std::istringstream bad_kind("kind = tsp\n");
  CHECK_THROWS_AS(read_config(bad_kind, cfg), ConfigError);
  CHECK(config_keys().size() > 20);
}

TEST_CASE("config validation") {
  RunConfig cfg = toy_config();
  CHECK_NOTHROW(cfg.validate());
  cfg.oracle = "analog";
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = toy_config();
  cfg.input = "/nonexistent/file.col";
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = toy_config();
  cfg.trials = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = toy_config();
  cfg.anneal.alpha = 2;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("exit codes") {
  CHECK(exit_code_for(ParseError("x", 1)) == 2);
  CHECK(exit_code_for(ConfigError("x")) == 3);
  CHECK(exit_code_for(UnsupportedInstance("x")) == 3);
  CHECK(exit_code_for(CapacityError("x")) == 4);
  CHECK(exit_code_for(std::runtime_error("x")) == 1);
}

TEST_CASE("convert writes a QUBO file and an encoding sidecar") {
  const fs::path dir = scratch("convert");
  RunConfig cfg = toy_config();
  const auto j = cmd_convert(cfg, (dir / "toy.qubo").string());
  CHECK(j["n"] == 21);
  std::ifstream is(dir / "toy.qubo");
  CHECK(read_qubo(is).n() == 21);
  const auto enc = nlohmann::json::parse(slurp(dir / "toy.qubo.enc.json"));
  CHECK(enc["colors"] == 3);
  CHECK(enc["vertices"] == 7);

  RunConfig pfp;
  pfp.kind = ProblemKind::Pfp;
  pfp.pfp_n = 35;
  const auto p = cmd_convert(pfp, (dir / "pfp35.qubo").string());
  CHECK(p["n"] == 5);
  const auto penc = nlohmann::json::parse(slurp(dir / "pfp35.qubo.enc.json"));
  CHECK(penc["target"] == 35);
  CHECK(penc["p_bits"].size() == penc["k"].get<std::size_t>());

  RunConfig tri;
  tri.kind = ProblemKind::MaxCut;
  tri.input = data_path("k3.col");
  CHECK(cmd_convert(tri, "")["n"] == 3);
}

TEST_CASE("compress command: stats and zero matrix") {
  const fs::path dir = scratch("compress");
  {
    std::ofstream os(dir / "zero.qubo");
    os << "qubo 4 0\nl 1 2\n";
  }
  const auto z = cmd_compress((dir / "zero.qubo").string(), (dir / "zero.cqubo").string());
  CHECK(z["stats"]["chip_size_saving"] == 1.0);
  std::ifstream is(dir / "zero.cqubo");
  CHECK(read_cqubo(is).p() == 0);
  CHECK(fs::exists(dir / "zero.cqubo.stats.json"));
}

TEST_CASE("stats command reports both conventions and the sign split") {
  RunConfig cfg;
  cfg.kind = ProblemKind::Pfp;
  cfg.pfp_n = 35;
  const auto j = cmd_stats(cfg);
  CHECK(j["stats"].contains("sparsity_reduction"));
  CHECK(j["stats"].contains("sparsity_reduction_with_diag"));
  CHECK(j["sign_split"]["stats"].contains("chip_size_saving"));
}

TEST_CASE("solve: triangle max-cut reports cut value 2") {
  RunConfig cfg;
  cfg.kind = ProblemKind::MaxCut;
  cfg.input = data_path("k3.col");
  cfg.trials = 5;
  const SolveOutcome o = cmd_solve(cfg);
  REQUIRE(o.success_rate);
  CHECK(*o.success_rate == 1.0);
  for (const auto& t : o.report["trials"]) CHECK(t["metric"]["cut_value"] == 2.0);
  CHECK(o.report["optimum"] == -2.0);
}

TEST_CASE("solve: report schema and trace files") {
  const fs::path dir = scratch("solve");
  RunConfig cfg = toy_config();
  cfg.compress = true;
  cfg.trials = 3;
  cfg.jobs = 2;
  cfg.out_dir = dir.string();
  const SolveOutcome o = cmd_solve(cfg);
  const auto rep = nlohmann::json::parse(slurp(dir / "report.json"));
  for (const char* key : {"schema", "instance", "pipeline", "anneal", "compression", "optimum", "trials",
                          "success_rate", "mean_e_best", "wall_ms"})
    CHECK(rep.contains(key));
  CHECK(rep["schema"] == "cimqubo.report/1");
  CHECK(rep["compression"]["cells_before"] == 441);
  REQUIRE(rep["trials"].size() == 3);
  for (const auto& t : rep["trials"]) {
    for (const char* key : {"trial", "seed", "e_best", "energy", "iterations", "epochs", "x", "metric",
                            "success", "iterations_to_target", "trace"})
      CHECK(t.contains(key));
    CHECK(fs::exists(t["trace"].get<std::string>()));
    // domain metric agrees with the energy: valid coloring iff energy 0
    CHECK(t["metric"]["valid"].get<bool>() == (t["energy"].get<double>() == 0.0));
  }
  CHECK(slurp(dir / "trace_0.csv").rfind("iter,epoch,E_new,E_o,E_best,accepted,trapped,T,flips\n", 0) == 0);
  CHECK(o.trials.size() == 3);
}

TEST_CASE("pipeline equivalence: compression does not change exact-oracle runs") {
  RunConfig cfg = toy_config();
  cfg.trials = 6;
  cfg.anneal.seed = 3;
  const SolveOutcome plain = cmd_solve(cfg);
  cfg.compress = true;
  const SolveOutcome packed = cmd_solve(cfg);
  for (std::size_t t = 0; t < 6; ++t) {
    CHECK(plain.trials[t].e_best == packed.trials[t].e_best);
    CHECK(plain.trials[t].x == packed.trials[t].x);
  }
}

TEST_CASE("hardware pipeline: eps follows the ADC and capacity is enforced") {
  RunConfig cfg;
  cfg.kind = ProblemKind::Pfp;
  cfg.pfp_n = 35;
  cfg.oracle = "hw";
  cfg.bits = 4;
  cfg.adc.bits = 8;
  cfg.trials = 2;
  cfg.anneal.max_iters = 300;
  const SolveOutcome o = cmd_solve(cfg);
  const auto& info = o.report["pipeline"]["oracle"];
  CHECK(o.report["anneal"]["eps_trap"].get<double>() == doctest::Approx(info["energy_lsb"].get<double>() / 2));
  cfg.max_tiles = 1;
  CHECK_THROWS_AS(cmd_solve(cfg), CapacityError);
  RunConfig tern = toy_config();
  tern.oracle = "hw";
  tern.ternary = true;
  tern.compress = false;  // the uncompressed upper triangle is still ternary
  tern.anneal.max_iters = 200;
  CHECK_NOTHROW(cmd_solve(tern));
}

TEST_CASE("sweep writes one report per value and a combined CSV") {
  const fs::path dir = scratch("sweep");
  RunConfig cfg;
  cfg.kind = ProblemKind::Pfp;
  cfg.pfp_n = 35;
  cfg.oracle = "hw";
  cfg.trials = 3;
  cfg.anneal.max_iters = 400;
  cfg.out_dir = dir.string();
  const auto j = cmd_sweep(cfg, "bits", {"2", "5"});
  CHECK(j["series"].size() == 2);
  CHECK(fs::exists(dir / "bits_2" / "report.json"));
  CHECK(fs::exists(dir / "bits_5" / "report.json"));
  const std::string csv = slurp(dir / "sweep.csv");
  CHECK(csv.rfind("value,success_rate,mean_E_best\n2,", 0) == 0);
  CHECK(csv.find("\n5,") != std::string::npos);
  CHECK_THROWS_AS(cmd_sweep(cfg, "alpha", {"0.9"}), ConfigError);
}

TEST_CASE("qubo instances and unsupported factorization targets") {
  const fs::path dir = scratch("qubo_kind");
  {
    std::ofstream os(dir / "tiny.qubo");
    os << "qubo 2 1\nl 0 -1\nl 1 -1\nq 0 1 3\n";
  }
  RunConfig cfg;
  cfg.kind = ProblemKind::Qubo;
  cfg.input = (dir / "tiny.qubo").string();
  cfg.trials = 4;
  const SolveOutcome o = cmd_solve(cfg);
  CHECK(*o.success_rate == 1.0);

  RunConfig even;
  even.kind = ProblemKind::Pfp;
  even.pfp_n = 34;
  CHECK_THROWS_AS(cmd_solve(even), UnsupportedInstance);
}

TEST_CASE("golden: factoring 35 with the exact oracle and default settings") {
  RunConfig cfg;
  cfg.kind = ProblemKind::Pfp;
  cfg.pfp_n = 35;
  cfg.trials = 100;
  const SolveOutcome o = cmd_solve(cfg);
  REQUIRE(o.success_rate);
  CHECK(*o.success_rate == 1.0);  // measured once, then frozen
  for (const auto& t : o.report["trials"]) {
    const auto p = t["metric"]["p"].get<std::uint64_t>(), q = t["metric"]["q"].get<std::uint64_t>();
    CHECK(p * q == 35);
  }
}
