// Command-line front end: convert, compress, solve, sweep, stats.
#include <deque>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cimqubo/errors.hpp"
#include "cimqubo/harness.hpp"

namespace {

// Binds CLI flags to config keys. Precedence: defaults < --config file <
// flags < --set overrides.
class FlagBinder {
 public:
  explicit FlagBinder(CLI::App* app) : app_(app) {}

  void value(const std::string& flag, const std::string& key, const std::string& help) {
    auto& slot = values_.emplace_back(key, std::string{});
    app_->add_option(flag, slot.second, help);
  }

  void toggle(const std::string& flag, const std::string& key, const std::string& help) {
    auto& slot = toggles_.emplace_back(key, false);
    app_->add_flag(flag, slot.second, help);
  }

  void apply(cimq::RunConfig& cfg) const {
    for (const auto& [key, v] : values_)
      if (!v.empty()) cimq::apply_config_entry(cfg, key, v);
    for (const auto& [key, on] : toggles_)
      if (on) cimq::apply_config_entry(cfg, key, "true");
  }

 private:
  CLI::App* app_;
  std::deque<std::pair<std::string, std::string>> values_;
  std::deque<std::pair<std::string, bool>> toggles_;
};

void add_instance_flags(FlagBinder& b) {
  b.value("--kind", "kind", "maxcut | coloring | pfp | qubo");
  b.value("--colors", "colors", "number of colors K");
  b.value("--pfp", "pfp", "integer to factor (implies --kind pfp)");
  b.value("--pfp-k", "pfp_k", "free bits of the first factor");
  b.value("--pfp-l", "pfp_l", "free bits of the second factor");
}

void add_solve_flags(FlagBinder& b) {
  b.toggle("--compress", "compress", "solve the compressed form");
  b.value("--oracle", "oracle", "exact | hw");
  b.toggle("--ternary", "ternary", "hw: 2-cell ternary mapping");
  b.value("--bits", "bits", "coefficient bits M");
  b.value("--sigma", "sigma", "relative ON-current spread");
  b.value("--adc-bits", "adc_bits", "ADC resolution (0 = ideal readout)");
  b.value("--solver", "solver", "mesa | sa");
  b.value("--trials", "trials", "independent seeded trials");
  b.value("--seed", "seed", "base seed");
  b.value("--jobs", "jobs", "worker threads for trials");
  b.value("--max-iters", "max_iters", "iteration budget per trial");
  b.value("--target", "target", "success threshold energy");
  b.value("--out", "out", "output directory");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"QUBO conversion, compression and annealing toolkit"};
  app.require_subcommand(1);

  std::string config_path, input, out_path;
  std::vector<std::string> sets;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "key=value configuration file");
    sub->add_option("--set", sets, "extra key=value setting (repeatable)");
  };

  auto* convert = app.add_subcommand("convert", "convert an instance to a QUBO file");
  convert->add_option("input", input, "graph file (.col DIMACS or Gset edge list)");
  convert->add_option("-o,--output", out_path, "QUBO output path")->required();
  FlagBinder convert_flags(convert);
  add_instance_flags(convert_flags);
  add_common(convert);

  std::string qubo_path;
  auto* compress = app.add_subcommand("compress", "compress a QUBO file");
  compress->add_option("qubo", qubo_path, "input qubo file")->required();
  compress->add_option("-o,--output", out_path, "cqubo output path");

  auto* solve = app.add_subcommand("solve", "anneal an instance and write a report");
  solve->add_option("input", input, "graph or qubo file");
  FlagBinder solve_flags(solve);
  add_instance_flags(solve_flags);
  add_solve_flags(solve_flags);
  add_common(solve);

  std::string axis;
  std::vector<std::string> values;
  auto* sweep = app.add_subcommand("sweep", "repeat solve over one parameter axis");
  sweep->add_option("input", input, "graph or qubo file");
  sweep->add_option("--axis", axis, "bits | sigma | adc_bits")->required();
  sweep->add_option("--values", values, "axis values")->required()->delimiter(',');
  FlagBinder sweep_flags(sweep);
  add_instance_flags(sweep_flags);
  add_solve_flags(sweep_flags);
  add_common(sweep);

  auto* stats = app.add_subcommand("stats", "compression statistics of an instance");
  stats->add_option("input", input, "graph or qubo file");
  FlagBinder stats_flags(stats);
  add_instance_flags(stats_flags);
  add_common(stats);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    auto build_config = [&](const FlagBinder& flags) {
      cimq::RunConfig cfg;
      if (!config_path.empty()) cimq::read_config_file(config_path, cfg);
      if (!input.empty()) cfg.input = input;
      flags.apply(cfg);
      for (const std::string& kv : sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw cimq::ConfigError("--set expects key=value, got '" + kv + "'");
        cimq::apply_config_entry(cfg, kv.substr(0, eq), kv.substr(eq + 1));
      }
      return cfg;
    };

    nlohmann::json out;
    if (*convert) {
      out = cimq::cmd_convert(build_config(convert_flags), out_path);
    } else if (*compress) {
      out = cimq::cmd_compress(qubo_path, out_path);
    } else if (*solve) {
      out = cimq::cmd_solve(build_config(solve_flags)).report;
    } else if (*sweep) {
      out = cimq::cmd_sweep(build_config(sweep_flags), axis, values);
    } else if (*stats) {
      out = cimq::cmd_stats(build_config(stats_flags));
    }
    std::cout << out.dump(2) << '\n';
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cimq::exit_code_for(e);
  }
}
