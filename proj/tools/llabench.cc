// llabench: list-labeling experiments from the command line.
//
// Exit codes: 0 success, 2 configuration/usage error, 3 data or I/O error.

#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lla/errors.h"
#include "lla/harness/csv.h"
#include "lla/harness/dataset.h"
#include "lla/harness/experiment.h"
#include "lla/harness/synthetic.h"

namespace {

using namespace lla::harness;

constexpr int kConfigExit = 2;
constexpr int kDataExit = 3;

struct DatasetArgs {
  std::string path;
  std::size_t value_col = 0;
  std::optional<std::size_t> ts_col;
  std::string delimiter = "whitespace";
  std::optional<std::size_t> max_rows;
  std::size_t skip_rows = 0;

  DatasetSpec spec() const {
    DatasetSpec s;
    s.path = path;
    s.value_column = value_col;
    s.timestamp_column = ts_col;
    s.max_rows = max_rows;
    s.skip_rows = skip_rows;
    if (delimiter == "comma") {
      s.delimiter = Delimiter::kComma;
    } else if (delimiter != "whitespace") {
      throw lla::ConfigError("--delimiter must be 'whitespace' or 'comma'");
    }
    return s;
  }
};

void add_dataset_options(CLI::App* cmd, DatasetArgs& args) {
  cmd->add_option("--dataset", args.path, "Plain-text dataset file")->required();
  cmd->add_option("--value-col", args.value_col, "0-based value column")->required();
  cmd->add_option("--ts-col", args.ts_col, "0-based timestamp column (arrival order)");
  cmd->add_option("--delimiter", args.delimiter, "whitespace or comma");
  cmd->add_option("--max-rows", args.max_rows, "Keep only this many rows after ordering");
  cmd->add_option("--skip-rows", args.skip_rows, "Header lines to skip");
}

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw lla::ConfigError(std::string("bad value in ") + what + ": '" + item + "'");
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"List-labeling benchmark harness"};
  app.require_subcommand(1);

  std::string structure = "all";
  std::string out_path;
  app.add_option("--structure", structure, "pma|apma|learned-pma|learned-apma|all")
      ->capture_default_str();
  app.add_option("--out", out_path, "CSV output path (stdout when omitted)");
  bool standalone = false;
  app.add_flag("--standalone-baselines", standalone,
               "Run pma/apma as standalone arrays instead of first-actual routing");

  DatasetArgs data;
  std::size_t k = 0;
  std::size_t k_min = 0;
  std::size_t k_max = 0;
  std::size_t test_k = 0;
  std::string fractions = "5,10,25,50,100";
  std::string t_values = "0,10,25,50";
  std::size_t repeats = 5;
  std::uint64_t seed = 1;
  std::string kind;
  SyntheticParams synth;

  auto* table = app.add_subcommand("table", "Four configurations on train/test = 2^k/2^k");
  add_dataset_options(table, data);
  table->add_option("--k", k, "log2 of the slice size")->required();

  auto* scaling = app.add_subcommand("scaling", "table sweep over k");
  add_dataset_options(scaling, data);
  scaling->add_option("--k-min", k_min)->required();
  scaling->add_option("--k-max", k_max)->required();

  auto* curve = app.add_subcommand("curve", "Cost versus training-set size");
  add_dataset_options(curve, data);
  curve->add_option("--test-k", test_k)->required();
  curve->add_option("--fractions", fractions, "Training sizes in percent of the test size")
      ->capture_default_str();

  auto* robustness = app.add_subcommand("robustness", "Cost versus corrupted predictions");
  add_dataset_options(robustness, data);
  robustness->add_option("--k", k)->required();
  robustness->add_option("--t", t_values, "Corruption percentages")->capture_default_str();
  robustness->add_option("--repeats", repeats)->capture_default_str();
  robustness->add_option("--seed", seed)->capture_default_str();

  auto* synth_cmd = app.add_subcommand("synth", "Synthetic adversaries and noise models");
  synth_cmd->add_option("--kind", kind, "sequential|hammer|random|noisy-eta|stochastic")
      ->required();
  synth_cmd->add_option("--n", synth.n)->required();
  auto* eta_opt = synth_cmd->add_option("--eta", synth.eta, "Uniform error bound");
  auto* mu_opt = synth_cmd->add_option("--mu", synth.mu, "Mean of the normal error");
  auto* s_opt = synth_cmd->add_option("--s", synth.s, "Standard deviation of the normal error");
  eta_opt->excludes(mu_opt)->excludes(s_opt);
  synth_cmd->add_option("--seed", synth.seed)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigExit;
  }

  try {
    ExperimentConfig config;
    config.standalone_baselines = standalone;
    if (structure != "all") {
      const auto s = parse_structure(structure);
      if (!s) throw lla::ConfigError("unknown --structure '" + structure + "'");
      config.structures = {*s};
    }

    std::vector<ExperimentResult> results;
    if (table->parsed()) {
      results = run_table(data.spec(), k, config);
    } else if (scaling->parsed()) {
      DatasetSpec spec = data.spec();
      if (!spec.max_rows) spec.max_rows = std::size_t{2} << k_max;
      results = run_scaling(load_dataset(spec), spec.name(), k_min, k_max, config);
    } else if (curve->parsed()) {
      DatasetSpec spec = data.spec();
      if (!spec.max_rows) spec.max_rows = std::size_t{2} << test_k;
      const auto pct = parse_list(fractions, "--fractions");
      results = run_learning_curve(load_dataset(spec), spec.name(), test_k, pct, config);
    } else if (robustness->parsed()) {
      DatasetSpec spec = data.spec();
      if (!spec.max_rows) spec.max_rows = std::size_t{2} << k;
      const auto ts = parse_list(t_values, "--t");
      results = run_robustness(load_dataset(spec), spec.name(), k, ts, repeats, seed, config);
    } else if (synth_cmd->parsed()) {
      const auto parsed_kind = parse_synthetic_kind(kind);
      if (!parsed_kind) throw lla::ConfigError("unknown --kind '" + kind + "'");
      results = run_synthetic(*parsed_kind, synth, config);
    }

    if (results.empty()) {
      std::cerr << "llabench: no results (empty sweep)\n";
      return 0;
    }
    if (out_path.empty()) {
      write_csv(std::cout, results);
    } else {
      emit_csv(results, out_path);
    }
    for (const auto& r : results) {
      if (r.witness_failures > 0) {
        std::cerr << "llabench: " << r.structure << ": " << r.witness_failures << " of "
                  << r.witness_checks << " merges lacked a high-error witness\n";
      }
    }
  } catch (const lla::ConfigError& e) {
    std::cerr << "llabench: " << e.what() << '\n';
    return kConfigExit;
  } catch (const lla::DataError& e) {
    std::cerr << "llabench: " << e.what() << '\n';
    return kDataExit;
  }
  return 0;
}
