// qubonet: compile, train and evaluate binary-encoded networks as QUBOs.

#include <CLI11.hpp>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "qubonet/error.hpp"
#include "qubonet/run.hpp"

namespace {

using qubonet::RunConfig;

// Flags left unset do not override values from --config.
struct Flags {
  std::optional<std::string> config;
  std::optional<std::size_t> features, hidden, bits, reads, sweeps, runs, n,
      steps, grid, max_vars;
  std::optional<std::string> activation, dataset, csv, csv_features, label,
      label_encoding, solver, out, path;
  std::optional<std::uint64_t> seed;
  std::optional<double> lambda, omega, noise, lr;
  bool first_layer_bias = false;
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = s.find(',', start);
    std::string item = s.substr(start, comma - start);
    if (!item.empty()) out.push_back(item);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

void add_run_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "JSON config or metadata.json to reuse");
  cmd->add_option("--features", f.features, "number of input features N_f");
  cmd->add_option("--hidden", f.hidden, "hidden units N_h");
  cmd->add_option("--bits", f.bits, "bits per parameter N_b");
  cmd->add_option("--activation", f.activation, "square, relu2 or sigmoid-fit");
  cmd->add_flag("--first-layer-bias", f.first_layer_bias,
                "add the constant feature and bias unit");
  cmd->add_option("--dataset", f.dataset,
                  "circles, quadrants, bands or csv; comma list for compare");
  cmd->add_option("--csv", f.csv, "CSV file for --dataset csv");
  cmd->add_option("--csv-features", f.csv_features, "comma list of columns");
  cmd->add_option("--label", f.label, "label column name");
  cmd->add_option("--label-encoding", f.label_encoding,
                  "1/-1, 1/0 or signal/background");
  cmd->add_option("--n", f.n, "points per generated dataset");
  cmd->add_option("--noise", f.noise, "circles noise");
  cmd->add_option("--path", f.path, "auto, structured or generic");
  cmd->add_option("--solver", f.solver, "exact, sa or remote");
  cmd->add_option("--reads", f.reads, "sampler reads");
  cmd->add_option("--sweeps", f.sweeps, "annealing sweeps per read");
  cmd->add_option("--seed", f.seed, "seed for data, sampler and baseline");
  cmd->add_option("--lambda", f.lambda, "gadget strength override");
  cmd->add_option("--omega", f.omega, "classical level penalty weight");
  cmd->add_option("--runs", f.runs, "classical runs");
  cmd->add_option("--steps", f.steps, "Adam steps");
  cmd->add_option("--lr", f.lr, "Adam learning rate");
  cmd->add_option("--grid", f.grid, "decision grid resolution");
  cmd->add_option("--out", f.out, "output directory");
}

RunConfig resolve(const Flags& f) {
  RunConfig c = f.config ? RunConfig::load(*f.config) : RunConfig{};
  if (f.features) c.features = *f.features;
  if (f.hidden) c.hidden = *f.hidden;
  if (f.bits) c.bits = *f.bits;
  if (f.activation) c.activation = *f.activation;
  if (f.first_layer_bias) c.first_layer_bias = true;
  if (f.dataset) c.datasets = split_list(*f.dataset);
  if (f.csv) {
    c.csv = *f.csv;
    if (!f.dataset) c.datasets = {"csv"};
  }
  if (f.csv_features) c.csv_features = split_list(*f.csv_features);
  if (f.label) c.csv_label = *f.label;
  if (f.label_encoding) c.csv_label_encoding = *f.label_encoding;
  if (f.n) c.n = *f.n;
  if (f.noise) c.noise = *f.noise;
  if (f.path) c.compile_path = *f.path;
  if (f.solver) c.solver = *f.solver;
  if (f.reads) c.reads = *f.reads;
  if (f.sweeps) c.sweeps = *f.sweeps;
  if (f.seed) c.seed = *f.seed;
  if (f.lambda) c.lambda = *f.lambda;
  if (f.omega) c.omega = *f.omega;
  if (f.runs) c.runs = *f.runs;
  if (f.steps) c.adam_steps = *f.steps;
  if (f.lr) c.adam_lr = *f.lr;
  if (f.grid) c.grid_resolution = *f.grid;
  if (f.out) c.out = *f.out;
  return c;
}

int run(int argc, char** argv) {
  CLI::App app{"Train binary-encoded neural networks as QUBO problems"};
  app.require_subcommand(1);
  Flags f;

  auto* compile = app.add_subcommand("compile", "compile a network into a QUBO");
  add_run_flags(compile, f);
  auto* train = app.add_subcommand("train", "compile, solve, decode and score");
  add_run_flags(train, f);
  auto* cmp = app.add_subcommand("compare", "quantum path vs classical baseline");
  add_run_flags(cmp, f);

  qubonet::ReduceConfig rc;
  std::optional<double> reduce_lambda;
  auto* reduce = app.add_subcommand("reduce", "quadratize a polynomial file");
  reduce->add_option("input", rc.input, "polynomial text file")->required();
  reduce->add_option("--lambda", reduce_lambda, "fixed gadget strength");
  reduce->add_option("--max-vars", rc.max_vars, "exhaustive verification limit");
  reduce->add_option("--out", rc.out, "output directory");

  auto* dataset = app.add_subcommand("dataset", "dataset utilities");
  dataset->require_subcommand(1);
  auto* gen = dataset->add_subcommand("gen", "write a generated dataset as CSV");
  add_run_flags(gen, f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (*compile) {
    const auto r = qubonet::cmd_compile(resolve(f));
    const auto& c = r.model.counts;
    std::cout << "abstract_spins " << c.abstract_spins << "\nparameter_bits "
              << c.parameter_bits << "\nn_vw " << c.n_vw << "\nn_vww " << c.n_vww
              << "\nn_ww " << c.n_ww << "\nhash " << r.model_hash << '\n';
  } else if (*train) {
    const auto r = qubonet::cmd_train(resolve(f));
    std::cout << r.metrics_json;
  } else if (*cmp) {
    for (const auto& row : qubonet::cmd_compare(resolve(f))) {
      std::cout << row.dataset << " quantum_auc " << row.report.quantum_auc
                << " classical_median " << row.report.classical_median << " p20 "
                << row.report.classical_p20 << " p80 " << row.report.classical_p80
                << '\n';
    }
  } else if (*reduce) {
    rc.lambda = reduce_lambda;
    std::cout << qubonet::cmd_reduce(rc).summary << '\n';
  } else if (*gen) {
    RunConfig c = resolve(f);
    const std::string path = f.out ? *f.out : c.datasets.front() + ".csv";
    c.out = ".";
    const auto d = qubonet::cmd_dataset_gen(c, path);
    std::cout << "wrote " << d.size() << " points to " << path << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const qubonet::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const qubonet::InvalidArgument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const qubonet::SolverError& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return 3;
  } catch (const qubonet::IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return 4;
  } catch (const qubonet::ParseError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
