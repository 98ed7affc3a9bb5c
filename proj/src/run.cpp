#include "qubonet/run.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "qubonet/error.hpp"
#include "qubonet/model_io.hpp"
#include "qubonet/remote.hpp"

namespace qubonet {

using nlohmann::json;
namespace fs = std::filesystem;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, std::string_view content) {
  std::error_code ec;
  const fs::path parent = fs::path(path).parent_path();
  if (!parent.empty()) fs::create_directories(parent, ec);
  if (ec) throw IoError("cannot create " + parent.string() + ": " + ec.message());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << content;
  if (!out) throw IoError("write failed: " + path);
}

// ---------------------------------------------------------------- config

void RunConfig::validate() const {
  if (features < 1) throw ConfigError("features: must be at least 1");
  if (hidden < 1) throw ConfigError("hidden: must be at least 1");
  if (bits < 1) throw ConfigError("bits: must be at least 1");
  ActivationPoly::preset(activation);
  if (datasets.empty()) throw ConfigError("dataset: at least one is required");
  for (const auto& d : datasets) {
    if (d != "circles" && d != "quadrants" && d != "bands" && d != "csv") {
      throw ConfigError("dataset: unknown '" + d +
                        "' (available: circles, quadrants, bands, csv)");
    }
    if (d == "csv" && csv.empty()) throw ConfigError("csv: path required");
  }
  if (n < 2) throw ConfigError("n: must be at least 2");
  if (!(noise >= 0.0)) throw ConfigError("noise: must be non-negative");
  if (compile_path != "auto" && compile_path != "structured" &&
      compile_path != "generic") {
    throw ConfigError("path: expected auto, structured or generic");
  }
  if (lambda && !(*lambda > 0.0 && std::isfinite(*lambda))) {
    throw ConfigError("lambda: must be positive");
  }
  if (solver != "exact" && solver != "sa" && solver != "remote") {
    throw ConfigError("solver: expected exact, sa or remote, got '" + solver + "'");
  }
  if (reads < 1) throw ConfigError("reads: must be at least 1");
  if (!(beta_range.first > 0.0 && beta_range.second >= beta_range.first)) {
    throw ConfigError("beta_range: need 0 < low <= high");
  }
  if (!(omega >= 0.0)) throw ConfigError("omega: must be non-negative");
  if (runs < 1) throw ConfigError("runs: must be at least 1");
  if (!(adam_lr > 0.0)) throw ConfigError("adam_lr: must be positive");
  if (grid_resolution < 2) throw ConfigError("grid: resolution must be >= 2");
  if (out.empty()) throw ConfigError("out: directory required");
  parse_label_encoding(csv_label_encoding);
  shape().validate();
  sampler().schedule->validate();
}

NetworkShape RunConfig::shape() const {
  NetworkShape s;
  s.n_features = features;
  s.n_hidden = hidden;
  s.n_bits = bits;
  s.first_layer_bias = first_layer_bias;
  s.activation = ActivationPoly::preset(activation);
  s.last_bias_levels = last_bias_levels;
  return s;
}

SamplerConfig RunConfig::sampler() const {
  SamplerConfig c;
  c.num_reads = reads;
  c.seed = seed;
  c.sweeps = sweeps;
  c.beta_range = beta_range;
  c.schedule = AnnealSchedule::paused(schedule_s_q);
  return c;
}

ClassicalConfig RunConfig::classical() const {
  ClassicalConfig c;
  c.omega = omega;
  c.runs = runs;
  c.seed = seed;
  c.adam.steps = adam_steps;
  c.adam.lr = adam_lr;
  return c;
}

namespace {

json config_json(const RunConfig& c) {
  return {{"features", c.features},
          {"hidden", c.hidden},
          {"bits", c.bits},
          {"activation", c.activation},
          {"first_layer_bias", c.first_layer_bias},
          {"last_bias_levels", {c.last_bias_levels.first, c.last_bias_levels.second}},
          {"datasets", c.datasets},
          {"n", c.n},
          {"noise", c.noise},
          {"band_offsets", c.band_offsets},
          {"band_width", c.band_width},
          {"band_extent", c.band_extent},
          {"csv", c.csv},
          {"csv_features", c.csv_features},
          {"csv_label", c.csv_label},
          {"csv_label_encoding", c.csv_label_encoding},
          {"compile_path", c.compile_path},
          {"lambda", c.lambda ? json(*c.lambda) : json(nullptr)},
          {"solver", c.solver},
          {"reads", c.reads},
          {"seed", c.seed},
          {"sweeps", c.sweeps},
          {"beta_range", {c.beta_range.first, c.beta_range.second}},
          {"exact_max_vars", c.exact_max_vars},
          {"schedule_s_q", c.schedule_s_q},
          {"omega", c.omega},
          {"runs", c.runs},
          {"adam_steps", c.adam_steps},
          {"adam_lr", c.adam_lr},
          {"grid_resolution", c.grid_resolution},
          {"out", c.out}};
}

template <typename T>
void read_field(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string(key) + ": wrong type in config file");
  }
}

void read_pair(const json& j, const char* key, std::pair<double, double>& out) {
  if (!j.contains(key)) return;
  std::vector<double> v;
  read_field(j, key, v);
  if (v.size() != 2) throw ConfigError(std::string(key) + ": needs two values");
  out = {v[0], v[1]};
}

}  // namespace

std::string RunConfig::to_json() const { return config_json(*this).dump(1); }

RunConfig RunConfig::from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config file is not valid JSON: ") + e.what());
  }
  if (doc.is_object() && doc.contains("config")) doc = doc["config"];
  if (!doc.is_object()) throw ConfigError("config file must hold an object");
  RunConfig c;
  const json known = config_json(c);
  for (const auto& [key, value] : doc.items()) {
    if (!known.contains(key)) throw ConfigError(key + ": unknown config field");
  }
  read_field(doc, "features", c.features);
  read_field(doc, "hidden", c.hidden);
  read_field(doc, "bits", c.bits);
  read_field(doc, "activation", c.activation);
  read_field(doc, "first_layer_bias", c.first_layer_bias);
  read_pair(doc, "last_bias_levels", c.last_bias_levels);
  read_field(doc, "datasets", c.datasets);
  read_field(doc, "n", c.n);
  read_field(doc, "noise", c.noise);
  read_field(doc, "band_offsets", c.band_offsets);
  read_field(doc, "band_width", c.band_width);
  read_field(doc, "band_extent", c.band_extent);
  read_field(doc, "csv", c.csv);
  read_field(doc, "csv_features", c.csv_features);
  read_field(doc, "csv_label", c.csv_label);
  read_field(doc, "csv_label_encoding", c.csv_label_encoding);
  read_field(doc, "compile_path", c.compile_path);
  if (doc.contains("lambda") && !doc["lambda"].is_null()) {
    double l = 0.0;
    read_field(doc, "lambda", l);
    c.lambda = l;
  }
  read_field(doc, "solver", c.solver);
  read_field(doc, "reads", c.reads);
  read_field(doc, "seed", c.seed);
  read_field(doc, "sweeps", c.sweeps);
  read_pair(doc, "beta_range", c.beta_range);
  read_field(doc, "exact_max_vars", c.exact_max_vars);
  read_field(doc, "schedule_s_q", c.schedule_s_q);
  read_field(doc, "omega", c.omega);
  read_field(doc, "runs", c.runs);
  read_field(doc, "adam_steps", c.adam_steps);
  read_field(doc, "adam_lr", c.adam_lr);
  read_field(doc, "grid_resolution", c.grid_resolution);
  read_field(doc, "out", c.out);
  return c;
}

RunConfig RunConfig::load(const std::string& path) {
  return from_json(read_file(path));
}

Dataset make_dataset(const RunConfig& config, const std::string& name) {
  Dataset d;
  if (name == "circles") {
    d = gen_circles({config.n, config.noise, config.seed});
  } else if (name == "quadrants") {
    d = gen_quadrants({config.n, config.seed});
  } else if (name == "bands") {
    d = gen_bands({config.n, config.seed, config.band_offsets, config.band_width,
                   config.band_extent});
  } else if (name == "csv") {
    d = load_csv(config.csv, config.csv_features, config.csv_label,
                 parse_label_encoding(config.csv_label_encoding));
    d.name = "csv";
  } else {
    throw ConfigError("dataset: unknown '" + name + "'");
  }
  if (d.n_features != config.features) {
    throw ConfigError("features: network has " + std::to_string(config.features) +
                      " inputs but dataset '" + name + "' has " +
                      std::to_string(d.n_features) + " features");
  }
  if (!d.has_both_classes()) {
    throw ConfigError("dataset '" + name + "' does not contain both classes");
  }
  return d;
}

// ---------------------------------------------------------------- helpers

namespace {

std::string join(const std::string& dir, const std::string& file) {
  return (fs::path(dir) / file).string();
}

CompiledModel compile_for(const RunConfig& config, const Dataset& data) {
  const NetworkShape shape = config.shape();
  if (config.compile_path == "structured") {
    return compile_structured(shape, data, config.lambda);
  }
  if (config.compile_path == "generic") {
    return compile_generic(shape, data,
                           config.lambda
                               ? LambdaStrategy::fixed_value(*config.lambda)
                               : LambdaStrategy::automatic());
  }
  return compile(shape, data, config.lambda);
}

json counts_report(const CompiledModel& m) {
  return {{"path", compile_path_name(m.path)},
          {"parameter_bits", m.counts.parameter_bits},
          {"n_vw", m.counts.n_vw},
          {"n_vww", m.counts.n_vww},
          {"n_ww", m.counts.n_ww},
          {"n_aux", m.counts.n_aux},
          {"abstract_spins", m.counts.abstract_spins},
          {"lambda", m.lambda}};
}

json metadata(std::string_view command, const RunConfig& config,
              const json& hashes) {
  const SamplerConfig s = config.sampler();
  json points = json::array();
  for (const auto& [t, v] : s.schedule->points) points.push_back({t, v});
  const ClassicalConfig cc = config.classical();
  return {{"command", command},
          {"version", kVersion},
          {"config", config_json(config)},
          {"defaults",
           {{"schedule", {{"points", points}, {"s_q", s.schedule->s_q}}},
            {"beta_units", "1/max|coefficient|"},
            {"adam",
             {{"lr", cc.adam.lr},
              {"beta1", cc.adam.beta1},
              {"beta2", cc.adam.beta2},
              {"eps", cc.adam.eps},
              {"steps", cc.adam.steps}}},
            {"structured_lambda", "2 * max|loss coefficient| * non-constant terms"},
            {"quadratizer_lambda", "1 + sum|non-constant coefficients|"},
            {"scaler", "per-feature min/max onto [-1, 1]"}}},
          {"hashes", hashes}};
}

std::string samples_csv(const std::vector<Sample>& samples) {
  std::ostringstream os;
  os << "read,energy,occurrences,assignment\n";
  for (std::size_t r = 0; r < samples.size(); ++r) {
    os << r << ',' << format_double(samples[r].energy) << ','
       << samples[r].occurrences << ',';
    for (auto b : samples[r].assignment) os << static_cast<char>('0' + b);
    os << '\n';
  }
  return os.str();
}

GridBounds bounds_of(const Dataset& d) {
  GridBounds b;
  auto range = [&](std::size_t j, double& lo, double& hi) {
    const auto col = d.column(j);
    const auto [mn, mx] = std::minmax_element(col.begin(), col.end());
    const double pad = 0.1 * (*mx - *mn) + (*mx == *mn ? 1.0 : 0.0);
    lo = *mn - pad;
    hi = *mx + pad;
  };
  range(0, b.x1_lo, b.x1_hi);
  range(1, b.x2_lo, b.x2_hi);
  return b;
}

std::vector<Sample> solve(const RunConfig& config, const CompiledModel& model,
                          const std::optional<RemoteConfig>& remote) {
  if (config.solver == "exact") {
    const ExactResult r = exact_solve(model.qubo, config.exact_max_vars);
    std::vector<Sample> out;
    for (const auto& a : r.minimizers) out.push_back({a, model.qubo.energy(a), 1});
    return out;
  }
  if (config.solver == "sa") return sa_sample(model.qubo, config.sampler());
  return remote_sample(model.qubo, config.sampler(), *remote);
}

}  // namespace

// ---------------------------------------------------------------- commands

CompileResult cmd_compile(const RunConfig& config) {
  config.validate();
  const Dataset data = make_dataset(config, config.datasets.front());
  CompileResult r{compile_for(config, data), {}};
  r.model_hash = content_hash(r.model);
  const std::string counts = counts_report(r.model).dump(1) + "\n";
  write_file(join(config.out, "model.json"), model_to_json(r.model));
  write_file(join(config.out, "counts.json"), counts);
  write_file(join(config.out, "metadata.json"),
             metadata("compile", config,
                      {{"model", r.model_hash}, {"counts", sha256_hex(counts)}})
                     .dump(1) +
                 "\n");
  return r;
}

TrainResult cmd_train(const RunConfig& config) {
  config.validate();
  // Fail before any work when the remote backend is not configured.
  std::optional<RemoteConfig> remote;
  if (config.solver == "remote") remote = RemoteConfig::from_env();

  const std::string& name = config.datasets.front();
  const Dataset data = make_dataset(config, name);
  TrainResult r;
  r.model = compile_for(config, data);
  try {
    r.samples = solve(config, r.model, remote);
  } catch (const SolverError& e) {
    throw SolverError("training on '" + name + "' with solver " + config.solver +
                      " (" + std::to_string(r.model.qubo.n_vars) +
                      " variables): " + e.what());
  }
  r.best = best_of(r.samples);
  r.network = decode_solution(r.model, r.best.assignment);
  r.auc = roc_auc(r.network.scores(data), data.labels);

  json weights = json::object();
  for (const auto& b : r.model.layout.params) {
    weights[b.name] = decode_param(
        std::span(r.best.assignment).subspan(b.first_var, b.n_bits), b.encoding,
        b.n_bits);
  }
  const Assignment params(r.best.assignment.begin(),
                          r.best.assignment.begin() +
                              static_cast<std::ptrdiff_t>(r.model.layout.total_spins));
  const bool consistent =
      lift_assignment(r.model.reduction, params) == r.best.assignment;
  const std::string model_hash = content_hash(r.model);
  json metrics = {{"dataset", name},
                  {"n_points", data.size()},
                  {"solver", config.solver},
                  {"n_samples", r.samples.size()},
                  {"auc", r.auc},
                  {"best_energy", r.best.energy},
                  {"train_mse", r.network.mse(data)},
                  {"gadgets_satisfied", consistent},
                  {"weights", weights},
                  {"counts", counts_report(r.model)},
                  {"model_hash", model_hash}};
  r.metrics_json = metrics.dump(1) + "\n";

  const std::string samples = samples_csv(r.samples);
  std::string boundary;
  if (data.n_features == 2) {
    const auto& net = r.network;
    const DecisionGrid grid = decision_grid(
        [&](double x1, double x2) {
          const double x[2] = {x1, x2};
          return net.score(x);
        },
        bounds_of(data), config.grid_resolution);
    boundary = grid_csv(grid);
    write_file(join(config.out, "boundary.csv"), boundary);
  }
  write_file(join(config.out, "model.json"), model_to_json(r.model));
  write_file(join(config.out, "samples.csv"), samples);
  write_file(join(config.out, "metrics.json"), r.metrics_json);
  json hashes = {{"model", model_hash},
                 {"samples", sha256_hex(samples)},
                 {"metrics", sha256_hex(r.metrics_json)}};
  if (!boundary.empty()) hashes["boundary"] = sha256_hex(boundary);
  write_file(join(config.out, "metadata.json"),
             metadata("train", config, hashes).dump(1) + "\n");
  return r;
}

std::vector<CompareRow> cmd_compare(const RunConfig& config) {
  config.validate();
  std::vector<CompareRow> rows;
  json report = json::array();
  for (const auto& name : config.datasets) {
    RunConfig sub = config;
    sub.datasets = {name};
    sub.out = join(config.out, name);
    const TrainResult q = cmd_train(sub);

    const Dataset data = make_dataset(sub, name);
    const auto runs = classical_train(config.shape(), data, config.classical());
    std::vector<double> aucs;
    json run_list = json::array();
    std::size_t excluded = 0;
    for (const auto& run : runs) {
      if (run.diverged) {
        ++excluded;
        std::clog << "notice: classical run " << run.index << " on " << name
                  << " diverged and is excluded\n";
      } else {
        aucs.push_back(run.auc);
      }
      run_list.push_back({{"run", run.index},
                          {"auc", run.diverged ? json(nullptr) : json(run.auc)},
                          {"objective", std::isfinite(run.objective)
                                            ? json(run.objective)
                                            : json(nullptr)},
                          {"params", run.params},
                          {"diverged", run.diverged}});
    }
    if (aucs.empty()) {
      throw SolverError("every classical run on '" + name + "' diverged");
    }
    CompareRow row{name, compare(q.auc, aucs), excluded};
    row.report.dataset = name;
    write_file(join(sub.out, "classical.json"),
               json{{"dataset", name}, {"runs", run_list}}.dump(1) + "\n");
    report.push_back({{"dataset", name},
                      {"quantum_auc", row.report.quantum_auc},
                      {"classical_median", row.report.classical_median},
                      {"classical_p20", row.report.classical_p20},
                      {"classical_p80", row.report.classical_p80},
                      {"classical_aucs", row.report.classical_aucs},
                      {"excluded_runs", excluded}});
    rows.push_back(std::move(row));
  }
  const std::string metrics = json{{"rows", report}}.dump(1) + "\n";
  write_file(join(config.out, "metrics.json"), metrics);
  write_file(join(config.out, "metadata.json"),
             metadata("compare", config, {{"metrics", sha256_hex(metrics)}})
                     .dump(1) +
                 "\n");
  return rows;
}

ReduceResult cmd_reduce(const ReduceConfig& config) {
  if (config.lambda && !(*config.lambda > 0.0)) {
    throw ConfigError("lambda: must be positive");
  }
  MultilinearPoly p = parse_poly_text(read_file(config.input));
  if (p.basis() == Basis::kSpin) p = to_unit(p);
  ReduceResult r;
  r.model = quadratize(p, config.lambda ? LambdaStrategy::fixed_value(*config.lambda)
                                        : LambdaStrategy::automatic());
  const std::size_t total = r.model.total_var_count();
  if (total > config.max_vars) {
    r.summary = "skipped: " + std::to_string(total) +
                " variables exceed the exhaustive limit of " +
                std::to_string(config.max_vars);
  } else {
    r.verification = verify_reduction(p, r.model, config.max_vars);
    const auto& v = *r.verification;
    if (v.passed) {
      r.summary = "pass, " + std::to_string(v.original_minimizers) + " minima";
    } else {
      r.summary = "fail: " + v.failure;
    }
  }
  std::ostringstream report;
  report << r.summary << '\n';
  if (r.verification) {
    const auto& v = *r.verification;
    report << "original_min " << format_double(v.original_min) << '\n'
           << "reduced_min " << format_double(v.reduced_min) << '\n'
           << "original_minimizers " << v.original_minimizers << '\n'
           << "reduced_projections " << v.reduced_projections << '\n';
    if (v.counterexample) {
      report << "counterexample ";
      for (auto b : *v.counterexample) report << static_cast<char>('0' + b);
      report << '\n';
    }
  }
  write_file(join(config.out, "reduced.txt"), to_text(r.model));
  write_file(join(config.out, "verification.txt"), report.str());
  return r;
}

Dataset cmd_dataset_gen(const RunConfig& config, const std::string& path) {
  config.validate();
  const Dataset d = make_dataset(config, config.datasets.front());
  std::vector<std::string> names = config.csv_features;
  if (names.empty()) {
    for (std::size_t j = 0; j < d.n_features; ++j) {
      names.push_back("x" + std::to_string(j + 1));
    }
  }
  std::error_code ec;
  const fs::path parent = fs::path(path).parent_path();
  if (!parent.empty()) fs::create_directories(parent, ec);
  if (ec) throw IoError("cannot create " + parent.string() + ": " + ec.message());
  save_csv(d, path, names, config.csv_label,
           parse_label_encoding(config.csv_label_encoding));
  return d;
}

}  // namespace qubonet
