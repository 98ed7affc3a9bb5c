#pragma once

// Reproducible runs: compile, train, compare, reduce and dataset generation.
// Every run writes a metadata.json whose "config" member can be fed back
// through --config to repeat the run exactly with local solvers.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qubonet/classical.hpp"
#include "qubonet/dataset.hpp"
#include "qubonet/metrics.hpp"
#include "qubonet/network.hpp"
#include "qubonet/quadratize.hpp"
#include "qubonet/solvers.hpp"

namespace qubonet {

inline constexpr std::string_view kVersion = "0.1.0";

struct RunConfig {
  // Network shape.
  std::size_t features = 2;
  std::size_t hidden = 2;
  std::size_t bits = 1;
  std::string activation = "square";
  bool first_layer_bias = false;
  std::pair<double, double> last_bias_levels{-0.5, 0.0};

  // Data: generator names (circles, quadrants, bands) or "csv".
  std::vector<std::string> datasets{"circles"};
  std::size_t n = 200;
  double noise = 0.1;
  std::vector<double> band_offsets{-0.8, 0.0, 0.8};
  double band_width = 0.35;
  double band_extent = 2.0;
  std::string csv;
  std::vector<std::string> csv_features;
  std::string csv_label = "label";
  std::string csv_label_encoding = "1/-1";

  // Compilation.
  std::string compile_path = "auto";  // auto | structured | generic
  std::optional<double> lambda;

  // Solving.
  std::string solver = "exact";  // exact | sa | remote
  std::size_t reads = 300;
  std::uint64_t seed = 0;
  std::size_t sweeps = 1000;
  std::pair<double, double> beta_range{0.1, 10.0};
  std::size_t exact_max_vars = kDefaultExactMaxVars;
  double schedule_s_q = 0.2;

  // Classical baseline.
  double omega = 5.0;
  std::size_t runs = 10;
  std::size_t adam_steps = 3000;
  double adam_lr = 0.05;

  std::size_t grid_resolution = 101;
  std::string out = "run";

  // Throws ConfigError naming the offending field.
  void validate() const;

  NetworkShape shape() const;
  SamplerConfig sampler() const;
  ClassicalConfig classical() const;

  std::string to_json() const;
  // Accepts a bare config object or a metadata document with a "config"
  // member. Missing fields keep their defaults; unknown fields are rejected.
  static RunConfig from_json(std::string_view text);
  static RunConfig load(const std::string& path);
};

// Resolves one dataset entry of the config.
Dataset make_dataset(const RunConfig& config, const std::string& name);

struct CompileResult {
  CompiledModel model;
  std::string model_hash;
};

struct TrainResult {
  CompiledModel model;
  std::vector<Sample> samples;
  Sample best;
  TrainedNetwork network;
  double auc = 0.0;
  std::string metrics_json;
};

struct CompareRow {
  std::string dataset;
  EvalReport report;
  std::size_t excluded_runs = 0;
};

struct ReduceConfig {
  std::string input;
  std::optional<double> lambda;
  std::size_t max_vars = kDefaultVerifyMaxVars;
  std::string out = "reduce";
};

struct ReduceResult {
  QuadratizedModel model;
  std::optional<VerificationReport> verification;
  // One line: "pass, K minima", "fail: ...", or the skip notice.
  std::string summary;
};

// Each writes its artifacts under config.out.
CompileResult cmd_compile(const RunConfig& config);
TrainResult cmd_train(const RunConfig& config);
std::vector<CompareRow> cmd_compare(const RunConfig& config);
ReduceResult cmd_reduce(const ReduceConfig& config);
// Writes the first configured dataset to `path` as CSV.
Dataset cmd_dataset_gen(const RunConfig& config, const std::string& path);

// Reads a whole file; throws IoError.
std::string read_file(const std::string& path);
// Writes a whole file, creating parent directories; throws IoError.
void write_file(const std::string& path, std::string_view content);

}  // namespace qubonet
