#pragma once

// Continuous-parameter baseline: the same architecture trained by Adam on
// MSE plus a penalty pulling every parameter toward its two allowed levels,
//   omega * sum_p (p - a)^2 (p - b)^2
// with (a, b) = (-1, 1) for ordinary weights and the output-bias levels for
// the output bias.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "qubonet/dataset.hpp"
#include "qubonet/network.hpp"

namespace qubonet {

struct AdamConfig {
  double lr = 0.05;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  std::size_t steps = 3000;
};

struct ClassicalConfig {
  double omega = 5.0;
  std::size_t runs = 10;
  std::uint64_t seed = 0;
  AdamConfig adam;
};

// Parameter vector in ParamLayout order: hidden weights, output weights and,
// when separate, the output bias.
std::size_t classical_param_count(const NetworkShape& shape);
// Allowed levels (a, b) of parameter k.
std::pair<double, double> classical_levels(const NetworkShape& shape,
                                           std::size_t k);

double level_penalty(double p, double a, double b);
double level_penalty_grad(double p, double a, double b);

// MSE over already scaled data plus the level penalty. Fills `grad` when
// non-empty (must have classical_param_count entries).
double classical_objective(const NetworkShape& shape, const Dataset& scaled,
                           std::span<const double> params, double omega,
                           std::span<double> grad = {});

TrainedNetwork classical_network(const NetworkShape& shape,
                                 const FeatureScaler& scaler,
                                 std::span<const double> params);

struct ClassicalRun {
  std::size_t index = 0;
  std::vector<double> params;
  double objective = 0.0;
  double auc = 0.0;
  // Non-finite objective during training; excluded from comparisons.
  bool diverged = false;
};

// Run r starts from parameters drawn with seed + r. AUC is scored on `data`.
std::vector<ClassicalRun> classical_train(const NetworkShape& shape,
                                          const Dataset& data,
                                          const ClassicalConfig& config);

}  // namespace qubonet
