#include "qubonet/classical.hpp"

#include <cmath>
#include <random>

#include "qubonet/error.hpp"
#include "qubonet/metrics.hpp"
#include "qubonet/solvers.hpp"

namespace qubonet {

std::size_t classical_param_count(const NetworkShape& shape) {
  return shape.unit_count() * shape.input_count() + shape.unit_count() +
         (shape.separate_output_bias() ? 1 : 0);
}

std::pair<double, double> classical_levels(const NetworkShape& shape,
                                           std::size_t k) {
  const std::size_t n_hidden = shape.unit_count() * shape.input_count();
  const bool is_bias = shape.separate_output_bias()
                           ? k == classical_param_count(shape) - 1
                           : k == n_hidden;  // v of the extra unit 0
  return is_bias ? shape.last_bias_levels : std::pair{-1.0, 1.0};
}

double level_penalty(double p, double a, double b) {
  const double d = (p - a) * (p - b);
  return d * d;
}

double level_penalty_grad(double p, double a, double b) {
  return 2.0 * (p - a) * (p - b) * (2.0 * p - a - b);
}

double classical_objective(const NetworkShape& shape, const Dataset& scaled,
                           std::span<const double> params, double omega,
                           std::span<double> grad) {
  const std::size_t U = shape.unit_count(), J = shape.input_count();
  const std::size_t P = classical_param_count(shape);
  if (params.size() != P) throw InvalidArgument("wrong parameter count");
  if (!grad.empty() && grad.size() != P) {
    throw InvalidArgument("wrong gradient size");
  }
  if (scaled.size() == 0) throw InvalidArgument("empty training set");
  const double* w = params.data();
  const double* v = w + U * J;
  const double v0 = shape.separate_output_bias() ? params[P - 1] : 0.0;
  for (double& g : grad) g = 0.0;

  const double inv_n = 1.0 / static_cast<double>(scaled.size());
  std::vector<double> in(J), z(U);
  double loss = 0.0;
  for (std::size_t a = 0; a < scaled.size(); ++a) {
    std::size_t j0 = 0;
    if (shape.first_layer_bias) in[j0++] = 1.0;
    for (double x : scaled.row(a)) in[j0++] = x;
    double y = v0;
    for (std::size_t u = 0; u < U; ++u) {
      z[u] = 0.0;
      for (std::size_t j = 0; j < J; ++j) z[u] += w[u * J + j] * in[j];
      y += v[u] * shape.activation(z[u]);
    }
    const double r = y - scaled.labels[a];
    loss += inv_n * r * r;
    if (grad.empty()) continue;
    const double dy = 2.0 * inv_n * r;
    for (std::size_t u = 0; u < U; ++u) {
      grad[U * J + u] += dy * shape.activation(z[u]);
      const double dz = dy * v[u] * shape.activation.derivative(z[u]);
      for (std::size_t j = 0; j < J; ++j) grad[u * J + j] += dz * in[j];
    }
    if (shape.separate_output_bias()) grad[P - 1] += dy;
  }
  for (std::size_t k = 0; k < P; ++k) {
    const auto [lo, hi] = classical_levels(shape, k);
    loss += omega * level_penalty(params[k], lo, hi);
    if (!grad.empty()) grad[k] += omega * level_penalty_grad(params[k], lo, hi);
  }
  return loss;
}

TrainedNetwork classical_network(const NetworkShape& shape,
                                 const FeatureScaler& scaler,
                                 std::span<const double> params) {
  const std::size_t U = shape.unit_count(), J = shape.input_count();
  if (params.size() != classical_param_count(shape)) {
    throw InvalidArgument("wrong parameter count");
  }
  std::vector<double> hidden(params.begin(), params.begin() + U * J);
  std::vector<double> output(params.begin() + U * J,
                             params.begin() + U * J + U);
  const double bias = shape.separate_output_bias() ? params.back() : 0.0;
  return TrainedNetwork(shape, scaler, std::move(hidden), std::move(output),
                        bias);
}

std::vector<ClassicalRun> classical_train(const NetworkShape& shape,
                                          const Dataset& data,
                                          const ClassicalConfig& config) {
  shape.validate();
  if (!(config.omega >= 0.0)) throw ConfigError("omega: must be non-negative");
  if (config.runs < 1) throw ConfigError("runs: must be at least 1");
  if (!data.has_both_classes()) {
    throw InvalidArgument("classical training needs both classes");
  }
  const FeatureScaler scaler = FeatureScaler::fit(data);
  const Dataset scaled = scaler.transform(data);
  const std::size_t P = classical_param_count(shape);
  const AdamConfig& adam = config.adam;

  std::vector<ClassicalRun> runs;
  for (std::size_t r = 0; r < config.runs; ++r) {
    ClassicalRun run;
    run.index = r;
    std::mt19937_64 rng(config.seed + r);
    run.params.resize(P);
    for (std::size_t k = 0; k < P; ++k) {
      const auto [lo, hi] = classical_levels(shape, k);
      run.params[k] = lo + (hi - lo) * unit_uniform(rng());
    }
    std::vector<double> g(P), m(P, 0.0), s(P, 0.0);
    double b1t = 1.0, b2t = 1.0;
    for (std::size_t t = 0; t < adam.steps; ++t) {
      const double f =
          classical_objective(shape, scaled, run.params, config.omega, g);
      if (!std::isfinite(f)) {
        run.diverged = true;
        break;
      }
      b1t *= adam.beta1;
      b2t *= adam.beta2;
      for (std::size_t k = 0; k < P; ++k) {
        m[k] = adam.beta1 * m[k] + (1.0 - adam.beta1) * g[k];
        s[k] = adam.beta2 * s[k] + (1.0 - adam.beta2) * g[k] * g[k];
        const double mh = m[k] / (1.0 - b1t);
        const double sh = s[k] / (1.0 - b2t);
        run.params[k] -= adam.lr * mh / (std::sqrt(sh) + adam.eps);
      }
    }
    run.objective = classical_objective(shape, scaled, run.params, config.omega);
    if (!std::isfinite(run.objective)) run.diverged = true;
    if (!run.diverged) {
      const auto net = classical_network(shape, scaler, run.params);
      run.auc = roc_auc(net.scores(data), data.labels);
    }
    runs.push_back(std::move(run));
  }
  return runs;
}

}  // namespace qubonet
