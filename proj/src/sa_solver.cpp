#include <cmath>
#include <random>

#include "qubonet/kernels/kernels.hpp"
#include "qubonet/solvers.hpp"

namespace qubonet {

namespace {

std::vector<double> beta_ladder(const SamplerConfig& config, double scale) {
  std::vector<double> betas(config.sweeps);
  if (config.sweeps == 0) return betas;
  const double b0 = config.beta_range.first / scale;
  const double b1 = config.beta_range.second / scale;
  if (config.sweeps == 1) {
    betas[0] = b1;
    return betas;
  }
  const double ratio = std::log(b1 / b0);
  for (std::size_t s = 0; s < config.sweeps; ++s) {
    const double frac =
        static_cast<double>(s) / static_cast<double>(config.sweeps - 1);
    betas[s] = b0 * std::exp(ratio * frac);
  }
  return betas;
}

Sample anneal_once(const QuboModel& model, const DenseQubo& dense,
                   const std::vector<double>& betas, std::uint64_t seed) {
  const std::size_t n = dense.n;
  const auto& kern = kernels::active();
  std::mt19937_64 rng(seed);

  Assignment x(n);
  for (auto& b : x) b = static_cast<std::uint8_t>(rng() >> 63);
  std::vector<double> field(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    if (x[j]) kern.add_scaled(field.data(), dense.row(j), 1.0, n);
  }

  for (double beta : betas) {
    for (std::size_t k = 0; k < n; ++k) {
      const double sign = x[k] ? -1.0 : 1.0;
      const double delta = sign * (dense.h[k] + field[k]);
      if (delta > 0.0 && unit_uniform(rng()) >= std::exp(-beta * delta)) {
        continue;
      }
      x[k] ^= 1;
      kern.add_scaled(field.data(), dense.row(k), sign, n);
    }
  }
  Sample s;
  s.energy = model.energy(x);
  s.assignment = std::move(x);
  s.occurrences = 1;
  return s;
}

}  // namespace

std::vector<Sample> sa_sample(const QuboModel& model,
                              const SamplerConfig& config) {
  const DenseQubo dense(model);
  double scale = model.max_abs_coefficient();
  if (scale == 0.0) scale = 1.0;
  const auto betas = beta_ladder(config, scale);
  std::vector<Sample> samples;
  samples.reserve(config.num_reads);
  for (std::size_t r = 0; r < config.num_reads; ++r) {
    samples.push_back(anneal_once(model, dense, betas, config.seed + r));
  }
  return samples;
}

}  // namespace qubonet
