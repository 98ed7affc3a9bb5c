#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string>

#include "qubonet/error.hpp"
#include "qubonet/kernels/kernels.hpp"
#include "qubonet/solvers.hpp"

namespace qubonet {

namespace {

// Incremental energies drift by rounding; resynchronize this often.
constexpr std::uint64_t kResyncInterval = std::uint64_t{1} << 16;

Assignment unpack(std::uint64_t mask, std::size_t n) {
  Assignment x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = (mask >> i) & 1;
  return x;
}

struct Candidate {
  std::uint64_t mask;
  double approx;
};

}  // namespace

ExactResult exact_solve(const QuboModel& model, std::size_t max_vars) {
  const std::size_t n = model.n_vars;
  if (n > max_vars || n > 40) {
    throw SolverError("exact solver limited to " + std::to_string(max_vars) +
                      " variables, model has " + std::to_string(n) +
                      "; use the simulated annealing solver instead");
  }
  const DenseQubo dense(model);
  const auto& kern = kernels::active();

  double scale = std::abs(model.offset);
  for (double h : model.linear) scale += std::abs(h);
  for (const auto& [ij, c] : model.quadratic) scale += std::abs(c);
  const double screen_tol = 1e-6 * (1.0 + scale);

  Assignment x(n, 0);
  std::vector<double> field(n, 0.0);
  std::uint64_t mask = 0;
  double energy = model.offset;

  double best = energy;
  std::vector<Candidate> candidates{{0, energy}};
  std::size_t prune_at = 1024;

  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t step = 1; step < total; ++step) {
    const std::size_t k = std::countr_zero(step);
    const double sign = x[k] ? -1.0 : 1.0;
    energy += sign * (dense.h[k] + field[k]);
    x[k] ^= 1;
    mask ^= std::uint64_t{1} << k;
    kern.add_scaled(field.data(), dense.row(k), sign, n);

    if (step % kResyncInterval == 0) {
      energy = dense.energy(x);
      std::fill(field.begin(), field.end(), 0.0);
      for (std::size_t j = 0; j < n; ++j) {
        if (x[j]) kern.add_scaled(field.data(), dense.row(j), 1.0, n);
      }
    }

    if (energy <= best + screen_tol) {
      best = std::min(best, energy);
      candidates.push_back({mask, energy});
      if (candidates.size() >= prune_at) {
        std::erase_if(candidates, [&](const Candidate& c) {
          return c.approx > best + screen_tol;
        });
        prune_at = std::max<std::size_t>(1024, 2 * candidates.size());
      }
    }
  }

  // Exact re-evaluation of the screened set decides the minimum and ties.
  std::vector<std::pair<std::uint64_t, double>> exact;
  exact.reserve(candidates.size());
  double min_energy = std::numeric_limits<double>::infinity();
  for (const auto& c : candidates) {
    if (c.approx > best + screen_tol) continue;
    const double e = model.energy(unpack(c.mask, n));
    exact.emplace_back(c.mask, e);
    min_energy = std::min(min_energy, e);
  }
  const double tie_tol = 1e-9 * (1.0 + std::abs(min_energy));
  std::vector<std::uint64_t> masks;
  for (const auto& [m, e] : exact) {
    if (e <= min_energy + tie_tol) masks.push_back(m);
  }
  std::sort(masks.begin(), masks.end());

  ExactResult result;
  result.min_energy = min_energy;
  result.minimizers.reserve(masks.size());
  for (std::uint64_t m : masks) result.minimizers.push_back(unpack(m, n));
  return result;
}

const Sample& best_of(const std::vector<Sample>& samples) {
  if (samples.empty()) throw InvalidArgument("best_of needs at least one sample");
  double min_energy = samples.front().energy;
  for (const auto& s : samples) min_energy = std::min(min_energy, s.energy);
  const double tol = 1e-12 * (1.0 + std::abs(min_energy));
  const Sample* best = nullptr;
  for (const auto& s : samples) {
    if (s.energy > min_energy + tol) continue;
    if (!best || s.assignment < best->assignment) best = &s;
  }
  return *best;
}

}  // namespace qubonet
