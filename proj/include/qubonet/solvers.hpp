#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "qubonet/qubo.hpp"

namespace qubonet {

struct Sample {
  Assignment assignment;
  double energy = 0.0;
  std::uint64_t occurrences = 1;

  friend bool operator==(const Sample&, const Sample&) = default;
};

// Piecewise-linear hardware anneal schedule s(t), t in microseconds. Local
// solvers never read it; it is forwarded to remote samplers and recorded in
// run metadata.
struct AnnealSchedule {
  std::vector<std::pair<double, double>> points;  // (time_us, s)
  double s_q = 0.0;

  // Throws InvalidArgument unless time is non-decreasing, s in [0,1] and the
  // last point has s == 1.
  void validate() const;

  // Ramp to s_q over 20 us, hold until 80 us, finish at 100 us.
  static AnnealSchedule paused(double s_q = 0.2);
};

struct SamplerConfig {
  std::size_t num_reads = 300;
  std::uint64_t seed = 0;
  std::size_t sweeps = 1000;
  // Inverse temperatures at the first and last sweep, in units of
  // 1 / max|coefficient|.
  std::pair<double, double> beta_range{0.1, 10.0};
  std::optional<AnnealSchedule> schedule;
};

inline constexpr std::size_t kDefaultExactMaxVars = 24;

struct ExactResult {
  double min_energy = 0.0;
  // Every global minimizer, in increasing binary order (variable 0 is the
  // least significant bit).
  std::vector<Assignment> minimizers;
};

// Gray-code enumeration of all 2^n assignments. Energies include the offset.
// Assignments within 1e-9 * (1 + |min|) of the minimum count as ties. Throws
// SolverError above max_vars.
ExactResult exact_solve(const QuboModel& model,
                        std::size_t max_vars = kDefaultExactMaxVars);

// num_reads independent single-flip Metropolis anneals over a geometric
// beta ladder. Read r draws from an mt19937_64 seeded with seed + r. Each
// returned energy is recomputed from the model.
std::vector<Sample> sa_sample(const QuboModel& model,
                              const SamplerConfig& config);

// Least energy; ties go to the lexicographically smallest assignment.
const Sample& best_of(const std::vector<Sample>& samples);

// Uniform double in [0, 1) from the top 53 bits of a 64-bit draw. Used instead
// of std::uniform_real_distribution so streams match across standard
// libraries.
double unit_uniform(std::uint64_t bits);

}  // namespace qubonet
