#include <cmath>

#include "qubonet/error.hpp"
#include "qubonet/solvers.hpp"

namespace qubonet {

void AnnealSchedule::validate() const {
  if (points.empty()) throw InvalidArgument("anneal schedule has no points");
  double prev_t = -INFINITY;
  for (const auto& [t, s] : points) {
    if (!(t >= prev_t)) {
      throw InvalidArgument("anneal schedule times must be non-decreasing");
    }
    if (!(s >= 0.0 && s <= 1.0)) {
      throw InvalidArgument("anneal schedule s values must lie in [0, 1]");
    }
    prev_t = t;
  }
  if (points.back().second != 1.0) {
    throw InvalidArgument("anneal schedule must end at s = 1");
  }
  if (!(s_q >= 0.0 && s_q <= 1.0)) {
    throw InvalidArgument("pause point s_q must lie in [0, 1]");
  }
}

AnnealSchedule AnnealSchedule::paused(double s_q) {
  AnnealSchedule s;
  s.s_q = s_q;
  s.points = {{0.0, 0.0}, {20.0, s_q}, {80.0, s_q}, {100.0, 1.0}};
  return s;
}

double unit_uniform(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

}  // namespace qubonet
