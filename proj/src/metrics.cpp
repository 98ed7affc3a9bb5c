#include "qubonet/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "qubonet/error.hpp"
#include "qubonet/poly.hpp"

namespace qubonet {

double roc_auc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) {
    throw InvalidArgument("scores and labels differ in length");
  }
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  // Sum of positive ranks with average ranks for tied groups.
  double pos_rank_sum = 0.0;
  std::size_t n_pos = 0, n_neg = 0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) {
      const int y = labels[order[k]];
      if (y == 1) {
        pos_rank_sum += avg;
        ++n_pos;
      } else if (y == -1) {
        ++n_neg;
      } else {
        throw InvalidArgument("labels must be -1 or +1");
      }
    }
    i = j;
  }
  if (n_pos == 0 || n_neg == 0) {
    throw InvalidArgument("AUC needs both classes");
  }
  const double np = static_cast<double>(n_pos);
  const double u = pos_rank_sum - np * (np + 1.0) / 2.0;
  return u / (np * static_cast<double>(n_neg));
}

DecisionGrid decision_grid(const std::function<double(double, double)>& predictor,
                           const GridBounds& b, std::size_t resolution) {
  if (resolution < 2) throw InvalidArgument("grid resolution must be >= 2");
  DecisionGrid g;
  const double steps = static_cast<double>(resolution - 1);
  // Weighted endpoints keep symmetric bounds exactly mirrored.
  auto at = [&](double lo, double hi, std::size_t i) {
    const double k = static_cast<double>(i);
    return (lo * (steps - k) + hi * k) / steps;
  };
  for (std::size_t i = 0; i < resolution; ++i) {
    g.x1.push_back(at(b.x1_lo, b.x1_hi, i));
    g.x2.push_back(at(b.x2_lo, b.x2_hi, i));
  }
  g.values.reserve(resolution * resolution);
  for (double x2 : g.x2) {
    for (double x1 : g.x1) g.values.push_back(predictor(x1, x2));
  }
  return g;
}

std::string grid_csv(const DecisionGrid& grid) {
  std::ostringstream os;
  os << "x1,x2,Y\n";
  for (std::size_t i2 = 0; i2 < grid.x2.size(); ++i2) {
    for (std::size_t i1 = 0; i1 < grid.x1.size(); ++i1) {
      os << format_double(grid.x1[i1]) << ',' << format_double(grid.x2[i2])
         << ',' << format_double(grid.at(i1, i2)) << '\n';
    }
  }
  return os.str();
}

double percentile_nearest_rank(std::vector<double> values, double p) {
  if (values.empty()) throw InvalidArgument("percentile of an empty sample");
  if (!(p >= 0.0 && p <= 100.0)) throw InvalidArgument("percentile out of range");
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  auto rank = static_cast<std::size_t>(std::ceil(p / 100.0 * n));
  rank = std::clamp<std::size_t>(rank, 1, values.size());
  return values[rank - 1];
}

double median(std::vector<double> values) {
  if (values.empty()) throw InvalidArgument("median of an empty sample");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

EvalReport compare(double quantum_auc, std::vector<double> classical_runs) {
  if (classical_runs.empty()) {
    throw InvalidArgument("compare needs at least one classical run");
  }
  EvalReport r;
  r.quantum_auc = quantum_auc;
  r.classical_median = median(classical_runs);
  r.classical_p20 = percentile_nearest_rank(classical_runs, 20.0);
  r.classical_p80 = percentile_nearest_rank(classical_runs, 80.0);
  r.classical_aucs = std::move(classical_runs);
  return r;
}

}  // namespace qubonet
