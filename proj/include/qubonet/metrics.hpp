#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qubonet {

// Mann-Whitney AUC: fraction of (positive, negative) pairs where the positive
// scores higher, ties counted one half. Throws InvalidArgument unless both
// classes are present.
double roc_auc(std::span<const double> scores, std::span<const int> labels);

struct GridBounds {
  double x1_lo = -1.0, x1_hi = 1.0;
  double x2_lo = -1.0, x2_hi = 1.0;
};

// Y on a resolution x resolution uniform grid; values[i2 * resolution + i1].
struct DecisionGrid {
  std::vector<double> x1, x2;
  std::vector<double> values;

  double at(std::size_t i1, std::size_t i2) const {
    return values[i2 * x1.size() + i1];
  }
};

DecisionGrid decision_grid(const std::function<double(double, double)>& predictor,
                           const GridBounds& bounds, std::size_t resolution);

// `x1,x2,Y` with a header row.
std::string grid_csv(const DecisionGrid& grid);

// Nearest-rank percentile of an unsorted sample: the value of rank
// ceil(p/100 * n), with rank at least 1.
double percentile_nearest_rank(std::vector<double> values, double p);
// Middle value, or the mean of the two middle values for even counts.
double median(std::vector<double> values);

struct EvalReport {
  std::string dataset;
  double quantum_auc = 0.0;
  std::vector<double> classical_aucs;
  double classical_median = 0.0;
  double classical_p20 = 0.0;
  double classical_p80 = 0.0;
  std::optional<DecisionGrid> boundary_grid;
};

// Throws InvalidArgument when classical_runs is empty.
EvalReport compare(double quantum_auc, std::vector<double> classical_runs);

}  // namespace qubonet
