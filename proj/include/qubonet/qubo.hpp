#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qubonet/poly.hpp"

namespace qubonet {

// One 0/1 value per variable.
using Assignment = std::vector<std::uint8_t>;

// E(t) = offset + sum_i linear[i] t_i + sum_{i<j} quadratic[(i,j)] t_i t_j
struct QuboModel {
  std::size_t n_vars = 0;
  std::vector<double> linear;
  std::map<std::pair<Var, Var>, double> quadratic;
  double offset = 0.0;

  QuboModel() = default;
  explicit QuboModel(std::size_t n) : n_vars(n), linear(n, 0.0) {}

  void add_linear(Var i, double c);
  // Order-insensitive; i == j folds into the linear term (t^2 = t).
  void add_quadratic(Var i, Var j, double c);

  double energy(std::span<const std::uint8_t> x) const;
  double max_abs_coefficient() const;

  friend bool operator==(const QuboModel&, const QuboModel&) = default;
};

// `p` must be unit basis with degree <= 2. n_vars defaults to p.var_bound().
QuboModel qubo_from_poly(const MultilinearPoly& p, std::size_t n_vars = 0);
MultilinearPoly poly_from_qubo(const QuboModel& q);

// Ising form (h, J, offset) of the same energy function.
MultilinearPoly to_ising(const QuboModel& q);

// `# qubo n_vars=<n> offset=<v>` header, then `i j value` lines with i <= j;
// i == j rows carry linear terms.
std::string to_qubo_text(const QuboModel& q);
QuboModel parse_qubo_text(std::string_view text);

// Row-major symmetric coupling matrix for the solvers' inner loops.
struct DenseQubo {
  std::size_t n = 0;
  std::vector<double> h;
  std::vector<double> coupling;  // n*n, zero diagonal
  double offset = 0.0;

  explicit DenseQubo(const QuboModel& q);
  const double* row(std::size_t i) const { return coupling.data() + i * n; }
  double energy(std::span<const std::uint8_t> x) const;
};

}  // namespace qubonet
