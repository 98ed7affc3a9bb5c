#pragma once

// Degree reduction of unit-basis polynomials to quadratic form.
//
// Each step replaces a variable pair (x, y) by a fresh auxiliary z in every
// monomial that contains both, and adds the constraint gadget
//   Q(z; x, y) = lambda * (x*y - 2*z*(x + y) + 3*z)
// which is zero exactly when z == x*y and at least lambda otherwise. Repeating
// until every monomial has degree <= 2 yields a quadratic whose global minima
// project onto the global minima of the input.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qubonet/poly.hpp"
#include "qubonet/qubo.hpp"

namespace qubonet {

struct ReductionEntry {
  Var aux = 0;
  Var parent_a = 0;
  Var parent_b = 0;
  double lambda = 0.0;

  friend bool operator==(const ReductionEntry&, const ReductionEntry&) =
      default;
};

// Substitutions in the order they were made. Parents of entry k are original
// variables or auxiliaries of entries before k.
struct ReductionMap {
  std::vector<ReductionEntry> entries;

  bool empty() const { return entries.empty(); }
  std::size_t size() const { return entries.size(); }
  friend bool operator==(const ReductionMap&, const ReductionMap&) = default;
};

// How the gadget strength is chosen for each substitution.
struct LambdaStrategy {
  // nullopt: 1 + sum of |c| over the non-constant terms of the polynomial at
  // the time of substitution. That bound is sufficient for minimum
  // preservation.
  std::optional<double> fixed;

  static LambdaStrategy automatic() { return {}; }
  static LambdaStrategy fixed_value(double v) { return {v}; }
};

struct QuadratizedModel {
  MultilinearPoly quadratic{Basis::kUnit};
  ReductionMap map;
  Var original_var_count = 0;
  // Maximum degree after each substitution.
  std::vector<std::size_t> degree_trace;

  Var total_var_count() const {
    return original_var_count + static_cast<Var>(map.size());
  }
};

MultilinearPoly constraint_gadget(Var z, Var x, Var y, double lambda);

// Pair occurring in the most monomials of degree >= 3; ties go to the
// lexicographically smallest (x, y). nullopt when the degree is already <= 2.
std::optional<std::pair<Var, Var>> select_reduction_pair(
    const MultilinearPoly& p);

// `original_var_count` defaults to p.var_bound(); aux indices start there.
QuadratizedModel quadratize(const MultilinearPoly& p,
                            LambdaStrategy strategy = {},
                            std::optional<Var> original_var_count = {});

// Extends an assignment of the original variables with aux = a * b in entry
// order. `original` must have exactly one value per original variable.
Assignment lift_assignment(const ReductionMap& map,
                           std::span<const std::uint8_t> original);

struct VerificationReport {
  bool passed = false;
  double original_min = 0.0;
  double reduced_min = 0.0;
  std::size_t original_minimizers = 0;
  std::size_t reduced_projections = 0;
  // Empty when passed.
  std::string failure;
  std::optional<Assignment> counterexample;
};

inline constexpr std::size_t kDefaultVerifyMaxVars = 22;
inline constexpr double kVerifyTolerance = 1e-9;

// Exhaustive check of a reduction: equal minimum energies, equal minimizer
// sets after projection, and quadratic(lift(s)) == p(s) for every s. Throws
// SolverError when the total variable count exceeds max_vars.
VerificationReport verify_reduction(const MultilinearPoly& p,
                                    const QuadratizedModel& model,
                                    std::size_t max_vars = kDefaultVerifyMaxVars);

// Polynomial text plus `#original_vars: N` and a `#reduction` section with
// one `aux parent_a parent_b lambda` line per entry.
std::string to_text(const QuadratizedModel& model);
QuadratizedModel parse_quadratized_text(std::string_view text);

}  // namespace qubonet
