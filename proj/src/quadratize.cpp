#include "qubonet/quadratize.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "qubonet/error.hpp"
#include "qubonet/solvers.hpp"
#include "text_util.hpp"

namespace qubonet {

MultilinearPoly constraint_gadget(Var z, Var x, Var y, double lambda) {
  if (!(lambda > 0.0)) throw InvalidArgument("gadget lambda must be positive");
  if (z == x || z == y || x == y) {
    throw InvalidArgument("gadget needs three distinct variables");
  }
  MultilinearPoly q(Basis::kUnit);
  q.add_term(Monomial{x, y}, lambda);
  q.add_term(Monomial{z, x}, -2.0 * lambda);
  q.add_term(Monomial{z, y}, -2.0 * lambda);
  q.add_term(Monomial{z}, 3.0 * lambda);
  return q;
}

std::optional<std::pair<Var, Var>> select_reduction_pair(
    const MultilinearPoly& p) {
  std::map<std::pair<Var, Var>, std::size_t> counts;
  for (const auto& [m, c] : p.terms()) {
    if (m.degree() < 3) continue;
    auto v = m.vars();
    for (std::size_t i = 0; i < v.size(); ++i) {
      for (std::size_t j = i + 1; j < v.size(); ++j) ++counts[{v[i], v[j]}];
    }
  }
  if (counts.empty()) return std::nullopt;
  // Map iteration is lexicographic, so strict > keeps the smallest on ties.
  auto best = counts.begin();
  for (auto it = counts.begin(); it != counts.end(); ++it) {
    if (it->second > best->second) best = it;
  }
  return best->first;
}

QuadratizedModel quadratize(const MultilinearPoly& p, LambdaStrategy strategy,
                            std::optional<Var> original_var_count) {
  if (p.basis() != Basis::kUnit) {
    throw InvalidArgument("quadratize expects a unit-basis polynomial");
  }
  if (strategy.fixed && !(*strategy.fixed > 0.0)) {
    throw InvalidArgument("fixed lambda must be positive");
  }
  QuadratizedModel model;
  model.original_var_count = original_var_count.value_or(p.var_bound());
  if (model.original_var_count < p.var_bound()) {
    throw InvalidArgument("original_var_count smaller than the polynomial");
  }
  MultilinearPoly current = p;
  Var next = model.original_var_count;
  while (auto pair = select_reduction_pair(current)) {
    const auto [x, y] = *pair;
    const double lambda =
        strategy.fixed.value_or(1.0 + current.abs_coefficient_sum());
    const Var z = next++;
    current = substitute_pair(current, x, y, z);
    current += constraint_gadget(z, x, y, lambda);
    model.map.entries.push_back({z, x, y, lambda});
    model.degree_trace.push_back(current.degree());
  }
  model.quadratic = std::move(current);
  return model;
}

Assignment lift_assignment(const ReductionMap& map,
                           std::span<const std::uint8_t> original) {
  Assignment out(original.begin(), original.end());
  if (map.empty()) return out;
  const Var first_aux = map.entries.front().aux;
  if (original.size() != first_aux) {
    throw InvalidArgument("assignment covers " +
                          std::to_string(original.size()) +
                          " variables, reduction expects " +
                          std::to_string(first_aux) + " original variables");
  }
  for (const auto& e : map.entries) {
    if (e.aux != out.size() || e.parent_a >= e.aux || e.parent_b >= e.aux) {
      throw InvalidArgument("reduction map is not in dependency order");
    }
    out.push_back(out[e.parent_a] & out[e.parent_b]);
  }
  return out;
}

namespace {

Assignment bits_of(std::uint64_t mask, std::size_t n) {
  Assignment x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = (mask >> i) & 1;
  return x;
}

}  // namespace

VerificationReport verify_reduction(const MultilinearPoly& p,
                                    const QuadratizedModel& model,
                                    std::size_t max_vars) {
  const std::size_t n_orig = model.original_var_count;
  const std::size_t n_total = model.total_var_count();
  if (n_total > max_vars) {
    throw SolverError("reduced model has " + std::to_string(n_total) +
                      " variables, above the exhaustive limit of " +
                      std::to_string(max_vars) +
                      "; use a sampling-based spot check instead");
  }
  if (p.var_bound() > n_orig) {
    throw InvalidArgument("polynomial uses variables beyond the model");
  }
  VerificationReport report;

  // (c) energy identity on lifted points, and the original minimum.
  const QuboModel qubo = qubo_from_poly(model.quadratic, n_total);
  double orig_min = INFINITY;
  std::vector<std::pair<Assignment, double>> orig_values;
  orig_values.reserve(std::size_t{1} << n_orig);
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << n_orig); ++m) {
    Assignment s = bits_of(m, n_orig);
    const double pv = evaluate(p, std::span<const std::uint8_t>(s));
    const double qv = qubo.energy(lift_assignment(model.map, s));
    if (report.failure.empty() &&
        std::abs(pv - qv) > kVerifyTolerance * (1.0 + std::abs(pv))) {
      report.failure = "lifted energy " + format_double(qv) +
                       " differs from polynomial value " + format_double(pv);
      report.counterexample = s;
    }
    orig_min = std::min(orig_min, pv);
    orig_values.emplace_back(std::move(s), pv);
  }
  std::set<Assignment> orig_minimizers;
  const double tol = kVerifyTolerance * (1.0 + std::abs(orig_min));
  for (auto& [s, v] : orig_values) {
    if (v <= orig_min + tol) orig_minimizers.insert(s);
  }

  const ExactResult reduced = exact_solve(qubo, max_vars);
  std::set<Assignment> projections;
  for (const auto& a : reduced.minimizers) {
    projections.insert(Assignment(a.begin(), a.begin() + n_orig));
  }

  report.original_min = orig_min;
  report.reduced_min = reduced.min_energy;
  report.original_minimizers = orig_minimizers.size();
  report.reduced_projections = projections.size();

  if (!report.failure.empty()) return report;
  if (std::abs(orig_min - reduced.min_energy) > tol) {
    report.failure = "minimum energy changed from " + format_double(orig_min) +
                     " to " + format_double(reduced.min_energy);
    report.counterexample = reduced.minimizers.front();
    return report;
  }
  if (projections != orig_minimizers) {
    report.failure = "minimizer sets differ: " +
                     std::to_string(orig_minimizers.size()) + " original vs " +
                     std::to_string(projections.size()) + " projected";
    for (const auto& a : reduced.minimizers) {
      Assignment head(a.begin(), a.begin() + n_orig);
      if (!orig_minimizers.contains(head)) {
        report.counterexample = a;
        break;
      }
    }
    return report;
  }
  report.passed = true;
  return report;
}

std::string to_text(const QuadratizedModel& model) {
  std::ostringstream os;
  os << "#original_vars: " << model.original_var_count << '\n';
  os << to_text(model.quadratic);
  os << "#reduction\n";
  for (const auto& e : model.map.entries) {
    os << e.aux << ' ' << e.parent_a << ' ' << e.parent_b << ' '
       << format_double(e.lambda) << '\n';
  }
  return os.str();
}

QuadratizedModel parse_quadratized_text(std::string_view text) {
  QuadratizedModel model;
  std::optional<Var> original;
  const auto lines = split_lines(text);
  std::size_t reduction_line = lines.size();
  for (std::size_t i = 0; i < lines.size(); ++i) {
    auto line = trim(lines[i]);
    if (line == "#reduction") {
      reduction_line = i;
      break;
    }
    if (line.starts_with("#original_vars:")) {
      Var n = 0;
      if (!parse_uint(trim(line.substr(15)), n)) {
        throw ParseError("bad #original_vars value", i + 1);
      }
      original = n;
    }
  }
  // Everything before #reduction is polynomial text.
  std::size_t poly_end = 0;
  for (std::size_t i = 0; i < reduction_line; ++i) {
    poly_end += lines[i].size() + 1;
  }
  poly_end = std::min(poly_end, text.size());
  model.quadratic = detail::parse_poly_lines(text.substr(0, poly_end), 0);
  if (model.quadratic.basis() != Basis::kUnit) {
    throw ParseError("quadratized model must use the unit basis", 0);
  }
  for (std::size_t i = reduction_line + 1; i < lines.size(); ++i) {
    auto line = trim(lines[i]);
    if (line.empty() || line.front() == '#') continue;
    auto tokens = split_ws(line);
    ReductionEntry e;
    if (tokens.size() != 4 || !parse_uint(tokens[0], e.aux) ||
        !parse_uint(tokens[1], e.parent_a) ||
        !parse_uint(tokens[2], e.parent_b) ||
        !parse_double(tokens[3], e.lambda)) {
      throw ParseError("expected 'aux parent_a parent_b lambda'", i + 1);
    }
    model.map.entries.push_back(e);
  }
  if (original) {
    model.original_var_count = *original;
  } else if (!model.map.empty()) {
    model.original_var_count = model.map.entries.front().aux;
  } else {
    model.original_var_count = model.quadratic.var_bound();
  }
  for (std::size_t k = 0; k < model.map.size(); ++k) {
    const auto& e = model.map.entries[k];
    if (e.aux != model.original_var_count + k || e.parent_a >= e.aux ||
        e.parent_b >= e.aux || !(e.lambda > 0.0)) {
      throw ParseError("reduction entry " + std::to_string(k) +
                           " breaks dependency order",
                       0);
    }
  }
  return model;
}

}  // namespace qubonet
