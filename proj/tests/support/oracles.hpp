#pragma once

// Independent reference computations used only by the tests. Nothing here
// calls into the library code under test except for plain data types.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "qubonet/poly.hpp"
#include "qubonet/qubo.hpp"

namespace oracle {

using qubonet::Assignment;
using qubonet::Basis;
using qubonet::Monomial;
using qubonet::MultilinearPoly;
using qubonet::Var;

inline Assignment bits(std::uint64_t mask, std::size_t n) {
  Assignment x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = (mask >> i) & 1;
  return x;
}

// Term-by-term evaluation with values given as doubles (spin or unit).
inline double eval_terms(const MultilinearPoly& p, const std::vector<double>& val) {
  double s = 0.0;
  for (const auto& [m, c] : p.terms()) {
    double t = c;
    for (Var v : m.vars()) t *= val.at(v);
    s += t;
  }
  return s;
}

inline double eval_unit(const MultilinearPoly& p, const Assignment& x) {
  std::vector<double> v(x.begin(), x.end());
  return eval_terms(p, v);
}

// Spin value of bit b under t = (s + 1) / 2.
inline std::vector<double> spins_of(const Assignment& x) {
  std::vector<double> s;
  for (auto b : x) s.push_back(b ? 1.0 : -1.0);
  return s;
}

// Dense double-loop energy straight from the stored maps.
inline double qubo_energy(const qubonet::QuboModel& q, const Assignment& x) {
  double e = q.offset;
  for (std::size_t i = 0; i < q.n_vars; ++i) e += q.linear[i] * x[i];
  for (const auto& [ij, c] : q.quadratic) e += c * x[ij.first] * x[ij.second];
  return e;
}

struct BruteMin {
  double min = std::numeric_limits<double>::infinity();
  std::set<Assignment> argmin;
};

inline BruteMin brute_min(const std::function<double(const Assignment&)>& f,
                          std::size_t n, double tol = 1e-9) {
  std::vector<double> vals(std::size_t{1} << n);
  BruteMin r;
  for (std::uint64_t m = 0; m < vals.size(); ++m) {
    vals[m] = f(bits(m, n));
    r.min = std::min(r.min, vals[m]);
  }
  for (std::uint64_t m = 0; m < vals.size(); ++m) {
    if (vals[m] <= r.min + tol * (1.0 + std::abs(r.min))) r.argmin.insert(bits(m, n));
  }
  return r;
}

// Random multilinear polynomial with integer coefficients in [-cmax, cmax].
inline MultilinearPoly random_poly(std::mt19937_64& rng, Basis basis,
                                   std::size_t n_vars, std::size_t max_degree,
                                   std::size_t n_terms, int cmax = 5) {
  MultilinearPoly p(basis);
  std::uniform_int_distribution<int> coef(-cmax, cmax);
  std::uniform_int_distribution<std::size_t> deg(0, max_degree);
  for (std::size_t t = 0; t < n_terms; ++t) {
    std::vector<Var> pool(n_vars);
    for (std::size_t i = 0; i < n_vars; ++i) pool[i] = static_cast<Var>(i);
    std::shuffle(pool.begin(), pool.end(), rng);
    const std::size_t d = std::min(deg(rng), n_vars);
    pool.resize(d);
    const int c = coef(rng);
    if (c != 0) p.add_term(Monomial(pool), c);
  }
  return p;
}

// Brute-force Mann-Whitney over all (positive, negative) pairs.
inline double auc_pairs(const std::vector<double>& s, const std::vector<int>& y) {
  double wins = 0.0, pairs = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (y[i] != 1) continue;
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (y[j] != -1) continue;
      pairs += 1.0;
      if (s[i] > s[j]) wins += 1.0;
      else if (s[i] == s[j]) wins += 0.5;
    }
  }
  return wins / pairs;
}

// Y = sum_u v[u] g(sum_j w[u][j] x[j]) + v0 with g given by coefficients.
inline double net_output(const std::vector<std::vector<double>>& w,
                         const std::vector<double>& v, double v0,
                         const std::vector<double>& g,
                         const std::vector<double>& x) {
  double y = v0;
  for (std::size_t u = 0; u < w.size(); ++u) {
    double z = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) z += w[u][j] * x[j];
    double gz = 0.0, p = 1.0;
    for (double c : g) {
      gz += c * p;
      p *= z;
    }
    y += v[u] * gz;
  }
  return y;
}

// Parameter value straight from the encoding formula with bit 0 most
// significant: lo + (hi - lo) * (integer value) / (2^nb - 1).
inline double decode(const std::vector<int>& b, double lo = -1.0, double hi = 1.0) {
  double k = 0.0;
  for (int bit : b) k = 2.0 * k + bit;
  return lo + (hi - lo) * k / (std::ldexp(1.0, static_cast<int>(b.size())) - 1.0);
}

}  // namespace oracle
