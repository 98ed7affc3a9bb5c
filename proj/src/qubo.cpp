#include "qubonet/qubo.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

#include "qubonet/error.hpp"
#include "text_util.hpp"

namespace qubonet {

void QuboModel::add_linear(Var i, double c) {
  if (i >= n_vars) throw InvalidArgument("linear index out of range");
  linear[i] += c;
}

void QuboModel::add_quadratic(Var i, Var j, double c) {
  if (i >= n_vars || j >= n_vars) {
    throw InvalidArgument("quadratic index out of range");
  }
  if (i == j) {
    linear[i] += c;
    return;
  }
  if (i > j) std::swap(i, j);
  auto [it, inserted] = quadratic.try_emplace({i, j}, c);
  if (!inserted) it->second += c;
  if (it->second == 0.0) quadratic.erase(it);
}

double QuboModel::energy(std::span<const std::uint8_t> x) const {
  if (x.size() != n_vars) {
    throw InvalidArgument("assignment has " + std::to_string(x.size()) +
                          " values, model has " + std::to_string(n_vars) +
                          " variables");
  }
  // Neumaier summation: gadget terms of size lambda cancel at consistent
  // assignments and would otherwise swamp the loss-sized remainder.
  double e = offset, comp = 0.0;
  auto add = [&](double c) {
    const double t = e + c;
    comp += std::abs(e) >= std::abs(c) ? (e - t) + c : (c - t) + e;
    e = t;
  };
  for (std::size_t i = 0; i < n_vars; ++i) {
    if (x[i]) add(linear[i]);
  }
  for (const auto& [ij, c] : quadratic) {
    if (x[ij.first] && x[ij.second]) add(c);
  }
  return e + comp;
}

double QuboModel::max_abs_coefficient() const {
  double m = 0.0;
  for (double h : linear) m = std::max(m, std::abs(h));
  for (const auto& [ij, c] : quadratic) m = std::max(m, std::abs(c));
  return m;
}

QuboModel qubo_from_poly(const MultilinearPoly& p, std::size_t n_vars) {
  if (p.basis() != Basis::kUnit) {
    throw InvalidArgument("QUBO conversion needs a unit-basis polynomial");
  }
  if (p.degree() > 2) {
    throw InvalidArgument("QUBO conversion needs degree <= 2, got " +
                          std::to_string(p.degree()));
  }
  const std::size_t bound = p.var_bound();
  if (n_vars == 0) n_vars = bound;
  if (n_vars < bound) throw InvalidArgument("n_vars smaller than polynomial");
  QuboModel q(n_vars);
  for (const auto& [m, c] : p.terms()) {
    auto v = m.vars();
    switch (v.size()) {
      case 0: q.offset += c; break;
      case 1: q.linear[v[0]] += c; break;
      default: q.add_quadratic(v[0], v[1], c); break;
    }
  }
  return q;
}

MultilinearPoly poly_from_qubo(const QuboModel& q) {
  MultilinearPoly p(Basis::kUnit);
  p.add_term(Monomial{}, q.offset);
  for (std::size_t i = 0; i < q.n_vars; ++i) {
    p.add_term(Monomial::from_sorted({static_cast<Var>(i)}), q.linear[i]);
  }
  for (const auto& [ij, c] : q.quadratic) {
    p.add_term(Monomial::from_sorted({ij.first, ij.second}), c);
  }
  return p;
}

MultilinearPoly to_ising(const QuboModel& q) {
  return to_spin(poly_from_qubo(q));
}

std::string to_qubo_text(const QuboModel& q) {
  std::ostringstream os;
  os << "# qubo n_vars=" << q.n_vars << " offset=" << format_double(q.offset)
     << '\n';
  for (std::size_t i = 0; i < q.n_vars; ++i) {
    if (q.linear[i] != 0.0) {
      os << i << ' ' << i << ' ' << format_double(q.linear[i]) << '\n';
    }
  }
  for (const auto& [ij, c] : q.quadratic) {
    os << ij.first << ' ' << ij.second << ' ' << format_double(c) << '\n';
  }
  return os.str();
}

QuboModel parse_qubo_text(std::string_view text) {
  QuboModel q;
  bool have_header = false;
  std::size_t line_no = 0;
  for (std::string_view line : split_lines(text)) {
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '#') {
      auto tokens = split_ws(trim(line.substr(1)));
      if (tokens.empty() || tokens[0] != "qubo") continue;
      if (have_header) throw ParseError("duplicate qubo header", line_no);
      std::optional<std::size_t> n;
      double off = 0.0;
      for (std::size_t i = 1; i < tokens.size(); ++i) {
        auto eq = tokens[i].find('=');
        if (eq == std::string_view::npos) {
          throw ParseError("bad header field '" + std::string(tokens[i]) + "'",
                           line_no);
        }
        auto key = tokens[i].substr(0, eq);
        auto value = tokens[i].substr(eq + 1);
        if (key == "n_vars") {
          std::size_t parsed = 0;
          if (!parse_uint(value, parsed)) throw ParseError("bad n_vars", line_no);
          n = parsed;
        } else if (key == "offset") {
          if (!parse_double(value, off)) throw ParseError("bad offset", line_no);
        }
      }
      if (!n) throw ParseError("header lacks n_vars", line_no);
      q = QuboModel(*n);
      q.offset = off;
      have_header = true;
      continue;
    }
    if (!have_header) throw ParseError("coupling before qubo header", line_no);
    auto tokens = split_ws(line);
    if (tokens.size() != 3) {
      throw ParseError("expected 'i j value'", line_no);
    }
    Var i = 0, j = 0;
    double c = 0.0;
    if (!parse_uint(tokens[0], i) || !parse_uint(tokens[1], j)) {
      throw ParseError("bad variable index", line_no);
    }
    if (!parse_double(tokens[2], c)) throw ParseError("bad value", line_no);
    if (i >= q.n_vars || j >= q.n_vars) {
      throw ParseError("variable index out of range", line_no);
    }
    q.add_quadratic(i, j, c);
  }
  if (!have_header) throw ParseError("missing qubo header", 0);
  return q;
}

DenseQubo::DenseQubo(const QuboModel& q)
    : n(q.n_vars), h(q.linear), coupling(q.n_vars * q.n_vars, 0.0),
      offset(q.offset) {
  for (const auto& [ij, c] : q.quadratic) {
    coupling[ij.first * n + ij.second] += c;
    coupling[ij.second * n + ij.first] += c;
  }
}

double DenseQubo::energy(std::span<const std::uint8_t> x) const {
  double e = offset;
  for (std::size_t i = 0; i < n; ++i) {
    if (!x[i]) continue;
    e += h[i];
    const double* r = row(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      if (x[j]) e += r[j];
    }
  }
  return e;
}

}  // namespace qubonet
