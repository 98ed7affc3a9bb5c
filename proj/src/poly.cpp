#include "qubonet/poly.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iterator>
#include <optional>
#include <sstream>

#include "qubonet/error.hpp"
#include "text_util.hpp"

namespace qubonet {

std::string_view basis_name(Basis b) {
  return b == Basis::kSpin ? "spin" : "unit";
}

Monomial::Monomial(std::vector<Var> vars) : vars_(std::move(vars)) {
  std::sort(vars_.begin(), vars_.end());
  if (std::adjacent_find(vars_.begin(), vars_.end()) != vars_.end()) {
    throw InvalidArgument("monomial repeats a variable");
  }
}

Monomial Monomial::from_sorted(std::vector<Var> vars) {
  Monomial m;
  m.vars_ = std::move(vars);
  return m;
}

bool Monomial::contains(Var v) const {
  return std::binary_search(vars_.begin(), vars_.end(), v);
}

std::strong_ordering operator<=>(const Monomial& a, const Monomial& b) {
  if (auto c = a.vars_.size() <=> b.vars_.size(); c != 0) return c;
  return std::lexicographical_compare_three_way(
      a.vars_.begin(), a.vars_.end(), b.vars_.begin(), b.vars_.end());
}

MultilinearPoly MultilinearPoly::constant(Basis basis, double c) {
  MultilinearPoly p(basis);
  p.add_term(Monomial{}, c);
  return p;
}

MultilinearPoly MultilinearPoly::variable(Basis basis, Var v, double coeff) {
  MultilinearPoly p(basis);
  p.add_term(Monomial::from_sorted({v}), coeff);
  return p;
}

MultilinearPoly MultilinearPoly::term(Basis basis, Monomial m, double coeff) {
  MultilinearPoly p(basis);
  p.add_term(m, coeff);
  return p;
}

std::size_t MultilinearPoly::degree() const {
  // Terms are ordered by degree first.
  return terms_.empty() ? 0 : terms_.rbegin()->first.degree();
}

double MultilinearPoly::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? 0.0 : it->second;
}

std::vector<Var> MultilinearPoly::variables() const {
  std::vector<Var> out;
  for (const auto& [m, c] : terms_) {
    out.insert(out.end(), m.vars().begin(), m.vars().end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Var MultilinearPoly::var_bound() const {
  Var bound = 0;
  for (const auto& [m, c] : terms_) {
    if (!m.empty()) bound = std::max(bound, m.vars().back() + 1);
  }
  return bound;
}

double MultilinearPoly::abs_coefficient_sum() const {
  double s = 0.0;
  for (const auto& [m, c] : terms_) {
    if (!m.empty()) s += std::abs(c);
  }
  return s;
}

void MultilinearPoly::add_term(const Monomial& m, double c) {
  if (c == 0.0) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) it->second += c;
  if (std::abs(it->second) < kPruneThreshold) terms_.erase(it);
}

MultilinearPoly& MultilinearPoly::operator+=(const MultilinearPoly& other) {
  if (basis_ != other.basis_) throw InvalidArgument("basis mismatch in add");
  for (const auto& [m, c] : other.terms_) add_term(m, c);
  return *this;
}

MultilinearPoly& MultilinearPoly::operator-=(const MultilinearPoly& other) {
  if (basis_ != other.basis_) throw InvalidArgument("basis mismatch in sub");
  for (const auto& [m, c] : other.terms_) add_term(m, -c);
  return *this;
}

MultilinearPoly& MultilinearPoly::operator*=(double s) {
  if (s == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto it = terms_.begin(); it != terms_.end();) {
    it->second *= s;
    if (std::abs(it->second) < kPruneThreshold) {
      it = terms_.erase(it);
    } else {
      ++it;
    }
  }
  return *this;
}

bool MultilinearPoly::approx_equal(const MultilinearPoly& other,
                                   double tol) const {
  if (basis_ != other.basis_) return false;
  for (const auto& [m, c] : terms_) {
    if (std::abs(c - other.coefficient(m)) > tol) return false;
  }
  for (const auto& [m, c] : other.terms_) {
    if (std::abs(c - coefficient(m)) > tol) return false;
  }
  return true;
}

MultilinearPoly add(const MultilinearPoly& a, const MultilinearPoly& b) {
  MultilinearPoly r = a;
  r += b;
  return r;
}

namespace {

std::vector<Var> fold(std::span<const Var> a, std::span<const Var> b,
                      Basis basis) {
  std::vector<Var> out;
  out.reserve(a.size() + b.size());
  if (basis == Basis::kUnit) {
    std::set_union(a.begin(), a.end(), b.begin(), b.end(),
                   std::back_inserter(out));
  } else {
    std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(),
                                  std::back_inserter(out));
  }
  return out;
}

}  // namespace

MultilinearPoly mul(const MultilinearPoly& a, const MultilinearPoly& b) {
  if (a.basis() != b.basis()) throw InvalidArgument("basis mismatch in mul");
  MultilinearPoly r(a.basis());
  for (const auto& [ma, ca] : a.terms()) {
    for (const auto& [mb, cb] : b.terms()) {
      r.add_term(Monomial::from_sorted(fold(ma.vars(), mb.vars(), a.basis())),
                 ca * cb);
    }
  }
  return r;
}

MultilinearPoly operator+(MultilinearPoly a, const MultilinearPoly& b) {
  a += b;
  return a;
}

MultilinearPoly operator-(MultilinearPoly a, const MultilinearPoly& b) {
  a -= b;
  return a;
}

MultilinearPoly operator*(const MultilinearPoly& a, const MultilinearPoly& b) {
  return mul(a, b);
}

MultilinearPoly operator*(double s, MultilinearPoly p) {
  p *= s;
  return p;
}

namespace {

// Expands c * prod_{v in m} (scale * x_v + shift) over all subsets of m.
void expand_affine(const Monomial& m, double c, double scale, double shift,
                   MultilinearPoly& out) {
  const auto vars = m.vars();
  const std::size_t k = vars.size();
  if (k >= 63) throw InvalidArgument("monomial degree too large to convert");
  std::vector<Var> subset;
  subset.reserve(k);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
    subset.clear();
    double coeff = c;
    for (std::size_t i = 0; i < k; ++i) {
      if (mask >> i & 1) {
        subset.push_back(vars[i]);
        coeff *= scale;
      } else {
        coeff *= shift;
      }
    }
    out.add_term(Monomial::from_sorted(subset), coeff);
  }
}

}  // namespace

MultilinearPoly to_unit(const MultilinearPoly& p) {
  if (p.basis() != Basis::kSpin) {
    throw InvalidArgument("to_unit expects a spin-basis polynomial");
  }
  MultilinearPoly r(Basis::kUnit);
  for (const auto& [m, c] : p.terms()) expand_affine(m, c, 2.0, -1.0, r);
  return r;
}

MultilinearPoly to_spin(const MultilinearPoly& p) {
  if (p.basis() != Basis::kUnit) {
    throw InvalidArgument("to_spin expects a unit-basis polynomial");
  }
  MultilinearPoly r(Basis::kSpin);
  for (const auto& [m, c] : p.terms()) expand_affine(m, c, 0.5, 0.5, r);
  return r;
}

namespace {

template <typename T>
double evaluate_impl(const MultilinearPoly& p, std::span<const T> values) {
  const bool spin = p.basis() == Basis::kSpin;
  double total = 0.0;
  for (const auto& [m, c] : p.terms()) {
    double prod = c;
    for (Var v : m.vars()) {
      if (v >= values.size()) {
        throw InvalidArgument("assignment is missing variable " +
                              std::to_string(v));
      }
      const int x = static_cast<int>(values[v]);
      const bool ok = spin ? (x == 1 || x == -1) : (x == 0 || x == 1);
      if (!ok) {
        throw InvalidArgument("value " + std::to_string(x) + " of variable " +
                              std::to_string(v) + " is outside the " +
                              std::string(basis_name(p.basis())) +
                              " alphabet");
      }
      prod *= x;
    }
    total += prod;
  }
  return total;
}

}  // namespace

double evaluate(const MultilinearPoly& p, std::span<const int> values) {
  return evaluate_impl(p, values);
}

double evaluate(const MultilinearPoly& p, std::span<const std::uint8_t> bits) {
  return evaluate_impl(p, bits);
}

MultilinearPoly substitute_pair(const MultilinearPoly& p, Var x, Var y,
                                Var z) {
  if (p.basis() != Basis::kUnit) {
    throw InvalidArgument("substitute_pair requires a unit-basis polynomial");
  }
  if (x == y || z == x || z == y) {
    throw InvalidArgument("substitute_pair needs three distinct variables");
  }
  for (const auto& [m, c] : p.terms()) {
    if (m.contains(z)) {
      throw InvalidArgument("variable " + std::to_string(z) +
                            " is already used by the polynomial");
    }
  }
  MultilinearPoly r(Basis::kUnit);
  for (const auto& [m, c] : p.terms()) {
    if (m.contains(x) && m.contains(y)) {
      std::vector<Var> vars;
      vars.reserve(m.degree() - 1);
      for (Var v : m.vars()) {
        if (v != x && v != y) vars.push_back(v);
      }
      vars.insert(std::upper_bound(vars.begin(), vars.end(), z), z);
      r.add_term(Monomial::from_sorted(std::move(vars)), c);
    } else {
      r.add_term(m, c);
    }
  }
  return r;
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

bool parse_double(std::string_view token, double& out) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  auto res = std::from_chars(token.data(), token.data() + token.size(), out);
  return res.ec == std::errc() && res.ptr == token.data() + token.size();
}

std::string to_text(const MultilinearPoly& p) {
  std::ostringstream os;
  os << "#basis: " << basis_name(p.basis()) << '\n';
  for (const auto& [m, c] : p.terms()) {
    os << format_double(c);
    for (Var v : m.vars()) os << ' ' << v;
    os << '\n';
  }
  return os.str();
}

MultilinearPoly parse_poly_text(std::string_view text) {
  return detail::parse_poly_lines(text, 0);
}

namespace detail {

MultilinearPoly parse_poly_lines(std::string_view text,
                                 std::size_t first_line) {
  std::optional<Basis> basis;
  MultilinearPoly poly;
  std::size_t line_no = first_line;
  for (std::string_view line : split_lines(text)) {
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '#') {
      std::string_view body = trim(line.substr(1));
      if (body.starts_with("basis:")) {
        std::string_view name = trim(body.substr(6));
        if (basis) throw ParseError("duplicate #basis header", line_no);
        if (name == "spin") {
          basis = Basis::kSpin;
        } else if (name == "unit") {
          basis = Basis::kUnit;
        } else {
          throw ParseError("unknown basis '" + std::string(name) + "'",
                           line_no);
        }
        poly = MultilinearPoly(*basis);
      }
      continue;
    }
    if (!basis) throw ParseError("term before #basis header", line_no);
    auto tokens = split_ws(line);
    double c = 0.0;
    if (!parse_double(tokens[0], c)) {
      throw ParseError("bad coefficient '" + std::string(tokens[0]) + "'",
                       line_no);
    }
    std::vector<Var> vars;
    for (std::size_t i = 1; i < tokens.size(); ++i) {
      Var v = 0;
      if (!parse_uint(tokens[i], v)) {
        throw ParseError("bad variable index '" + std::string(tokens[i]) + "'",
                         line_no);
      }
      vars.push_back(v);
    }
    try {
      poly.add_term(Monomial(std::move(vars)), c);
    } catch (const InvalidArgument& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  if (!basis) throw ParseError("missing #basis header", 0);
  return poly;
}

}  // namespace detail

}  // namespace qubonet
