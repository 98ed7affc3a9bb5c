#pragma once

// Exact multilinear polynomial arithmetic over binary-valued variables.
//
// Two bases are supported: SPIN (s in {-1,+1}, s^2 = 1) and UNIT
// (t in {0,1}, t^2 = t). They are related by t = (s + 1) / 2. Products fold
// repeated variables according to the basis, so every stored monomial is a
// set of distinct variable indices.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qubonet {

using Var = std::uint32_t;

enum class Basis { kSpin, kUnit };

std::string_view basis_name(Basis b);

// Coefficients with |c| below this are dropped.
inline constexpr double kPruneThreshold = 1e-15;
// Absolute tolerance used by approx_equal.
inline constexpr double kCoefficientTolerance = 1e-12;

// A set of distinct variables, kept sorted. The empty monomial is the
// constant term. Ordered by (degree, lexicographic indices).
class Monomial {
 public:
  Monomial() = default;
  // Sorts the indices; throws InvalidArgument on repeats.
  explicit Monomial(std::vector<Var> vars);
  Monomial(std::initializer_list<Var> vars)
      : Monomial(std::vector<Var>(vars)) {}

  // Caller guarantees `vars` is strictly increasing.
  static Monomial from_sorted(std::vector<Var> vars);

  std::span<const Var> vars() const { return vars_; }
  std::size_t degree() const { return vars_.size(); }
  bool empty() const { return vars_.empty(); }
  bool contains(Var v) const;

  friend bool operator==(const Monomial&, const Monomial&) = default;
  friend std::strong_ordering operator<=>(const Monomial& a,
                                          const Monomial& b);

 private:
  std::vector<Var> vars_;
};

class MultilinearPoly {
 public:
  using Terms = std::map<Monomial, double>;

  explicit MultilinearPoly(Basis basis = Basis::kUnit) : basis_(basis) {}

  static MultilinearPoly constant(Basis basis, double c);
  static MultilinearPoly variable(Basis basis, Var v, double coeff = 1.0);
  static MultilinearPoly term(Basis basis, Monomial m, double coeff);

  Basis basis() const { return basis_; }
  const Terms& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  std::size_t degree() const;

  double coefficient(const Monomial& m) const;
  double constant_term() const { return coefficient(Monomial{}); }
  // Sorted list of variables with at least one nonzero term.
  std::vector<Var> variables() const;
  // One past the largest variable index, 0 for a constant.
  Var var_bound() const;
  // Sum of |c| over all non-constant terms.
  double abs_coefficient_sum() const;

  // Accumulates `c` into the coefficient of `m`, pruning exact cancellation.
  void add_term(const Monomial& m, double c);

  MultilinearPoly& operator+=(const MultilinearPoly& other);
  MultilinearPoly& operator-=(const MultilinearPoly& other);
  MultilinearPoly& operator*=(double s);

  bool approx_equal(const MultilinearPoly& other,
                    double tol = kCoefficientTolerance) const;

 private:
  Basis basis_;
  Terms terms_;
};

MultilinearPoly add(const MultilinearPoly& a, const MultilinearPoly& b);
MultilinearPoly mul(const MultilinearPoly& a, const MultilinearPoly& b);

MultilinearPoly operator+(MultilinearPoly a, const MultilinearPoly& b);
MultilinearPoly operator-(MultilinearPoly a, const MultilinearPoly& b);
MultilinearPoly operator*(const MultilinearPoly& a, const MultilinearPoly& b);
MultilinearPoly operator*(double s, MultilinearPoly p);

// s = 2t - 1. Requires a SPIN polynomial.
MultilinearPoly to_unit(const MultilinearPoly& p);
// t = (s + 1) / 2. Requires a UNIT polynomial.
MultilinearPoly to_spin(const MultilinearPoly& p);

// `values[v]` is the value of variable v. Every variable of p must be in
// range and take a value from the basis alphabet.
double evaluate(const MultilinearPoly& p, std::span<const int> values);
double evaluate(const MultilinearPoly& p, std::span<const std::uint8_t> bits);

// Replaces the pair {x, y} by z in every monomial containing both. UNIT basis
// only; z must not already occur in p.
MultilinearPoly substitute_pair(const MultilinearPoly& p, Var x, Var y, Var z);

// Text format: a `#basis: spin|unit` header followed by one `coeff i1 ... ik`
// line per term in canonical order. Coefficients use shortest round-trip
// decimal form.
std::string to_text(const MultilinearPoly& p);
MultilinearPoly parse_poly_text(std::string_view text);

// Shortest decimal representation that parses back to the same double.
std::string format_double(double v);
// Strict full-token parse; returns false on any trailing junk.
bool parse_double(std::string_view token, double& out);

}  // namespace qubonet
