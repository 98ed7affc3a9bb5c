#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "qubonet/error.hpp"
#include "qubonet/quadratize.hpp"

using namespace qubonet;

namespace {

double gadget_at(double lambda, int x, int y, int z) {
  auto q = constraint_gadget(2, 0, 1, lambda);
  const std::vector<int> v = {x, y, z};
  return evaluate(q, v);
}

MultilinearPoly triple_spin_unit() {
  MultilinearPoly s(Basis::kSpin);
  s.add_term(Monomial{0, 1, 2}, 1.0);
  return to_unit(s);
}

}  // namespace

TEST(Gadget, Terms) {
  auto q = constraint_gadget(7, 2, 5, 1.5);
  ASSERT_EQ(q.size(), 4u);
  EXPECT_EQ(q.coefficient(Monomial{2, 5}), 1.5);
  EXPECT_EQ(q.coefficient(Monomial{2, 7}), -3.0);
  EXPECT_EQ(q.coefficient(Monomial{5, 7}), -3.0);
  EXPECT_EQ(q.coefficient(Monomial{7}), 4.5);
}

TEST(Gadget, Examples) {
  EXPECT_EQ(gadget_at(1, 0, 0, 1), 3.0);
  EXPECT_EQ(gadget_at(1, 1, 0, 1), 1.0);
  EXPECT_EQ(gadget_at(1, 1, 1, 1), 0.0);
}

TEST(Gadget, TruthTableRandomLambda) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> d(0.01, 100.0);
  for (int k = 0; k < 200; ++k) {
    const double lam = d(rng);
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y)
        for (int z = 0; z < 2; ++z) {
          const double q = gadget_at(lam, x, y, z);
          if (z == x * y) {
            ASSERT_EQ(q, 0.0);
          } else {
            const double want = (x + y == 0) ? 3.0 * lam : lam;
            ASSERT_NEAR(q, want, 1e-12 * lam);
          }
        }
  }
}

TEST(Gadget, Errors) {
  EXPECT_THROW(constraint_gadget(2, 0, 1, 0.0), InvalidArgument);
  EXPECT_THROW(constraint_gadget(2, 0, 1, -1.0), InvalidArgument);
  EXPECT_THROW(constraint_gadget(1, 0, 1, 1.0), InvalidArgument);
}

TEST(SelectPair, MostFrequentThenLex) {
  MultilinearPoly p(Basis::kUnit);
  p.add_term(Monomial{0, 2, 3}, 1);
  p.add_term(Monomial{1, 2, 3}, 1);
  p.add_term(Monomial{0, 1}, 1);
  EXPECT_EQ(select_reduction_pair(p), std::make_pair(Var{2}, Var{3}));
  MultilinearPoly tie(Basis::kUnit);
  tie.add_term(Monomial{1, 2, 3}, 1);
  EXPECT_EQ(select_reduction_pair(tie), std::make_pair(Var{1}, Var{2}));
  MultilinearPoly quad(Basis::kUnit);
  quad.add_term(Monomial{0, 1}, 1);
  EXPECT_FALSE(select_reduction_pair(quad).has_value());
}

TEST(Quadratize, TripleExampleStructure) {
  const auto p = triple_spin_unit();
  const auto m = quadratize(p, LambdaStrategy::fixed_value(3.0));
  ASSERT_EQ(m.map.size(), 1u);
  EXPECT_EQ(m.map.entries[0], (ReductionEntry{3, 0, 1, 3.0}));
  MultilinearPoly want = constraint_gadget(3, 0, 1, 3.0);
  want.add_term(Monomial{2, 3}, 8);
  want.add_term(Monomial{3}, -4);
  want.add_term(Monomial{0, 2}, -4);
  want.add_term(Monomial{1, 2}, -4);
  want.add_term(Monomial{0}, 2);
  want.add_term(Monomial{1}, 2);
  want.add_term(Monomial{2}, 2);
  want.add_term(Monomial{}, -1);
  EXPECT_TRUE(m.quadratic.approx_equal(want));
  EXPECT_LE(m.quadratic.degree(), 2u);
}

TEST(Quadratize, TripleExampleVerifies) {
  const auto p = triple_spin_unit();
  const auto r = verify_reduction(p, quadratize(p, LambdaStrategy::fixed_value(3.0)));
  EXPECT_TRUE(r.passed) << r.failure;
  EXPECT_EQ(r.original_min, -1.0);
  EXPECT_EQ(r.reduced_min, -1.0);
  EXPECT_EQ(r.original_minimizers, 4u);
  EXPECT_EQ(r.reduced_projections, 4u);
  // Every minimizer has an odd number of down spins.
  auto brute = oracle::brute_min([&](const Assignment& t) { return oracle::eval_unit(p, t); }, 3);
  for (const auto& t : brute.argmin) {
    EXPECT_EQ((t[0] ? 1 : -1) * (t[1] ? 1 : -1) * (t[2] ? 1 : -1), -1);
  }
}

TEST(Quadratize, WeakLambdaFails) {
  const auto p = triple_spin_unit();
  const auto r = verify_reduction(p, quadratize(p, LambdaStrategy::fixed_value(1.0)));
  EXPECT_FALSE(r.passed);
  EXPECT_FALSE(r.failure.empty());
  EXPECT_TRUE(r.counterexample.has_value());
}

TEST(Quadratize, QuadraticIsNoOp) {
  MultilinearPoly p(Basis::kUnit);
  p.add_term(Monomial{0, 1}, 2);
  p.add_term(Monomial{2}, -1);
  const auto m = quadratize(p);
  EXPECT_TRUE(m.map.empty());
  EXPECT_EQ(m.quadratic.terms(), p.terms());
  EXPECT_TRUE(verify_reduction(MultilinearPoly::constant(Basis::kUnit, 4),
                               quadratize(MultilinearPoly::constant(Basis::kUnit, 4)))
                  .passed);
}

TEST(Quadratize, DefaultLambdaIsOnePlusAbsSum) {
  MultilinearPoly p(Basis::kUnit);
  p.add_term(Monomial{0, 1, 2}, -3);
  p.add_term(Monomial{0}, 2);
  p.add_term(Monomial{}, 10);
  const auto m = quadratize(p);
  ASSERT_EQ(m.map.size(), 1u);
  EXPECT_EQ(m.map.entries[0].lambda, 6.0);
}

TEST(Quadratize, Errors) {
  MultilinearPoly s(Basis::kSpin);
  s.add_term(Monomial{0, 1, 2}, 1);
  EXPECT_THROW(quadratize(s), InvalidArgument);
  EXPECT_THROW(quadratize(triple_spin_unit(), LambdaStrategy::fixed_value(0.0)),
               InvalidArgument);
  EXPECT_THROW(quadratize(triple_spin_unit(), {}, Var{2}), InvalidArgument);
}

TEST(Lift, Examples) {
  ReductionMap map;
  map.entries.push_back({12, 1, 2, 1.0});
  Assignment t(12, 0);
  t[1] = 1;
  t[2] = 1;
  EXPECT_EQ(lift_assignment(map, t)[12], 1);
  t[1] = 0;
  EXPECT_EQ(lift_assignment(map, t)[12], 0);

  map.entries.push_back({13, 12, 3, 1.0});
  Assignment all(12, 1);
  const auto lifted = lift_assignment(map, all);
  EXPECT_EQ(lifted[12], 1);
  EXPECT_EQ(lifted[13], 1);
  for (const auto& e : map.entries) {
    auto g = constraint_gadget(e.aux, e.parent_a, e.parent_b, 2.0);
    EXPECT_EQ(oracle::eval_unit(g, lifted), 0.0);
  }
  EXPECT_THROW(lift_assignment(map, Assignment(5, 0)), InvalidArgument);
}

TEST(Verify, TooManyVariablesThrows) {
  MultilinearPoly p(Basis::kUnit);
  p.add_term(Monomial{0, 29}, 1);
  EXPECT_THROW(verify_reduction(p, quadratize(p)), SolverError);
}

TEST(Text, QuadratizedRoundTrip) {
  const auto p = triple_spin_unit();
  const auto m = quadratize(p, LambdaStrategy::fixed_value(3.0));
  const auto text = to_text(m);
  EXPECT_NE(text.find("#reduction"), std::string::npos);
  const auto back = parse_quadratized_text(text);
  EXPECT_EQ(back.map, m.map);
  EXPECT_EQ(back.original_var_count, m.original_var_count);
  EXPECT_EQ(back.quadratic.terms(), m.quadratic.terms());
  EXPECT_EQ(to_text(back), text);
}

TEST(Text, BadReductionLine) {
  EXPECT_THROW(parse_quadratized_text("#basis: unit\n#original_vars: 3\n#reduction\n3 0\n"),
               ParseError);
}

// Property: random unit polynomials keep their minima, and lifted points
// evaluate exactly as the original. The reduced minimum is checked against an
// independent brute force over all original and auxiliary bits.
TEST(Property, MinimumPreservation) {
  std::mt19937_64 rng(2024);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 3 + rng() % 8;
    auto p = oracle::random_poly(rng, Basis::kUnit, n, 4, 2 + rng() % 8);
    const auto m = quadratize(p, {}, static_cast<Var>(n));
    ASSERT_LE(m.quadratic.degree(), 2u);
    for (std::size_t k = 1; k < m.degree_trace.size(); ++k) {
      ASSERT_LE(m.degree_trace[k], m.degree_trace[k - 1]);
    }
    const auto r = verify_reduction(p, m, 26);
    ASSERT_TRUE(r.passed) << r.failure << "\n" << to_text(p);

    for (std::uint64_t mask = 0; mask < (1u << n); ++mask) {
      const auto s = oracle::bits(mask, n);
      ASSERT_EQ(oracle::eval_unit(m.quadratic, lift_assignment(m.map, s)),
                oracle::eval_unit(p, s));
    }
    if (m.total_var_count() <= 16) {
      auto orig = oracle::brute_min([&](const Assignment& t) { return oracle::eval_unit(p, t); }, n);
      auto red = oracle::brute_min(
          [&](const Assignment& t) { return oracle::eval_unit(m.quadratic, t); },
          m.total_var_count());
      ASSERT_NEAR(orig.min, red.min, 1e-9);
      std::set<Assignment> proj;
      for (const auto& a : red.argmin) proj.insert(Assignment(a.begin(), a.begin() + n));
      ASSERT_EQ(proj, orig.argmin);
      ++checked;
    }
  }
  EXPECT_GT(checked, 100);
}

TEST(Property, InconsistentAuxRaisesEnergy) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 4 + rng() % 4;
    auto p = oracle::random_poly(rng, Basis::kUnit, n, 4, 3 + rng() % 5);
    const auto m = quadratize(p, {}, static_cast<Var>(n));
    if (m.map.empty()) continue;
    for (std::uint64_t mask = 0; mask < (1u << n); ++mask) {
      auto lifted = lift_assignment(m.map, oracle::bits(mask, n));
      const double base = oracle::eval_unit(m.quadratic, lifted);
      // Flipping the last aux only touches its own gadget and its uses.
      lifted.back() ^= 1;
      ASSERT_GT(oracle::eval_unit(m.quadratic, lifted), base);
    }
  }
}
