#include <gtest/gtest.h>

#include <cstdlib>
#include <set>

#include "nestpeb/error.hpp"
#include "nestpeb/examples.hpp"
#include "nestpeb/formula_parser.hpp"
#include "nestpeb/harness.hpp"
#include "support.hpp"

using namespace nestpeb;

namespace {

TEST(Enumerate, SmallCounts) {
  EXPECT_EQ(enumerate_trees(abc_alphabet(), 1).size(), 2u);
  EXPECT_EQ(enumerate_trees(abc_alphabet(), 3).size(), 6u);
  EXPECT_EQ(enumerate_trees(abc_alphabet(), 5).size(), 22u);
}

TEST(Enumerate, ExplicitListingUpToThree) {
  std::set<std::string> got;
  for (const Tree& t : enumerate_trees(abc_alphabet(), 3)) got.insert(t.to_string());
  EXPECT_EQ(got, (std::set<std::string>{"a", "b", "c(a,a)", "c(a,b)", "c(b,a)", "c(b,b)"}));
}

TEST(Enumerate, CountsMatchClosedForm) {
  for (unsigned n = 1; n <= 9; ++n) EXPECT_EQ(count_trees(abc_alphabet(), n), ref::abc_count(n)) << n;
  std::size_t cumulative = 0;
  auto trees = enumerate_trees(abc_alphabet(), 9);
  for (unsigned n = 1; n <= 9; ++n) cumulative += ref::abc_count(n);
  EXPECT_EQ(trees.size(), cumulative);
}

TEST(Enumerate, DistinctValidAndSizeOrdered) {
  const auto sigma = suite_alphabet();
  auto trees = enumerate_trees(sigma, 6);
  std::set<std::string> seen;
  std::size_t last = 0;
  for (const Tree& t : trees) {
    EXPECT_TRUE(seen.insert(t.to_string()).second);
    EXPECT_GE(t.size(), last);
    last = t.size();
    for (const auto& n : t.nodes()) EXPECT_EQ(static_cast<int>(n.children.size()), *sigma.rank_of(n.label));
  }
  std::uint64_t total = 0;
  for (unsigned n = 1; n <= 6; ++n) total += count_trees(sigma, n);
  EXPECT_EQ(trees.size(), total);
  EXPECT_EQ(trees.size(), 188u);
}

TEST(Enumerate, IsReproducible) {
  auto a = enumerate_trees(suite_alphabet(), 5), b = enumerate_trees(suite_alphabet(), 5);
  EXPECT_EQ(a, b);
}

TEST(Oracle, Examples) {
  auto t = [](const char* s) { return parse_term(s, abc_alphabet()); };
  EXPECT_TRUE(oracle(Language::EvenBranching, t("c(a,b)")));
  EXPECT_FALSE(oracle(Language::EvenBranching, t("c(a,a)")));
  EXPECT_TRUE(oracle(Language::EvenBranching, t("b")));
  EXPECT_TRUE(oracle(Language::AllLeavesA, t("c(a,a)")));
  EXPECT_FALSE(oracle(Language::AllLeavesA, t("c(a,b)")));
  const std::vector<std::string> base{"a", "b"};
  EXPECT_TRUE(oracle(Language::AnBn, encode_string("aabb", base)));
  EXPECT_FALSE(oracle(Language::AnBn, encode_string("aab", base)));
  EXPECT_THROW(oracle(Language::AnBn, t("c(a,b)")), ContractError);
}

TEST(Oracle, Names) {
  for (Language l : {Language::AllLeavesA, Language::EvenBranching, Language::AnBn})
    EXPECT_EQ(parse_language(language_name(l)), l);
  EXPECT_FALSE(parse_language("nope"));
}

TEST(Oracle, TotalOnTrees) {
  for (const Tree& t : enumerate_trees(abc_alphabet(), 7)) {
    EXPECT_NO_THROW(oracle(Language::AllLeavesA, t));
    EXPECT_NO_THROW(oracle(Language::EvenBranching, t));
  }
}

TEST(Report, CounterexampleIffDisagreement) {
  auto trees = enumerate_trees(abc_alphabet(), 5);
  auto agree = equiv_formula_oracle(parse_formula("Ex. lab_a(x) | lab_b(x)"), trees, [](const Tree&) { return true; });
  EXPECT_TRUE(agree.agree());
  EXPECT_FALSE(agree.counterexample);
  EXPECT_EQ(agree.instances, 22u);
  auto differ = equiv_formula_oracle(parse_formula("Ex. lab_b(x)"), trees,
                                     [](const Tree& t) { return oracle(Language::AllLeavesA, t); });
  EXPECT_FALSE(differ.agree());
  ASSERT_TRUE(differ.counterexample);
  EXPECT_EQ(differ.counterexample->structure, "a");
  EXPECT_NE(differ.summary().find("instances 22"), std::string::npos);
}

// The worked automaton with pebbles x and y declared, so free variables have somewhere to go.
Automaton with_xy() {
  Automaton a = all_leaves_a_automaton();
  a.add_pebble("x");
  a.add_pebble("y");
  return a;
}

TEST(Report, ValuationsCoverAllPlacements) {
  auto trees = enumerate_trees(abc_alphabet(), 3);
  Automaton a = with_xy();
  FormulaPtr f = parse_formula("x=x & y=y");
  EquivOptions o;
  auto r = equiv_formula_automaton(f, a, trees, o);
  // one instance per tree and per pair of nodes
  EXPECT_EQ(r.instances, 2u * 1 + 4u * 9);
}

TEST(Report, BudgetTruncates) {
  auto trees = enumerate_trees(abc_alphabet(), 5);
  EquivOptions o;
  o.budget = 10;
  auto r = equiv_formula_automaton(parse_formula("lab_a(x)"), with_xy(), trees, o);
  EXPECT_TRUE(r.truncated);
  EXPECT_FALSE(r.agree());
}

TEST(Report, BudgetFromEnvironment) {
  ::setenv("NESTPEB_VALUATION_BUDGET", "1234", 1);
  EXPECT_EQ(valuation_budget(), 1234u);
  ::setenv("NESTPEB_VALUATION_BUDGET", "junk", 1);
  EXPECT_EQ(valuation_budget(), 1000000u);
  ::unsetenv("NESTPEB_VALUATION_BUDGET");
  EXPECT_EQ(valuation_budget(), 1000000u);
}

TEST(Random, AutomataAreDeterministicAndMatricesFunctional) {
  std::mt19937 rng(1);
  for (int i = 0; i < 30; ++i) {
    Automaton a = random_det_automaton(rng, suite_alphabet(), 6, 2);
    EXPECT_TRUE(check_deterministic(a));
    EXPECT_NO_THROW(a.validate());
  }
  auto trees = enumerate_trees(abc_alphabet(), 5);
  for (int i = 0; i < 10; ++i) {
    StepMatrix m = random_det_matrix(rng, 3, 1, 2);
    for (const Tree& t : trees) {
      Structure st = Structure::from_tree(t);
      for (NodeId u = 0; u < t.size(); ++u) {
        int successors = 0;  // over all target states and nodes
        for (std::size_t p = 0; p < 3; ++p) {
          successors = 0;
          for (std::size_t q = 0; q < 3; ++q)
            for (NodeId v = 0; v < t.size(); ++v)
              successors += eval(m.at(p, q), st, {{m.xs[0], u}, {m.ys[0], v}});
          ASSERT_LE(successors, 1);
        }
      }
    }
  }
}

}  // namespace
