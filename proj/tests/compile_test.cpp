#include <gtest/gtest.h>

#include <map>

#include "nestpeb/compile.hpp"
#include "nestpeb/error.hpp"
#include "nestpeb/examples.hpp"
#include "nestpeb/formula_parser.hpp"
#include "nestpeb/harness.hpp"

using namespace nestpeb;

namespace {

EquivalenceReport check(const std::string& text, int k, const std::vector<Tree>& trees, bool nondet = false) {
  FormulaPtr f = parse_formula(text);
  const RankedAlphabet sigma = suite_alphabet();
  EquivOptions o;
  if (nondet) o.mode = RunMode::Nondeterministic;
  Automaton a = nondet ? compile_nondet(f, k, sigma) : compile_det(f, k, sigma);
  return equiv_formula_automaton(f, a, trees, o);
}

const std::vector<Tree>& suite_trees(std::size_t n) {
  static std::map<std::size_t, std::vector<Tree>> cache;
  auto& v = cache[n];
  if (v.empty()) v = enumerate_trees(suite_alphabet(), n);
  return v;
}

TEST(CompileDet, Tautology) {
  Automaton a = compile_det(parse_formula("Ax. x=x"), 1, abc_alphabet());
  for (const Tree& t : enumerate_trees(abc_alphabet(), 7)) ASSERT_TRUE(run(a, Structure::from_tree(t)).accepted());
}

TEST(CompileDet, AtomUnderPlacedPebble) {
  Automaton a = compile_det(parse_formula("lab_a(x)"), 1, abc_alphabet());
  Tree t = parse_term("c(a,b)", abc_alphabet());
  RunOptions o;
  o.initial_stack = {{"x", 1}};
  EXPECT_EQ(run(a, Structure::from_tree(t), o).verdict, Verdict::Accept);
  o.initial_stack = {{"x", 2}};
  EXPECT_EQ(run(a, Structure::from_tree(t), o).verdict, Verdict::RejectHalt);
}

TEST(CompileDet, WalkingSentenceOnSmallTrees) {
  auto trees = enumerate_trees(abc_alphabet(), 5);
  ASSERT_EQ(trees.size(), 22u);
  Automaton a = compile_det(walking_sentence(), 1, abc_alphabet());
  EXPECT_TRUE(equiv_formula_automaton(walking_sentence(), a, trees).agree());
}

TEST(CompileDet, Errors) {
  EXPECT_THROW(compile_det(parse_formula("[tc (x)(y): edg1(x,y)](u,v)"), 1, abc_alphabet()), ContractError);
  EXPECT_THROW(compile_det(parse_formula("[dtc (a b)(c d): edg1(a,c) & edg1(b,d)](u w,v z)"), 1, abc_alphabet()),
               ContractError);
  EXPECT_THROW(compile_det(parse_formula("edge_h(x,y)"), 1, abc_alphabet()), ContractError);
}

TEST(CompileDet, AtomsAllPlacements) {
  for (const char* text : {"lab_a(x)", "edg1(x,y)", "edg2(x,y)", "x=y", "leq(x,y)", "!leq(y,x)"}) {
    auto r = check(text, 1, suite_trees(5));
    EXPECT_TRUE(r.agree()) << text << ": " << r.summary();
  }
}

TEST(CompileDet, ComplementCoherence) {
  for (const auto& nf : deterministic_suite()) {
    if (nf.heads != 1) continue;
    FormulaPtr f = parse_formula(nf.text);
    Automaton pos = compile_det(f, 1, suite_alphabet());
    Automaton neg = compile_det(fo::neg(f), 1, suite_alphabet());
    auto r = equiv_formula_automaton(fo::neg(f), complement(pos), suite_trees(4));
    EXPECT_TRUE(r.agree()) << nf.name << ": " << r.summary();
    auto r2 = equiv_formula_automaton(fo::neg(f), neg, suite_trees(4));
    EXPECT_TRUE(r2.agree()) << nf.name << ": " << r2.summary();
  }
}

TEST(CompileDet, HaltsAtRootWithLayoutRestored) {
  FormulaPtr f = parse_formula("Ey. [dtc (s)(t): edg1(t,s) | edg2(t,s)](x,y) & lab_c(y)");
  Automaton a = compile_det(f, 1, suite_alphabet());
  for (const Tree& t : suite_trees(5)) {
    Structure st = Structure::from_tree(t);
    Machine m(a, st);
    for (NodeId x = 0; x < t.size(); ++x) {
      auto stack = m.resolve_stack({{"x", x}});
      Configuration last;
      Verdict v = walk(m, m.initial({0}, stack), [&](const Configuration& c) {
        last = c;
        return true;
      });
      ASSERT_EQ(v, Verdict::RejectHalt);
      EXPECT_EQ(last.heads, std::vector<NodeId>{0});
      EXPECT_EQ(last.stack, stack);
    }
  }
}

TEST(PebbleBudget, Examples) {
  EXPECT_EQ(pebble_budget(parse_formula("lab_a(x)")), 1);
  EXPECT_EQ(pebble_budget(parse_formula("Ex. Ay. x=y")), 2);
  EXPECT_EQ(pebble_budget(parse_formula("Eu. Ev. [dtc (x)(y): edg1(x,y)](u,v)")), 5);
  EXPECT_EQ(pebble_budget(parse_formula("Eu. Ev. [dtc (a b)(c d): edg1(a,c) & edg1(b,d)](u u,v v)")), 8);
}

TEST(PebbleBudget, MatchesDeclaredPebbles) {
  for (const auto& nf : deterministic_suite()) {
    FormulaPtr f = parse_formula(nf.text);
    EXPECT_EQ(compile_det(f, nf.heads, suite_alphabet()).pebbles().size(), static_cast<std::size_t>(pebble_budget(f)))
        << nf.name;
  }
  for (const auto& nf : positive_tc_suite()) {
    FormulaPtr f = parse_formula(nf.text);
    EXPECT_EQ(compile_nondet(f, nf.heads, suite_alphabet()).pebbles().size(),
              static_cast<std::size_t>(pebble_budget_nondet(f)))
        << nf.name;
  }
}

TEST(CompileNondet, Existential) {
  auto r = check("Ex. lab_a(x)", 1, suite_trees(5), true);
  EXPECT_TRUE(r.agree()) << r.summary();
}

TEST(CompileNondet, LastLeafOnMonadicTrees) {
  const std::vector<std::string> base{"a", "b"};
  std::vector<Tree> words;
  std::vector<std::string> frontier{""};
  for (std::size_t i = 0; i < frontier.size(); ++i) {
    words.push_back(encode_string(frontier[i], base));
    if (frontier[i].size() < 6) frontier.push_back(frontier[i] + "a"), frontier.push_back(frontier[i] + "b");
  }
  FormulaPtr f = parse_formula("Er. El. (!(Ez. edg1(z,r))) & lab_⊥(l) & [tc (x)(y): edg1(x,y)](r,l)");
  Automaton a = compile_nondet(f, 1, monadic_alphabet(base));
  EquivOptions o;
  o.mode = RunMode::Nondeterministic;
  auto r = equiv_formula_automaton(f, a, words, o);
  EXPECT_TRUE(r.agree()) << r.summary();
  EXPECT_EQ(r.agreements, words.size());
  for (const Tree& t : words) EXPECT_TRUE(eval(f, Structure::from_tree(t)));
}

TEST(CompileNondet, ReflexiveCase) {
  FormulaPtr f = parse_formula("[tc (x)(y): edg1(x,y)](u,u)");
  Automaton a = compile_nondet(f, 1, suite_alphabet());
  RunOptions o;
  o.mode = RunMode::Nondeterministic;
  for (const Tree& t : suite_trees(4))
    for (NodeId u = 0; u < t.size(); ++u) {
      o.initial_stack = {{"u", u}};
      ASSERT_TRUE(run(a, Structure::from_tree(t), o).accepted());
    }
}

TEST(CompileNondet, RejectsNonPositive) {
  EXPECT_THROW(compile_nondet(parse_formula("![tc (x)(y): edg1(x,y)](u,v)"), 1, abc_alphabet()), ContractError);
}

TEST(CompileNondet, NegatedAtomsAndQuantifiers) {
  for (const char* text :
       {"Ax. !lab_a(x) | Ey. edg1(x,y)", "!(Ex. lab_b(x) & Ay. !edg2(x,y))", "Ey. [tc (x)(y): edg2(x,y)](u,y) & !lab_c(y)"}) {
    auto r = check(text, 1, suite_trees(5), true);
    EXPECT_TRUE(r.agree()) << text << ": " << r.summary();
  }
}

}  // namespace
