#include <gtest/gtest.h>

#include <random>

#include "nestpeb/closure.hpp"
#include "nestpeb/examples.hpp"
#include "nestpeb/formula_parser.hpp"
#include "nestpeb/harness.hpp"
#include "support.hpp"

using namespace nestpeb;

namespace {

bool entry(const StepMatrix& m, std::size_t p, std::size_t q, const Structure& st, const ref::Tuple& u,
           const ref::Tuple& v) {
  Valuation val;
  for (int i = 0; i < m.k; ++i) val[m.xs[i]] = u[i], val[m.ys[i]] = v[i];
  return eval(m.at(p, q), st, val);
}

TEST(Closure, ChainHasNoEmptyPath) {
  StepMatrix m = StepMatrix::empty({"1"}, 1);
  m.at(0, 0) = fo::edg(1, m.xs[0], m.ys[0]);
  StepMatrix c = computation_closure(m, true);
  Tree t = encode_string("aa", {"a", "b"});
  Structure st = Structure::from_tree(t);
  EXPECT_TRUE(entry(c, 0, 0, st, {0}, {2}));
  EXPECT_TRUE(entry(c, 0, 0, st, {0}, {1}));
  EXPECT_FALSE(entry(c, 0, 0, st, {0}, {0}));
  EXPECT_FALSE(entry(c, 0, 0, st, {2}, {0}));
}

TEST(Closure, SingleStepMatrix) {
  StepMatrix m = StepMatrix::empty({"1", "2"}, 1);
  m.at(0, 1) = fo::eq(m.xs[0], m.ys[0]);
  StepMatrix c = computation_closure(m, true);
  EXPECT_EQ(c.at(0, 0)->kind, FormulaKind::False);
  EXPECT_EQ(c.at(1, 1)->kind, FormulaKind::False);
  Tree t = parse_term("c(a,b)", abc_alphabet());
  Structure st = Structure::from_tree(t);
  for (NodeId u = 0; u < 3; ++u)
    for (NodeId v = 0; v < 3; ++v) EXPECT_EQ(entry(c, 0, 1, st, {u}, {v}), u == v);
  EXPECT_TRUE(m.is_final(1));
  EXPECT_FALSE(m.is_final(0));
}

// Closure entries against breadth-first search over (state, tuple) pairs, computed from
// the step entries alone.
void expect_closure_matches_search(const StepMatrix& m, const StepMatrix& c, const Tree& t) {
  Structure st = Structure::from_tree(t);
  const auto tuples = ref::all_tuples(t.size(), m.k);
  const std::size_t n = m.size();
  std::vector<std::vector<std::vector<bool>>> step(n, std::vector<std::vector<bool>>(tuples.size(),
                                                                                     std::vector<bool>(n * tuples.size())));
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t a = 0; a < tuples.size(); ++a)
      for (std::size_t q = 0; q < n; ++q)
        for (std::size_t b = 0; b < tuples.size(); ++b) step[p][a][q * tuples.size() + b] = entry(m, p, q, st, tuples[a], tuples[b]);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t a = 0; a < tuples.size(); ++a) {
      std::vector<bool> seen(n * tuples.size());
      std::vector<std::size_t> queue;
      for (std::size_t j = 0; j < seen.size(); ++j)
        if (step[p][a][j]) seen[j] = true, queue.push_back(j);
      for (std::size_t i = 0; i < queue.size(); ++i) {
        const std::size_t q = queue[i] / tuples.size(), b = queue[i] % tuples.size();
        for (std::size_t j = 0; j < seen.size(); ++j)
          if (step[q][b][j] && !seen[j]) seen[j] = true, queue.push_back(j);
      }
      for (std::size_t j = 0; j < seen.size(); ++j)
        ASSERT_EQ(entry(c, p, j / tuples.size(), st, tuples[a], tuples[j % tuples.size()]), seen[j])
            << "p=" << p << " on " << t.to_string();
    }
}

TEST(Property, ClosureEqualsPathSearch) {
  std::mt19937 rng(11);
  const auto trees = enumerate_trees(abc_alphabet(), 5);
  for (int i = 0; i < 12; ++i) {
    const int k = i % 3 == 2 ? 2 : 1;
    StepMatrix m = random_det_matrix(rng, 3, k, 2);
    StepMatrix c = computation_closure(m, true);
    for (const Tree& t : trees) {
      if (k == 2 && t.size() > 3) continue;
      expect_closure_matches_search(m, c, t);
    }
  }
}

TEST(Property, NondeterministicMatrixClosure) {
  StepMatrix m = StepMatrix::empty({"p", "q"}, 1);
  const auto& x = m.xs[0];
  const auto& y = m.ys[0];
  m.at(0, 0) = parse_formula("edg1(" + x + "," + y + ") | edg2(" + x + "," + y + ")");
  m.at(0, 1) = parse_formula("lab_a(" + x + ") & " + x + "=" + y);
  m.at(1, 0) = parse_formula("edg1(" + y + "," + x + ")");
  StepMatrix c = computation_closure(m, false);
  for (const Tree& t : enumerate_trees(abc_alphabet(), 5)) expect_closure_matches_search(m, c, t);
}

TEST(Property, EliminationOrderDoesNotMatter) {
  std::mt19937 rng(5);
  const auto trees = enumerate_trees(abc_alphabet(), 4);
  for (int i = 0; i < 10; ++i) {
    StepMatrix m = random_det_matrix(rng, 4, 1, 2);
    StepMatrix a = computation_closure(m, true);
    StepMatrix b = computation_closure(m, true, {3, 1, 2, 0});
    for (const Tree& t : trees) {
      Structure st = Structure::from_tree(t);
      for (std::size_t p = 0; p < 4; ++p)
        for (std::size_t q = 0; q < 4; ++q)
          for (NodeId u = 0; u < t.size(); ++u)
            for (NodeId v = 0; v < t.size(); ++v) ASSERT_EQ(entry(a, p, q, st, {u}, {v}), entry(b, p, q, st, {u}, {v}));
    }
  }
}

TEST(Property, SemiDeterministicClosure) {
  std::mt19937 rng(3);
  const auto trees = enumerate_trees(abc_alphabet(), 4);
  for (int i = 0; i < 20; ++i) {
    StepMatrix m = random_det_matrix(rng, 3, i % 2 + 1, 2);
    StepMatrix c = computation_closure(m, true);
    for (const Tree& t : trees) {
      auto r = check_semi_deterministic(m, c, t);
      ASSERT_EQ(r.violations, 0u) << r.first;
    }
  }
}

TEST(Property, DeterministicClosuresHaveFunctionalBodies) {
  std::mt19937 rng(9);
  const auto trees = enumerate_trees(abc_alphabet(), 4);
  for (int i = 0; i < 10; ++i) {
    StepMatrix c = computation_closure(random_det_matrix(rng, 3, 1, 2), true);
    std::vector<FormulaPtr> todo, tcs;
    for (const auto& row : c.entries) todo.insert(todo.end(), row.begin(), row.end());
    while (!todo.empty()) {
      FormulaPtr f = todo.back();
      todo.pop_back();
      if (f->kind == FormulaKind::TC) {
        EXPECT_TRUE(f->deterministic);
        tcs.push_back(f);
      }
      todo.insert(todo.end(), f->sub.begin(), f->sub.end());
    }
    for (const auto& tc : tcs) {
      std::vector<std::string> xs(tc->vars.begin(), tc->vars.begin() + tc->arity());
      std::vector<std::string> ys(tc->vars.begin() + tc->arity(), tc->vars.end());
      for (const Tree& t : trees) ASSERT_TRUE(check_functional(tc->body(), Structure::from_tree(t), xs, ys).functional);
    }
  }
}

// Random formulas over u, v with constants sprinkled in.
FormulaPtr random_formula(std::mt19937& rng, int depth, const std::vector<std::string>& vars) {
  auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
  auto var = [&] { return vars[pick(static_cast<int>(vars.size()))]; };
  if (depth == 0) {
    switch (pick(6)) {
      case 0: return fo::top();
      case 1: return fo::bottom();
      case 2: return fo::lab(pick(2) ? "a" : "c", var());
      case 3: return fo::edg(1 + pick(2), var(), var());
      case 4: return fo::eq(var(), var());
      default: return fo::leq(var(), var());
    }
  }
  switch (pick(7)) {
    case 0: return fo::neg(random_formula(rng, depth - 1, vars));
    case 1: return fo::conj({random_formula(rng, depth - 1, vars), random_formula(rng, depth - 1, vars), random_formula(rng, 0, vars)});
    case 2: return fo::disj(random_formula(rng, depth - 1, vars), random_formula(rng, depth - 1, vars));
    case 3: {
      auto inner = vars;
      inner.push_back("w");
      return fo::exists("w", random_formula(rng, depth - 1, inner));
    }
    case 4: {
      auto inner = vars;
      inner.push_back("w");
      return fo::forall("w", random_formula(rng, depth - 1, inner));
    }
    case 5: {
      auto inner = vars;
      inner.insert(inner.end(), {"s", "t"});
      return fo::tc({"s"}, {"t"}, random_formula(rng, depth - 1, inner), {var()}, {var()}, false);
    }
    default: return random_formula(rng, depth - 1, vars);
  }
}

TEST(Simplify, ConstantRules) {
  using simp::conj;
  using simp::disj;
  FormulaPtr a = fo::lab("a", "x");
  EXPECT_EQ(conj({a, fo::bottom()})->kind, FormulaKind::False);
  EXPECT_EQ(conj({fo::top(), a}), a);
  EXPECT_EQ(disj({a, fo::top()})->kind, FormulaKind::True);
  EXPECT_EQ(disj({fo::bottom(), a}), a);
  EXPECT_EQ(simp::exists({"z"}, a), a);
  EXPECT_EQ(simplify(fo::neg(fo::neg(a))), a);
  EXPECT_EQ(simplify(fo::eq("x", "x"))->kind, FormulaKind::True);
  EXPECT_EQ(to_string(simp::tc({"s"}, {"t"}, fo::bottom(), {"u"}, {"v"}, true)), to_string(fo::eq("u", "v")));
}

TEST(Property, SimplifierIsExtensionalIdentity) {
  std::mt19937 rng(2024);
  const auto trees = enumerate_trees(abc_alphabet(), 5);
  for (int i = 0; i < 150; ++i) {
    FormulaPtr f = random_formula(rng, 3, {"u", "v"});
    FormulaPtr g = simplify(f);
    EXPECT_LE(formula_stats(g).dag_size, formula_stats(f).dag_size);
    for (const Tree& t : trees) {
      Structure st = Structure::from_tree(t);
      for (NodeId u = 0; u < t.size(); ++u)
        for (NodeId v = 0; v < t.size(); ++v) {
          Valuation val{{"u", u}, {"v", v}};
          ASSERT_EQ(eval(f, st, val), eval(g, st, val)) << to_string(f) << "  vs  " << to_string(g);
        }
    }
  }
}

}  // namespace
