#include <gtest/gtest.h>

#include "nestpeb/error.hpp"
#include "nestpeb/eval.hpp"
#include "nestpeb/examples.hpp"
#include "nestpeb/formula_parser.hpp"
#include "nestpeb/harness.hpp"
#include "support.hpp"

using namespace nestpeb;

namespace {

bool eval_on(const std::string& text, const std::string& term, Valuation val = {}) {
  Tree t = parse_term(term, abc_alphabet());
  return eval(parse_formula(text), Structure::from_tree(t), val);
}

TEST(Parse, AtomAndFreeVariables) {
  FormulaPtr f = parse_formula("lab_a(x)");
  EXPECT_EQ(f->kind, FormulaKind::Lab);
  EXPECT_EQ(f->free, std::vector<std::string>{"x"});
}

TEST(Parse, DeterministicClosure) {
  FormulaPtr f = parse_formula("[dtc (x)(y): edg1(x,y)](u,v)");
  ASSERT_EQ(f->kind, FormulaKind::TC);
  EXPECT_TRUE(f->deterministic);
  EXPECT_EQ(f->arity(), 1);
  EXPECT_EQ(f->free, (std::vector<std::string>{"u", "v"}));
}

TEST(Parse, WalkingSentence) {
  FormulaPtr f = walking_sentence();
  EXPECT_TRUE(f->free.empty());
  EXPECT_EQ(to_string(parse_formula(to_string(f))), to_string(f));
}

TEST(Parse, Errors) {
  EXPECT_THROW(parse_formula("[tc (x y)(z): edg1(x,z)](u,v)"), ParseError);
  EXPECT_THROW(parse_formula("[tc (x)(y): edg1(x,y)](u,v,w)"), ParseError);
  EXPECT_THROW(parse_formula("lab_a(x"), ParseError);
  EXPECT_THROW(parse_formula("Ex lab_a(x)"), ParseError);
  FormulaParseOptions local;
  local.allow_leq = false;
  EXPECT_THROW(parse_formula("leq(x,y)", local), ParseError);
  EXPECT_NO_THROW(parse_formula("leq(x,y)"));
}

TEST(Parse, QuantifierScopesRight) {
  FormulaPtr f = parse_formula("Ex. lab_a(x) & lab_b(x)");
  EXPECT_EQ(f->kind, FormulaKind::Exists);
  EXPECT_TRUE(f->free.empty());
}

TEST(Parse, RoundtripOnSuites) {
  for (const auto& suite : {deterministic_suite(), positive_tc_suite()})
    for (const auto& nf : suite) {
      FormulaPtr f = parse_formula(nf.text);
      EXPECT_EQ(to_string(parse_formula(to_string(f))), to_string(f)) << nf.name;
    }
}

TEST(Eval, ClosureIsReflexive) {
  FormulaPtr f = parse_formula("[tc (x)(y): edg1(x,y)](u,u)");
  for (const Tree& t : enumerate_trees(abc_alphabet(), 5)) {
    Structure st = Structure::from_tree(t);
    for (NodeId u = 0; u < t.size(); ++u) ASSERT_TRUE(eval(f, st, {{"u", u}}));
  }
}

TEST(Eval, WalkingExamples) {
  Tree yes = parse_term("c(a,b)", abc_alphabet()), no = parse_term("c(a,a)", abc_alphabet());
  EXPECT_TRUE(eval(walking_sentence(), Structure::from_tree(yes)));
  EXPECT_FALSE(eval(walking_sentence(), Structure::from_tree(no)));
}

TEST(Eval, AnBnExamples) {
  const std::vector<std::string> base{"a", "b"};
  Tree yes = encode_string("aabb", base), no = encode_string("aab", base);
  EXPECT_TRUE(eval(anbn_sentence(), Structure::from_tree(yes)));
  EXPECT_FALSE(eval(anbn_sentence(), Structure::from_tree(no)));
}

TEST(Eval, MissingVariableIsAContractError) {
  EXPECT_THROW(eval_on("lab_a(x)", "a"), ContractError);
  EXPECT_THROW(eval_on("lab_a(x)", "a", {{"x", 3}}), ContractError);
}

TEST(Eval, NonFunctionalDeterministicClosureThrows) {
  try {
    eval_on("[dtc (x)(y): edg1(x,y) | edg2(x,y)](u,v)", "c(a,b)", {{"u", 0}, {"v", 2}});
    FAIL();
  } catch (const FunctionalityError& e) {
    EXPECT_EQ(e.report().source, std::vector<NodeId>{0});
  }
  EvalOptions trust;
  trust.check_functionality = false;
  Tree t = parse_term("c(a,b)", abc_alphabet());
  EXPECT_TRUE(eval(parse_formula("[dtc (x)(y): edg1(x,y) | edg2(x,y)](u,v)"), Structure::from_tree(t),
                   {{"u", 0}, {"v", 2}}, trust));
}

TEST(Functional, Examples) {
  Tree t = parse_term("c(c(a,b),a)", abc_alphabet());
  Structure st = Structure::from_tree(t);
  EXPECT_TRUE(check_functional(parse_formula("edg1(y,x) | edg2(y,x)"), st, {"x"}, {"y"}).functional);
  EXPECT_TRUE(check_functional(parse_formula("x=y"), st, {"x"}, {"y"}).functional);
  Tree small = parse_term("c(a,b)", abc_alphabet());
  auto rep = check_functional(parse_formula("edg1(x,y) | edg2(x,y)"), Structure::from_tree(small), {"x"}, {"y"});
  EXPECT_FALSE(rep.functional);
  EXPECT_EQ(rep.source, std::vector<NodeId>{0});
}

TEST(Functional, FunctionalizedBodyIsFunctional) {
  FormulaPtr psi = parse_formula("edg1(x,y) | edg2(x,y)");
  FormulaPtr f = functionalized(psi, {"x"}, {"y"});
  for (const Tree& t : enumerate_trees(abc_alphabet(), 5))
    ASSERT_TRUE(check_functional(f, Structure::from_tree(t), {"x"}, {"y"}).functional);
}

TEST(Positive, Examples) {
  EXPECT_TRUE(check_positive(walking_sentence()));
  EXPECT_FALSE(check_positive(parse_formula("![tc (x)(y): edg1(x,y)](u,v)")));
  EXPECT_TRUE(check_positive(parse_formula("!![tc (x)(y): edg1(x,y)](u,v)")));
  EXPECT_FALSE(check_positive(parse_formula("[tc (x)(y): edg1(x,y)](u,v) -> lab_a(u)")));
  EXPECT_FALSE(check_positive(parse_formula("lab_a(u) <-> [tc (x)(y): edg1(x,y)](u,v)")));
}

// Closure bodies checked against naive path enumeration.
struct ClosureCase {
  const char* body;
  int k;
};

TEST(Property, ClosureMatchesPathEnumeration) {
  const ClosureCase cases[] = {
      {"edg1(x1,y1) | edg2(x1,y1)", 1},
      {"Ez. edg1(z,x1) & edg2(z,y1)", 1},
      {"edg1(y1,x1) & lab_c(x1)", 1},
      {"edg1(x1,y1) & edg1(x2,y2)", 2},
      {"(edg1(x1,y1) & x2=y2) | (edg2(x2,y2) & x1=y1)", 2},
  };
  for (const auto& c : cases) {
    FormulaPtr body = parse_formula(c.body);
    std::vector<std::string> xs, ys, us, vs;
    for (int i = 1; i <= c.k; ++i) {
      xs.push_back("x" + std::to_string(i));
      ys.push_back("y" + std::to_string(i));
      us.push_back("u" + std::to_string(i));
      vs.push_back("v" + std::to_string(i));
    }
    FormulaPtr closure = fo::tc(xs, ys, body, us, vs, false);
    for (const Tree& t : enumerate_trees(abc_alphabet(), c.k == 1 ? 5 : 3)) {
      Structure st = Structure::from_tree(t);
      auto step = [&](const ref::Tuple& a, const ref::Tuple& b) {
        Valuation v;
        for (int i = 0; i < c.k; ++i) v[xs[i]] = a[i], v[ys[i]] = b[i];
        return eval(body, st, v);
      };
      for (const auto& from : ref::all_tuples(t.size(), c.k))
        for (const auto& to : ref::all_tuples(t.size(), c.k)) {
          Valuation v;
          for (int i = 0; i < c.k; ++i) v[us[i]] = from[i], v[vs[i]] = to[i];
          ASSERT_EQ(eval(closure, st, v), ref::path_exists(t.size(), c.k, step, from, to)) << c.body;
        }
    }
  }
}

TEST(Property, Dualities) {
  const char* bodies[] = {"lab_a(x)", "Ey. edg1(x,y) & lab_b(y)", "[tc (s)(t): edg2(s,t)](x,x)"};
  for (const char* b : bodies) {
    FormulaPtr phi = parse_formula(b);
    FormulaPtr lhs = fo::neg(fo::exists("x", phi)), rhs = fo::forall("x", fo::neg(phi));
    FormulaPtr l2 = fo::neg(fo::conj(phi, fo::lab("c", "x"))), r2 = fo::disj(fo::neg(phi), fo::neg(fo::lab("c", "x")));
    for (const Tree& t : enumerate_trees(abc_alphabet(), 5)) {
      Structure st = Structure::from_tree(t);
      ASSERT_EQ(eval(lhs, st), eval(rhs, st));
      for (NodeId x = 0; x < t.size(); ++x) ASSERT_EQ(eval(l2, st, {{"x", x}}), eval(r2, st, {{"x", x}}));
    }
  }
}

TEST(Property, LeqIsClosureOfParent) {
  FormulaPtr leq = parse_formula("leq(u,v)");
  FormulaPtr dtc = parse_formula("[dtc (x)(y): edg1(y,x) | edg2(y,x)](v,u)");
  for (const Tree& t : enumerate_trees(abc_alphabet(), 7)) {
    Structure st = Structure::from_tree(t);
    for (NodeId u = 0; u < t.size(); ++u)
      for (NodeId v = 0; v < t.size(); ++v) ASSERT_EQ(eval(leq, st, {{"u", u}, {"v", v}}), eval(dtc, st, {{"u", u}, {"v", v}}));
  }
}

TEST(Property, FunctionalClosureFormsAPath) {
  FormulaPtr body = parse_formula("edg1(y,x) | edg2(y,x)");
  FormulaPtr reach = fo::tc({"x"}, {"y"}, body, {"u"}, {"v"}, true);
  for (const Tree& t : enumerate_trees(abc_alphabet(), 7)) {
    Structure st = Structure::from_tree(t);
    for (NodeId u = 0; u < t.size(); ++u) {
      std::vector<NodeId> reached;
      for (NodeId v = 0; v < t.size(); ++v)
        if (eval(reach, st, {{"u", u}, {"v", v}})) reached.push_back(v);
      // Totally ordered: of any two reached nodes one reaches the other.
      for (NodeId a : reached)
        for (NodeId b : reached)
          ASSERT_TRUE(eval(reach, st, {{"u", a}, {"v", b}}) || eval(reach, st, {{"u", b}, {"v", a}}));
    }
  }
}

TEST(Property, PathLocalScopeAgreesOnFunctionalBodies) {
  EvalOptions local;
  local.scope = FunctionalityScope::PathLocal;
  for (const auto& nf : deterministic_suite()) {
    FormulaPtr f = parse_formula(nf.text);
    if (nf.heads != 1) continue;
    for (const Tree& t : enumerate_trees(suite_alphabet(), 4)) {
      Structure st = Structure::from_tree(t);
      std::vector<NodeId> val(f->free.size(), 0);
      while (true) {
        Valuation v;
        for (std::size_t i = 0; i < val.size(); ++i) v[f->free[i]] = val[i];
        ASSERT_EQ(eval(f, st, v), eval(f, st, v, local)) << nf.name;
        std::size_t i = 0;
        while (i < val.size() && ++val[i] == t.size()) val[i++] = 0;
        if (i == val.size()) break;
      }
    }
  }
}

TEST(Graphs, EdgeAtomsAndClosure) {
  Graph g = build_grid(3, 2);
  Structure st = Structure::from_graph(g);
  FormulaPtr right = parse_formula("[dtc (x)(y): edge_h(x,y)](u,v)");
  EXPECT_TRUE(eval(right, st, {{"u", *g.find("0_0")}, {"v", *g.find("0_2")}}));
  EXPECT_FALSE(eval(right, st, {{"u", *g.find("0_0")}, {"v", *g.find("1_2")}}));
  EXPECT_THROW(eval(parse_formula("leq(u,v)"), st, {{"u", 0}, {"v", 1}}), ContractError);
}

TEST(Stats, CountsClosures) {
  auto s = formula_stats(parse_formula("[dtc (x)(y): [tc (a)(b): edg1(a,b)](x,y) & x=y](u,v)"));
  EXPECT_EQ(s.tc_count, 2);
  EXPECT_EQ(s.tc_depth, 2);
  EXPECT_FALSE(s.all_tc_deterministic);
}

}  // namespace
