#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "nestpeb/error.hpp"
#include "nestpeb/examples.hpp"
#include "nestpeb/formula_parser.hpp"
#include "nestpeb/guides.hpp"
#include "nestpeb/harness.hpp"
#include "nestpeb/normalize.hpp"
#include "nestpeb/to_formula.hpp"

using namespace nestpeb;

namespace {

const std::vector<Tree>& abc_trees(std::size_t n) {
  static std::map<std::size_t, std::vector<Tree>> cache;
  auto& v = cache[n];
  if (v.empty()) v = enumerate_trees(abc_alphabet(), n);
  return v;
}

bool accepts(const Automaton& a, const Tree& t, RunMode mode = RunMode::Deterministic) {
  RunOptions o;
  o.mode = mode;
  return run(a, Structure::from_tree(t), o).accepted();
}

// The three normal-form conditions and the level discipline.
void expect_normal(const LeveledAutomaton& la) {
  const Automaton& a = la.automaton;
  EXPECT_EQ(a.accepting(), std::set<StateId>{la.accepting});
  EXPECT_NE(a.initial(), la.accepting);
  std::set<StateId> drop_targets;
  for (const auto& ins : a.instructions()) {
    EXPECT_NE(ins.from, la.accepting);
    const int lf = la.level[ins.from], lt = la.level[ins.to];
    switch (ins.action.kind) {
      case ActionKind::Drop:
        EXPECT_EQ(lt, lf - 1);
        drop_targets.insert(ins.to);
        break;
      case ActionKind::Retrieve: EXPECT_EQ(lt, lf + 1); break;
      default: EXPECT_EQ(lt, lf);
    }
  }
  for (const auto& ins : a.instructions())
    if (ins.action.kind == ActionKind::Retrieve) {
      EXPECT_FALSE(drop_targets.count(ins.from)) << a.state_name(ins.from);
    }
  EXPECT_EQ(la.level[a.initial()], la.pebbles);
}

TEST(Normalize, WorkedAutomatonKeepsItsShape) {
  Automaton a = all_leaves_a_automaton();
  LeveledAutomaton la = normalize(a);
  expect_normal(la);
  EXPECT_EQ(la.pebbles, 0);
  // Without pebbles state names are kept, and every instruction leaving a non-accepting
  // state survives. Accepting states hand over to the halting cascade instead.
  std::multiset<std::string> before, after;
  for (const auto& ins : a.instructions())
    if (!a.is_accepting(ins.from))
      before.insert(a.state_name(ins.from) + " " + ins.action.to_string() + " " + a.state_name(ins.to));
  for (const auto& ins : la.automaton.instructions())
    after.insert(la.automaton.state_name(ins.from) + " " + ins.action.to_string() + " " + la.automaton.state_name(ins.to));
  for (const auto& s : before) EXPECT_TRUE(after.count(s)) << s;
  for (const Tree& t : abc_trees(7)) ASSERT_EQ(accepts(a, t), accepts(la.automaton, t)) << t.to_string();
}

TEST(Normalize, AcceptingInitialState) {
  Automaton a(Dialect::Tree, 1);
  a.set_alphabet(abc_alphabet());
  StateId p = a.add_state("p"), q = a.add_state("q");
  a.add_test(p, act::lab(1, "c"), q, q);
  a.add(q, act::down(1, 1), p);
  a.set_initial(p);
  a.set_accepting(p);
  LeveledAutomaton la = normalize(a);
  expect_normal(la);
  for (const Tree& t : abc_trees(6)) ASSERT_EQ(accepts(a, t), accepts(la.automaton, t)) << t.to_string();
}

TEST(Normalize, DropIntoRetrieve) {
  Automaton a(Dialect::Tree, 1);
  a.set_alphabet(abc_alphabet());
  a.add_pebble("x");
  StateId s = a.add_state("s"), d = a.add_state("d"), f = a.add_state("f"), r = a.add_state("r");
  a.add(s, act::drop(1, "x"), d);
  a.add_test(d, act::lab(1, "a"), r, r);  // d tests
  a.add(r, act::retrieve("x"), f);
  StateId back = a.add_state("back");
  a.add(d, act::retrieve("x"), back);  // and retrieves straight after the drop
  a.set_initial(s);
  a.set_accepting(f);
  a.set_accepting(back);
  LeveledAutomaton la = normalize(a);
  expect_normal(la);
  for (const Tree& t : abc_trees(6))
    ASSERT_EQ(accepts(a, t, RunMode::Nondeterministic), accepts(la.automaton, t, RunMode::Nondeterministic));
}

TEST(Normalize, PreservesDeterminismAndLanguage) {
  std::mt19937 rng(17);
  const auto sigma = suite_alphabet();
  const auto trees = enumerate_trees(sigma, 5);
  for (int i = 0; i < 25; ++i) {
    Automaton a = random_det_automaton(rng, sigma, 5, 2);
    LeveledAutomaton la = normalize(a);
    ASSERT_TRUE(check_deterministic(la.automaton));
    expect_normal(la);
    for (const Tree& t : trees) ASSERT_EQ(accepts(a, t), accepts(la.automaton, t)) << a.to_string() << t.to_string();
  }
}

TEST(Normalize, TreeAutomatonNeedsAlphabet) {
  Automaton a(Dialect::Tree, 1);
  StateId p = a.add_state("p");
  a.set_initial(p);
  EXPECT_THROW(normalize(a), ContractError);
  EXPECT_NO_THROW(normalize(a, abc_alphabet()));
}

TEST(ToFormula, WorkedAutomaton) {
  FormulaPtr f = to_formula(all_leaves_a_automaton());
  auto holds = [&](const char* term) { return eval(f, Structure::from_tree(parse_term(term, abc_alphabet()))); };
  EXPECT_TRUE(holds("a"));
  EXPECT_TRUE(holds("c(a,a)"));
  EXPECT_FALSE(holds("b"));
  EXPECT_FALSE(holds("c(a,b)"));
}

TEST(ToFormula, RootLabel) {
  Automaton a(Dialect::Tree, 1);
  a.set_alphabet(abc_alphabet());
  StateId q0 = a.add_state("q0"), qf = a.add_state("qf");
  a.add(q0, act::lab(1, "a"), qf);
  a.set_initial(q0);
  a.set_accepting(qf);
  FormulaPtr f = to_formula(a);
  for (const Tree& t : abc_trees(5)) {
    ASSERT_EQ(eval(f, Structure::from_tree(t)), t.node(0).label == "a") << t.to_string();
    ASSERT_EQ(accepts(a, t), t.node(0).label == "a");
  }
}

TEST(ToFormula, DeterministicOutputIsPositiveWithDeterministicClosures) {
  std::mt19937 rng(23);
  const auto sigma = suite_alphabet();
  const auto trees = enumerate_trees(sigma, 5);
  for (int i = 0; i < 15; ++i) {
    Automaton a = random_det_automaton(rng, sigma, 6, 2);
    FormulaPtr f = to_formula(a);
    EXPECT_TRUE(check_positive(f));
    EXPECT_TRUE(formula_stats(f).all_tc_deterministic);
    auto r = equiv_formula_automaton(f, a, trees);
    ASSERT_TRUE(r.agree()) << a.to_string() << r.summary();
  }
}

TEST(ToFormula, NondeterministicAutomaton) {
  // Guess a leaf and accept if it is labelled b.
  Automaton a(Dialect::Tree, 1);
  a.set_alphabet(abc_alphabet());
  a.add_pebble("x");
  StateId walk = a.add_state("walk"), down1 = a.add_state("d1"), down2 = a.add_state("d2"), leaf = a.add_state("leaf"),
          mark = a.add_state("mark"), home = a.add_state("home"), up = a.add_state("up"), lift = a.add_state("lift"),
          done = a.add_state("done");
  a.add(walk, act::down(1, 1), down1);
  a.add(walk, act::down(1, 2), down2);
  a.add(down1, act::lab(1, "c"), walk);
  a.add(down2, act::lab(1, "c"), walk);
  a.add(down1, act::lab(1, "b"), leaf);
  a.add(down2, act::lab(1, "b"), leaf);
  a.add(walk, act::lab(1, "b"), leaf);
  a.add(leaf, act::drop(1, "x"), mark);
  a.add(mark, act::peb(1, "x"), home);
  a.add(home, act::up(1), home);
  a.add(home, act::chno(1, 1, true), up);
  a.add(up, act::chno(1, 2, true), lift);
  a.add(lift, act::retrieve("x"), done);
  a.set_initial(walk);
  a.set_accepting(done);
  FormulaPtr f = to_formula(a);
  EXPECT_TRUE(check_positive(f));
  EquivOptions o;
  o.mode = RunMode::Nondeterministic;
  auto r = equiv_formula_automaton(f, a, abc_trees(5), o);
  EXPECT_TRUE(r.agree()) << r.summary();
}

TEST(ToFormula, EliminationOrderIsExtensionallyIrrelevant) {
  Automaton a = all_leaves_a_automaton();
  LeveledAutomaton la = normalize(a);
  ToFormulaOptions reversed;
  for (StateId s = static_cast<StateId>(la.automaton.state_count()); s-- > 0;)
    reversed.order.push_back(la.automaton.state_name(s));
  FormulaPtr f = to_formula(a), g = to_formula(a, reversed);
  EXPECT_NE(to_string(f), to_string(g));
  for (const Tree& t : abc_trees(7)) ASSERT_EQ(eval(f, Structure::from_tree(t)), eval(g, Structure::from_tree(t)));
}

TEST(ToFormula, UnknownOrderStateIsAnError) {
  ToFormulaOptions o;
  o.order = {"nope"};
  EXPECT_THROW(to_formula(all_leaves_a_automaton(), o), ContractError);
}

TEST(ToFormula, PrintedFormulaReparses) {
  FormulaPtr f = to_formula(all_leaves_a_automaton());
  FormulaPtr g = parse_formula(to_string(f));
  EXPECT_EQ(to_string(g), to_string(f));
}

TEST(ToFormula, GraphAutomata) {
  Automaton grid = make_guide(Family::Grid);
  FormulaPtr f = to_formula(grid);
  FormulaPtr nf = to_formula(complement(grid));
  for (auto [w, h] : {std::pair{1, 1}, {2, 2}, {3, 2}}) {
    Structure st = Structure::from_graph(build_grid(w, h));
    EXPECT_TRUE(eval(f, st));
    EXPECT_FALSE(eval(nf, st));
  }
  // Accepts iff the start node has no outgoing h-edge, so the sentence holds only when
  // no node has one.
  Automaton a(Dialect::Graph, 1);
  StateId s = a.add_state("s"), t = a.add_state("t"), yes = a.add_state("yes"), no = a.add_state("no");
  a.add_test(s, act::outedge(1, "h"), t, yes);
  a.add(t, act::outmove(1, "h"), no);
  a.set_initial(s);
  a.set_accepting(yes);
  FormulaPtr g = to_formula(a);
  EXPECT_TRUE(eval(g, Structure::from_graph(build_grid(1, 3))));
  EXPECT_FALSE(eval(g, Structure::from_graph(build_grid(2, 2))));
}

}  // namespace
