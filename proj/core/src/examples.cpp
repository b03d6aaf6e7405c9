#include "nestpeb/examples.hpp"

#include "emitter.hpp"

namespace nestpeb {

RankedAlphabet abc_alphabet() { return RankedAlphabet({{"a", 0}, {"b", 0}, {"c", 2}}); }

RankedAlphabet suite_alphabet() { return RankedAlphabet({{"a", 0}, {"b", 0}, {"d", 1}, {"c", 2}}); }

Automaton all_leaves_a_automaton() {
  Automaton aut(Dialect::Tree, 1);
  aut.set_alphabet(abc_alphabet());
  StateId s1 = aut.add_state("1");
  StateId s1p = aut.add_state("1'");
  StateId s1pp = aut.add_state("1''");
  StateId s2 = aut.add_state("2");
  StateId s2p = aut.add_state("2'");
  StateId s3 = aut.add_state("3");
  StateId s3p = aut.add_state("3'");
  StateId s3pp = aut.add_state("3''");
  StateId h = aut.add_state("h");
  aut.add(s1, act::lab(1, "c"), s1p);
  aut.add(s1p, act::down(1, 1), s1);
  aut.add(s1, act::lab(1, "c", true), s1pp);
  aut.add(s1pp, act::lab(1, "a"), s3);
  aut.add(s3, act::chno(1, 2), s3p);
  aut.add(s3p, act::up(1), s3);
  aut.add(s3, act::chno(1, 2, true), s3pp);
  aut.add(s3pp, act::chno(1, 1), s2);
  aut.add(s3pp, act::chno(1, 1, true), h);
  aut.add(s2, act::up(1), s2p);
  aut.add(s2p, act::down(1, 2), s1);
  aut.set_initial(s1);
  aut.set_accepting(h);
  return aut;
}

FormulaPtr branching(const std::string& y) {
  auto a_leaf_below = [&](int child) {
    const std::string c = y + "c" + std::to_string(child);
    const std::string l = y + "l" + std::to_string(child);
    return fo::exists(c, fo::conj(fo::edg(child, y, c), fo::exists(l, fo::conj(fo::leq(c, l), fo::lab("a", l)))));
  };
  return fo::conj({fo::lab("c", y), a_leaf_below(1), a_leaf_below(2)});
}

FormulaPtr lowest_branching_above(const std::string& x, const std::string& y) {
  const std::string z = x + y + "z";
  FormulaPtr between = fo::conj({fo::leq(y, z), fo::leq(z, x), fo::neg(fo::eq(z, y)), fo::neg(fo::eq(z, x))});
  return fo::conj({fo::leq(y, x), fo::neg(fo::eq(y, x)), branching(y),
                   fo::forall(z, fo::implies(between, fo::neg(branching(z))))});
}

FormulaPtr walking_sentence() {
  FormulaPtr two_up = fo::exists("m", fo::conj(lowest_branching_above("s", "m"), lowest_branching_above("m", "t")));
  FormulaPtr reach = fo::tc({"s"}, {"t"}, two_up, {"x"}, {"y"}, true);
  FormulaPtr top = fo::neg(fo::exists("w", lowest_branching_above("y", "w")));
  return fo::forall("x", fo::implies(fo::lab("a", "x"), fo::exists("y", fo::conj(reach, top))));
}

Automaton even_branching_automaton() {
  Automaton aut(Dialect::Tree, 1);
  const RankedAlphabet sigma = abc_alphabet();
  aut.set_alphabet(sigma);
  aut.add_pebble("x1");
  aut.add_pebble("x2");
  detail::Emitter em(aut, sigma);
  StateId accept = aut.add_state("accept");
  StateId reject = aut.add_state("reject");

  // Preorder scan for a-leaves; x1 marks the leaf being checked.
  em.prefix = "scan";
  StateId scan = em.state("at");
  StateId advance = em.next_preorder(1, scan, accept);
  StateId up[2] = {aut.add_state("up.even"), aut.add_state("up.odd")};
  aut.add_test(scan, act::lab(1, "a"), em.op(act::drop(1, "x1"), up[0], "mark"), advance);
  StateId resume = em.search_pebble(1, "x1", em.op(act::retrieve("x1"), advance, "unmark"), reject);

  for (int p = 0; p < 2; ++p) {
    em.prefix = p == 0 ? "even" : "odd";
    // The head climbs from the leaf; at each parent the other child's subtree is searched.
    StateId back = em.state("back");
    aut.add_test(back, act::peb(1, "x2"), em.op(act::retrieve("x2"), up[1 - p], "unmark"), em.op(act::up(1), back, "up"));
    StateId not_found = em.op(act::retrieve("x2"), up[p], "unmark");

    // Preorder walk of the subtree below the pebbled parent.
    StateId sub = em.state("sub");
    StateId climb = em.state("climb");
    StateId from_first = em.test(act::peb(1, "x2"), not_found, em.op(act::down(1, 2), sub, "down"), "stop");
    StateId from_second = em.test(act::peb(1, "x2"), not_found, climb, "stop");
    aut.add_test(climb, act::chno(1, 1), em.op(act::up(1), from_first, "up"), em.op(act::up(1), from_second, "up"));
    StateId inner = em.test(act::lab(1, "c"), em.op(act::down(1, 1), sub, "down"), climb, "inner");
    aut.add_test(sub, act::lab(1, "a"), back, inner);

    StateId left = em.op(act::up(1), em.op(act::drop(1, "x2"), em.op(act::down(1, 2), sub, "down"), "mark"), "up");
    StateId right = em.op(act::up(1), em.op(act::drop(1, "x2"), em.op(act::down(1, 1), sub, "down"), "mark"), "up");
    StateId step = em.test(act::chno(1, 1), left, right, "side");
    em.link(up[p], em.if_root(1, p == 0 ? resume : reject, step));
  }
  aut.set_initial(scan);
  aut.set_accepting(accept);
  aut.validate();
  return aut;
}

FormulaPtr anbn_sentence() {
  const std::string end(kEndMarker);
  FormulaPtr root = fo::neg(fo::exists("z", fo::edg(1, "z", "r")));
  FormulaPtr first_non_a =
      fo::conj(fo::neg(fo::lab("a", "m")),
               fo::forall("z", fo::implies(fo::conj(fo::leq("z", "m"), fo::neg(fo::eq("z", "m"))), fo::lab("a", "z"))));
  FormulaPtr lockstep = fo::conj({fo::edg(1, "x1", "y1"), fo::lab("a", "x1"), fo::edg(1, "x2", "y2"), fo::lab("b", "x2")});
  FormulaPtr reach = fo::tc({"x1", "x2"}, {"y1", "y2"}, lockstep, {"r", "m"}, {"m", "e"}, true);
  return fo::exists(std::vector<std::string>{"r", "m", "e"},
                    fo::conj({root, fo::lab(end, "e"), first_non_a, reach}));
}

std::vector<NamedFormula> deterministic_suite() {
  return {
      {"tautology", "Ax. x=x", 1},
      {"label", "lab_a(x)", 1},
      {"right-a-child", "Ex.(lab_c(x) & Ey.(edg2(x,y) & lab_a(y)))", 1},
      {"inner-or-leaf", "Ax.(lab_a(x) | lab_b(x) | Ey.edg1(x,y))", 1},
      {"proper-ancestor", "leq(x,y) & x!=y", 1},
      {"leftmost-descent", "[dtc (x)(y): edg1(x,y)](u,v)", 1},
      {"ancestor-by-parent", "[dtc (x)(y): edg1(y,x) | edg2(y,x)](u,v)", 1},
      {"sibling-hop", "Ex.(lab_a(x) & Ey.(lab_b(y) & [dtc (s)(t): Ez.(edg1(z,s) & edg2(z,t))](x,y)))", 1},
      {"even-first-chain", "Au.(lab_d(u) -> Ev.(lab_a(v) & [dtc (x)(y): Ez.(edg1(x,z) & edg1(z,y))](u,v)))", 1},
      {"no-b-on-left-spine", "!Ev.(lab_b(v) & [dtc (x)(y): edg1(x,y)](u,v))", 1},
      {"pair-descent", "[dtc (x1 x2)(y1 y2): edg1(x1,y1) & edg1(x2,y2)](u1 u2, v1 v2)", 2},
      {"same-depth-a-leaves",
       "Ex.Ey.(x!=y & lab_a(x) & lab_a(y) & Er.(!(Ez.(edg1(z,r) | edg2(z,r))) & "
       "[dtc (x1 x2)(y1 y2): (edg1(y1,x1) | edg2(y1,x1)) & (edg1(y2,x2) | edg2(y2,x2))](x y, r r)))",
       2},
  };
}

std::vector<NamedFormula> positive_tc_suite() {
  return {
      {"descendant", "[tc (x)(y): edg1(x,y) | edg2(x,y)](u,v)", 1},
      {"a-below-every-c", "Ax.(!lab_c(x) | Ey.(lab_a(y) & [tc (s)(t): edg1(s,t) | edg2(s,t)](x,y)))", 1},
      {"a-and-b-connected",
       "Ex.Ey.(lab_a(x) & lab_b(y) & [tc (s)(t): edg1(s,t) | edg1(t,s) | edg2(s,t) | edg2(t,s)](x,y))", 1},
      {"double-negation", "!Ex.(lab_d(x) & !Ey.(lab_a(y) & [tc (s)(t): edg1(s,t) | edg2(s,t)](x,y)))", 1},
      {"nested-tc", "[tc (x)(y): Ez.(edg1(x,z) & [tc (s)(t): edg1(s,t) | edg2(s,t)](z,y))](u,v)", 1},
      {"same-depth-a-b",
       "Er.(!(Ez.(edg1(z,r) | edg2(z,r))) & Ex.Ey.(lab_a(x) & lab_b(y) & "
       "[tc (x1 x2)(y1 y2): (edg1(x1,y1) | edg2(x1,y1)) & (edg1(x2,y2) | edg2(x2,y2))](r r, x y)))",
       2},
  };
}

}  // namespace nestpeb
