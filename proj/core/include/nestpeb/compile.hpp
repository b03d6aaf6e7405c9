#pragma once

// Formulas to pebble automata. Each free variable of the formula is a pebble that the
// caller places on the tree before the run and that the automaton only tests.

#include "nestpeb/automaton.hpp"
#include "nestpeb/formula.hpp"

namespace nestpeb {

/// Deterministic, always-halting automaton with `heads` heads. Started with all heads at
/// the root and the free-variable pebbles (named like the variables) placed, it halts with
/// all heads at the root and the stack unchanged, accepting iff the formula holds.
/// Throws ContractError on a non-deterministic TC, a TC of arity above `heads`, or an
/// edge_σ atom.
Automaton compile_det(const FormulaPtr& f, int heads, const RankedAlphabet& alphabet);

/// Nondeterministic automaton for a positive formula (every TC under an even number of
/// negations). TC steps are guessed and verified with 2k pebbles per closure.
Automaton compile_nondet(const FormulaPtr& f, int heads, const RankedAlphabet& alphabet);

/// Free variables plus the maximum, over paths of the syntax tree, of one pebble per
/// quantifier and 3k per TC of arity k. Equals the pebble count of compile_det.
int pebble_budget(const FormulaPtr& f);
/// As pebble_budget with 2k per TC, matching compile_nondet.
int pebble_budget_nondet(const FormulaPtr& f);

}  // namespace nestpeb
