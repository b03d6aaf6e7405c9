#pragma once

// Fixed example objects: the all-leaves-a automaton, the even-branching language of
// walking automata as a sentence and as a two-pebble automaton, the a^n b^n sentence.
// Also the formula suites the test programs iterate over.

#include <string>
#include <vector>

#include "nestpeb/automaton.hpp"
#include "nestpeb/formula.hpp"

namespace nestpeb {

/// {a:0, b:0, c:2}.
RankedAlphabet abc_alphabet();

/// One-head, pebble-free deterministic automaton accepting the trees whose leaves are all
/// labelled a. It keeps a preorder walk and rejects by getting stuck on a b-leaf.
Automaton all_leaves_a_automaton();

/// y is a branching node: labelled c with an a-leaf below each of its two children.
FormulaPtr branching(const std::string& y);

/// y is the lowest branching proper ancestor of x.
FormulaPtr lowest_branching_above(const std::string& x, const std::string& y);

/// The trees in which every a-leaf has an even number of branching proper ancestors,
/// as an FO sentence with one unary DTC that jumps two branching ancestors at a time.
FormulaPtr walking_sentence();

/// Deterministic one-head automaton with pebbles x1, x2 for the same language over
/// abc_alphabet(). x1 marks the current a-leaf of a preorder scan; for each node on the
/// path upward, x2 marks the parent while the sibling subtree is searched for an a-leaf,
/// and the parity of branching nodes seen so far is kept in the state.
Automaton even_branching_automaton();

/// Over monadic_alphabet({"a","b"}): the encodings of a^n b^n, n ≥ 0, using one binary
/// DTC that walks a pointer through the a-block and one through the b-block in lockstep.
FormulaPtr anbn_sentence();

struct NamedFormula {
  std::string name;
  std::string text;  // parse_formula syntax
  int heads = 1;     // heads needed by the compiled automaton
};

/// Alphabet of the compiler suites: {a:0, b:0, d:1, c:2}.
RankedAlphabet suite_alphabet();

/// Formulas whose TC nodes are all deterministic, for compile_det.
std::vector<NamedFormula> deterministic_suite();

/// Positive formulas with nondeterministic TC, for compile_nondet.
std::vector<NamedFormula> positive_tc_suite();

}  // namespace nestpeb
