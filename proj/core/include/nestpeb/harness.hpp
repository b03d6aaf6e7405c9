#pragma once

// Exhaustive small-instance checking: tree enumeration, definitional oracles, and
// formula-versus-automaton equivalence reports.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "nestpeb/automaton.hpp"
#include "nestpeb/closure.hpp"
#include "nestpeb/eval.hpp"
#include "nestpeb/formula.hpp"
#include "nestpeb/simulator.hpp"
#include "nestpeb/terms.hpp"

namespace nestpeb {

/// Every tree with at most `max_nodes` nodes, each once, by size and then in a fixed
/// order within a size.
std::vector<Tree> enumerate_trees(const RankedAlphabet& alphabet, std::size_t max_nodes);

/// Number of trees with exactly `nodes` nodes, by dynamic programming over ranks.
std::uint64_t count_trees(const RankedAlphabet& alphabet, std::size_t nodes);

enum class Language {
  AllLeavesA,     // every leaf is labelled a
  EvenBranching,  // every a-leaf has an even number of branching proper ancestors
  AnBn,           // monadic encoding of a^n b^n
};

std::optional<Language> parse_language(std::string_view name);
std::string_view language_name(Language l);

/// Decides membership directly from the definition. A branching node is a c-node with an
/// a-leaf below each of its first two children. AnBn throws ContractError on a tree that
/// is not a monadic encoding of a word.
bool oracle(Language language, const Tree& tree);

struct Counterexample {
  std::string structure;
  Valuation valuation;
  std::string expected;  // formula or oracle side
  std::string actual;    // automaton side
};

struct EquivalenceReport {
  std::uint64_t instances = 0;
  std::uint64_t agreements = 0;
  std::optional<Counterexample> counterexample;  // first in enumeration order
  std::map<Verdict, std::uint64_t> verdicts;     // automaton verdicts seen
  bool truncated = false;                        // valuation budget hit
  double seconds = 0;

  bool agree() const noexcept { return agreements == instances && !truncated; }
  void record(bool same, const std::function<Counterexample()>& describe);
  /// `instances N agreements M` plus the first counterexample, if any.
  std::string summary() const;
};

/// Valuation budget: NESTPEB_VALUATION_BUDGET if set to a positive integer, else 10^6.
std::uint64_t valuation_budget();

struct EquivOptions {
  RunMode mode = RunMode::Deterministic;
  std::uint64_t budget = 0;  // 0: valuation_budget()
  EvalOptions eval;
};

/// For every tree and every valuation of the free variables, eval(φ) must equal acceptance
/// by `aut` started with one pebble per free variable (named like it) on its node, stacked
/// in sorted order.
EquivalenceReport equiv_formula_automaton(const FormulaPtr& phi, const Automaton& aut, const std::vector<Tree>& trees,
                                          const EquivOptions& opts = {});

/// Closed formula against a membership predicate.
EquivalenceReport equiv_formula_oracle(const FormulaPtr& phi, const std::vector<Tree>& trees,
                                       const std::function<bool(const Tree&)>& member);

/// Automaton without free pebbles against a membership predicate.
EquivalenceReport equiv_automaton_oracle(const Automaton& aut, const std::vector<Tree>& trees,
                                         const std::function<bool(const Tree&)>& member,
                                         RunMode mode = RunMode::Deterministic);

/// Deterministic step matrix built from functional moves (identity, parent, i-th child),
/// each row split by at most one exclusive guard.
StepMatrix random_det_matrix(std::mt19937& rng, std::size_t states, int k, int max_rank);

struct SemiDeterminismReport {
  std::uint64_t checked = 0;     // (state, source tuple) pairs
  std::uint64_t violations = 0;  // sources reaching two final (state, tuple) pairs
  std::string first;
};

/// For every state p and tuple ū: at most one final state q and tuple v̄ with closure(p,q)(ū,v̄).
/// Final states are those whose row in `step` is all false.
SemiDeterminismReport check_semi_deterministic(const StepMatrix& step, const StepMatrix& closure, const Tree& tree);

/// Deterministic one-head tree automaton with `states` states over `alphabet` and up to
/// `pebbles` pebbles x1, x2, .... Each state halts, performs one move or pebble operation,
/// or branches on one test.
Automaton random_det_automaton(std::mt19937& rng, const RankedAlphabet& alphabet, int states, int pebbles);

}  // namespace nestpeb
