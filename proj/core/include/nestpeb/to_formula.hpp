#pragma once

// Automata to formulas: one step matrix per pebble level, closed level by level, with
// drop/retrieve pairs folded into macro steps of the level above.

#include <optional>
#include <string>
#include <vector>

#include "nestpeb/automaton.hpp"
#include "nestpeb/closure.hpp"
#include "nestpeb/formula.hpp"
#include "nestpeb/normalize.hpp"

namespace nestpeb {

struct ToFormulaOptions {
  /// Tree automata: the alphabet fixing the child numbers; defaults to the automaton's.
  std::optional<RankedAlphabet> alphabet;
  /// State names of the normalized automaton to eliminate first, in this order.
  std::vector<std::string> order;
};

/// Step matrix of one level of a normalized automaton. Head tuples are x̄, ȳ; the pebble
/// c_d is the free variable p_d. `closure_below` is the closure of the level underneath
/// (ignored at level 0), indexed by the states of that level in states_at order.
StepMatrix level_matrix(const LeveledAutomaton& la, int level, const StepMatrix* closure_below,
                        const RankedAlphabet& alphabet);

/// Closed formula true exactly on the structures the automaton accepts. Trees: some
/// nonempty computation leads from the initial state with all heads at the root to the
/// accepting state with all heads at the root. Graphs: from every start node some
/// computation reaches the accepting state. For deterministic automata the result is
/// positive and every closure is deterministic.
FormulaPtr to_formula(const Automaton& aut, const ToFormulaOptions& opts = {});

}  // namespace nestpeb
