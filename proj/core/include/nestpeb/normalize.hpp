#pragma once

// Normal form used by the automaton-to-formula translation.

#include <optional>
#include <vector>

#include "nestpeb/automaton.hpp"

namespace nestpeb {

/// An automaton whose states record how many pebbles are still off the structure.
/// Pebbles are named c1..cn and the stack always holds c1..ci in this order, so a state
/// at level ℓ sees exactly c1..c(n-ℓ) placed. Drops go from level ℓ to ℓ-1, retrieves
/// back, every other instruction stays within its level.
struct LeveledAutomaton {
  Automaton automaton;
  std::vector<int> level;  // by state
  int pebbles = 0;         // n
  StateId accepting = 0;   // the only accepting state

  std::vector<StateId> states_at(int level) const;
};

/// Language-preserving normal form of a closed automaton (empty initial stack):
///   1. the only accepting state has no outgoing instructions;
///   2. the initial state is not accepting;
///   3. no state entered by a drop has a retrieve instruction;
/// and the stack word is part of the state, making the pebble order canonical. Halting in
/// an accepting state becomes an explicit check leading to the new accepting state: that
/// no instruction applies and, on trees, that all heads are at the root. Determinism is
/// preserved. Tree automata need an alphabet, taken from `alphabet` or the automaton.
LeveledAutomaton normalize(const Automaton& aut, const std::optional<RankedAlphabet>& alphabet = std::nullopt);

}  // namespace nestpeb
