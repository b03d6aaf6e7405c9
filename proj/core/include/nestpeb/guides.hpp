#pragma once

// Guides: single-head deterministic graph automata that, from any start node, halt after
// visiting every node. The first-visit order of a guide plays the part of preorder.

#include <optional>
#include <string>
#include <vector>

#include "nestpeb/automaton.hpp"
#include "nestpeb/graph.hpp"
#include "nestpeb/simulator.hpp"

namespace nestpeb {

/// Grid: no pebbles, row by row from the top-left corner.
/// Torus: pebble o marks the start, pebble r the start of the current row.
/// Bracelet: pebble x is moved up until it sits on the cycle, detected by a depth-first
/// walk along outgoing edges that comes back down onto the pebble. A second such walk,
/// which backs off whenever it reaches the pebble again, visits every node.
/// All guides halt in an accepting state with an empty stack.
Automaton make_guide(Family family);

struct GuideRun {
  NodeId start = 0;
  Verdict verdict = Verdict::RejectHalt;
  bool halted = false;
  bool stack_empty = false;
  std::size_t covered = 0;
  std::vector<NodeId> first_visits;
};

struct GuideReport {
  std::size_t nodes = 0;
  std::vector<GuideRun> runs;  // one per start node
  bool ok() const;
  /// First failing run, described for humans; empty when ok.
  std::string failure() const;
};

/// Runs the guide from every start node. Throws ContractError unless the guide is a
/// deterministic single-head graph automaton.
GuideReport check_guide(const Automaton& guide, const Graph& g, std::optional<std::uint64_t> max_steps = std::nullopt);

/// Nodes in order of their first visit from `origin`. Throws ContractError if the run
/// does not halt or misses a node.
std::vector<NodeId> first_visit_order(const Graph& g, const Automaton& guide, NodeId origin);

/// The node first visited right after `marked`, found without recording the order: the
/// guide is restarted at the origin and run to `marked`; every later configuration is
/// compared with the configuration in which a second copy, also started at the origin,
/// first reaches the same node. The first match is a first visit. nullopt if the guide
/// halts before one is found.
std::optional<NodeId> successor_via_origin(const Graph& g, const Automaton& guide, NodeId origin, NodeId marked);

}  // namespace nestpeb
