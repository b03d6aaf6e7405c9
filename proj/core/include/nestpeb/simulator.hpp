#pragma once

// Step relation and runs of pebble automata on trees and graphs.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nestpeb/automaton.hpp"
#include "nestpeb/structure.hpp"

namespace nestpeb {

struct StackEntry {
  int pebble;  // index into Automaton::pebbles()
  NodeId node;
  friend bool operator==(const StackEntry&, const StackEntry&) = default;
};

struct Configuration {
  StateId state = 0;
  std::vector<NodeId> heads;
  std::vector<StackEntry> stack;  // bottom first
  friend bool operator==(const Configuration&, const Configuration&) = default;
};

enum class Verdict {
  Accept,
  RejectHalt,      // deterministic run halted without accepting
  Diverge,         // deterministic run entered a configuration cycle
  Reject,          // nondeterministic search found no accepting computation
  StartDependent,  // graph run whose outcome varies with the start node
  StepLimit,       // max_steps exhausted before a verdict
};

std::string_view verdict_name(Verdict v);

enum class RunMode { Deterministic, Nondeterministic };

struct RunOptions {
  RunMode mode = RunMode::Deterministic;
  /// Graph dialect: start node for every head. Unset means "check every start".
  std::optional<NodeId> start;
  /// Explicit initial head positions; overrides `start`.
  std::optional<std::vector<NodeId>> heads;
  /// Pebbles already on the structure, bottom first. Acceptance requires the same
  /// stack at the end.
  std::vector<std::pair<std::string, NodeId>> initial_stack;
  bool trace = false;
  std::optional<std::uint64_t> max_steps;
};

struct RunResult {
  Verdict verdict = Verdict::RejectHalt;
  std::optional<Configuration> final_config;
  std::uint64_t steps = 0;
  std::vector<std::string> trace;
  /// Graph runs over every start node: the verdict per start, indexed by node.
  std::vector<Verdict> per_start;

  bool accepted() const noexcept { return verdict == Verdict::Accept; }
};

/// An automaton bound to one structure: instructions are resolved to label and edge
/// indices once, so stepping does no string work.
class Machine {
 public:
  Machine(const Automaton& aut, const Structure& structure);

  const Automaton& automaton() const noexcept { return *aut_; }
  const Structure& structure() const noexcept { return *st_; }

  Configuration initial(std::vector<NodeId> heads, std::vector<StackEntry> stack = {}) const;
  /// All heads at the root (trees) or at `start` (graphs).
  Configuration initial_at(NodeId start, std::vector<StackEntry> stack = {}) const;

  std::vector<Configuration> successors(const Configuration& c) const;
  /// Applies the first applicable instruction in place; false if `c` is halting.
  /// On a deterministic automaton this is the step relation.
  bool step(Configuration& c) const;
  bool is_halting(const Configuration& c) const;
  /// Halting, accepting state, heads at the root for trees, and stack equal to `expected_stack`.
  bool is_accepting(const Configuration& c, const std::vector<StackEntry>& expected_stack) const;

  std::vector<StackEntry> resolve_stack(const std::vector<std::pair<std::string, NodeId>>& stack) const;
  /// `state | heads | stack`, heads as node names and stack as `pebble@node`.
  std::string describe(const Configuration& c) const;

 private:
  struct Op {
    ActionKind kind;
    bool negated;
    int head;   // 0-based
    int arg;    // child number, label index, edge label index or pebble index
    StateId to;
  };
  const Automaton* aut_;
  const Structure* st_;
  std::vector<std::vector<Op>> ops_;

  bool apply(const Op& op, Configuration& c) const;
  bool holds(const Op& op, const Configuration& c) const;
};

/// Deterministic run by iterating the step function with exact cycle detection.
RunResult run_deterministic(const Machine& m, const Configuration& start, const RunOptions& opts = {});
/// Breadth-first search of the configuration space for an accepting halting configuration.
RunResult run_nondeterministic(const Machine& m, const Configuration& start, const RunOptions& opts = {});

/// Checks the mode precondition and dispatches; graph automata without a start are run
/// from every node. Throws ContractError on a nondeterministic automaton in
/// deterministic mode.
RunResult run(const Automaton& aut, const Structure& structure, const RunOptions& opts = {});

/// Calls `visit` with every configuration of the deterministic run, starting with `start`,
/// until it halts, cycles or `visit` returns false. Returns the verdict of the run so far.
Verdict walk(const Machine& m, const Configuration& start, const std::function<bool(const Configuration&)>& visit,
             std::optional<std::uint64_t> max_steps = std::nullopt);

}  // namespace nestpeb
