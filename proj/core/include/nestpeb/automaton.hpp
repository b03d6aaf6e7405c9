#pragma once

// k-head walking automata with nested pebbles, in the tree dialect (up/down/chno)
// and the graph dialect (inmove/outmove/inedge/outedge).

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "nestpeb/terms.hpp"

namespace nestpeb {

enum class Dialect { Tree, Graph };

enum class ActionKind {
  // Tree-dialect moves and test.
  Up,
  Down,
  Chno,
  // Graph-dialect moves and tests.
  InMove,
  OutMove,
  InEdge,
  OutEdge,
  // Shared.
  Drop,
  Retrieve,
  Jump,
  Lab,
  Peb,
};

/// One operation or (possibly negated) test. Heads are 1-based.
struct Action {
  ActionKind kind = ActionKind::Lab;
  bool negated = false;
  int head = 1;
  int child = 0;        // Down, Chno
  std::string symbol;   // Lab, InMove, OutMove, InEdge, OutEdge
  std::string pebble;   // Drop, Retrieve, Peb, Jump

  bool is_test() const noexcept {
    return kind == ActionKind::Lab || kind == ActionKind::Peb || kind == ActionKind::Chno ||
           kind == ActionKind::InEdge || kind == ActionKind::OutEdge;
  }
  bool is_move() const noexcept {
    return kind == ActionKind::Up || kind == ActionKind::Down || kind == ActionKind::InMove ||
           kind == ActionKind::OutMove || kind == ActionKind::Jump;
  }
  /// The same test with the opposite polarity. Only meaningful for tests.
  Action negation() const;
  /// Text form used by the automaton file format, e.g. `down_1_2`, `!peb_1(x)`.
  std::string to_string() const;

  friend bool operator==(const Action&, const Action&) = default;
};

Action parse_action(std::string_view text);

namespace act {
Action up(int head);
Action down(int head, int child);
Action chno(int head, int child, bool negated = false);
Action lab(int head, std::string symbol, bool negated = false);
Action peb(int head, std::string pebble, bool negated = false);
Action drop(int head, std::string pebble);
Action retrieve(std::string pebble);
Action jump(int head, std::string pebble);
Action inmove(int head, std::string label);
Action outmove(int head, std::string label);
Action inedge(int head, std::string label, bool negated = false);
Action outedge(int head, std::string label, bool negated = false);
}  // namespace act

using StateId = int;

struct Instruction {
  StateId from;
  Action action;
  StateId to;
  friend bool operator==(const Instruction&, const Instruction&) = default;
};

class Automaton {
 public:
  Automaton() = default;
  Automaton(Dialect dialect, int heads) : dialect_(dialect), heads_(heads) {}

  Dialect dialect() const noexcept { return dialect_; }
  void set_dialect(Dialect d) noexcept { dialect_ = d; }
  int heads() const noexcept { return heads_; }
  void set_heads(int k) noexcept { heads_ = k; }

  /// Returns the existing id when the name is already declared.
  StateId add_state(std::string_view name);
  /// Declares a new state named `prefix`, suffixed with a counter if needed.
  StateId fresh_state(std::string_view prefix);
  std::optional<StateId> find_state(std::string_view name) const;
  std::size_t state_count() const noexcept { return states_.size(); }
  const std::string& state_name(StateId s) const { return states_.at(s); }

  void add_pebble(std::string_view name);
  const std::vector<std::string>& pebbles() const noexcept { return pebbles_; }
  std::optional<int> pebble_index(std::string_view name) const;

  void set_initial(StateId s) noexcept { initial_ = s; }
  StateId initial() const noexcept { return initial_; }
  void set_accepting(StateId s, bool accepting = true);
  bool is_accepting(StateId s) const { return accepting_.count(s) != 0; }
  const std::set<StateId>& accepting() const noexcept { return accepting_; }

  void add(StateId from, Action action, StateId to);
  /// Adds the test and its negation: one instruction for each outcome.
  void add_test(StateId from, const Action& test, StateId if_true, StateId if_false);
  const std::vector<Instruction>& instructions() const noexcept { return instructions_; }
  /// Instruction indices grouped by source state.
  std::vector<std::vector<std::size_t>> outgoing() const;

  void set_alphabet(RankedAlphabet alphabet) { alphabet_ = std::move(alphabet); }
  const std::optional<RankedAlphabet>& alphabet() const noexcept { return alphabet_; }

  /// Throws ContractError describing the first violated well-formedness condition.
  void validate() const;

  /// File format: header lines then `p , action , q` per instruction.
  std::string to_string() const;

 private:
  Dialect dialect_ = Dialect::Tree;
  int heads_ = 1;
  std::vector<std::string> states_;
  std::unordered_map<std::string, StateId> state_index_;
  std::vector<std::string> pebbles_;
  StateId initial_ = 0;
  std::set<StateId> accepting_;
  std::vector<Instruction> instructions_;
  std::optional<RankedAlphabet> alphabet_;
  std::size_t fresh_counter_ = 0;
};

Automaton parse_automaton(std::string_view text);

struct DeterminismReport {
  bool deterministic = true;
  std::vector<std::string> violations;
  explicit operator bool() const noexcept { return deterministic; }
};

/// Deterministic iff any two distinct instructions leaving the same state carry
/// complementary tests.
DeterminismReport check_deterministic(const Automaton& aut);

/// Same automaton with accepting set Q \ A. Only meaningful for automata that always
/// halt with heads at the root; the caller checks that.
Automaton complement(const Automaton& aut);

}  // namespace nestpeb
