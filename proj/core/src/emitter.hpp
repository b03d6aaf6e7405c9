#pragma once

// Internal helpers that append small deterministic tree-walking routines to an automaton.
// Every routine returns its entry state; the continuation states are passed in.

#include <algorithm>
#include <string>

#include "nestpeb/automaton.hpp"

namespace nestpeb::detail {

class Emitter {
 public:
  Emitter(Automaton& aut, const RankedAlphabet& sigma) : aut_(aut), sigma_(sigma), max_rank_(sigma.max_rank()) {
    sym0_ = sigma.symbols().front().name;
  }

  Automaton& automaton() noexcept { return aut_; }
  const RankedAlphabet& alphabet() const noexcept { return sigma_; }
  int max_rank() const noexcept { return max_rank_; }

  /// Prefix for generated state names.
  std::string prefix;

  StateId state(const std::string& role) { return aut_.fresh_state(prefix + ":" + role); }

  /// Always-true step: the complementary pair lab_1_σ / !lab_1_σ with one target.
  void link(StateId from, StateId to) { aut_.add_test(from, act::lab(1, sym0_), to, to); }

  StateId op(Action a, StateId to, const std::string& role = "op") {
    StateId s = state(role);
    aut_.add(s, std::move(a), to);
    return s;
  }

  StateId test(const Action& a, StateId yes, StateId no, const std::string& role = "test") {
    StateId s = state(role);
    aut_.add_test(s, a, yes, no);
    return s;
  }

  StateId choice(StateId a, StateId b) {
    StateId s = state("choose");
    link(s, a);
    link(s, b);
    return s;
  }

  StateId to_root(int h, StateId next) {
    if (max_rank_ == 0) return next;
    StateId loop = state("root" + std::to_string(h));
    StateId up = op(act::up(h), loop, "up");
    StateId cur = loop;
    for (int j = 1; j <= max_rank_; ++j) {
      StateId no = j == max_rank_ ? next : state("root" + std::to_string(h));
      aut_.add_test(cur, act::chno(h, j), up, no);
      cur = no;
    }
    return loop;
  }

  StateId if_root(int h, StateId yes, StateId no) {
    if (max_rank_ == 0) return yes;
    StateId entry = state("isroot");
    StateId cur = entry;
    for (int j = 1; j <= max_rank_; ++j) {
      StateId next = j == max_rank_ ? yes : state("isroot");
      aut_.add_test(cur, act::chno(h, j), no, next);
      cur = next;
    }
    return entry;
  }

  StateId if_all_root(int heads, StateId yes, StateId no) {
    for (int h = heads; h >= 1; --h) yes = if_root(h, yes, no);
    return yes;
  }

  /// Branches on whether the node under head h has a j-th child, by its label's rank.
  StateId if_has_child(int h, int j, StateId yes, StateId no) {
    const auto& syms = sigma_.symbols();
    auto result = [&](const Symbol& s) { return s.rank >= j ? yes : no; };
    if (std::all_of(syms.begin(), syms.end(), [&](const Symbol& s) { return result(s) == result(syms[0]); }))
      return result(syms[0]);
    StateId next = result(syms.back());
    for (std::size_t i = syms.size() - 1; i-- > 0;)
      next = test(act::lab(h, syms[i].name), result(syms[i]), next, "rank");
    return next;
  }

  /// Moves head h to its preorder successor; after the last node continues in `none`
  /// with the head back at the root.
  StateId next_preorder(int h, StateId found, StateId none) {
    if (max_rank_ == 0) return none;
    StateId climb = state("climb");
    StateId cur = climb;
    for (int j = 1; j <= max_rank_; ++j) {
      StateId after_up = climb;
      if (j < max_rank_) after_up = if_has_child(h, j + 1, op(act::down(h, j + 1), found, "down"), climb);
      StateId up = op(act::up(h), after_up, "up");
      StateId next = j == max_rank_ ? none : state("climb");
      aut_.add_test(cur, act::chno(h, j), up, next);
      cur = next;
    }
    return if_has_child(h, 1, op(act::down(h, 1), found, "down"), climb);
  }

  /// Preorder search from the root for pebble p; `missing` if it is not on the tree.
  StateId search_pebble(int h, const std::string& p, StateId found, StateId missing) {
    StateId seek = state("seek");
    StateId advance = next_preorder(h, seek, missing);
    aut_.add_test(seek, act::peb(h, p), found, advance);
    return to_root(h, seek);
  }

  StateId gather(int k, StateId next) {
    for (int h = k; h >= 1; --h) next = to_root(h, next);
    return next;
  }

 private:
  Automaton& aut_;
  const RankedAlphabet& sigma_;
  int max_rank_;
  std::string sym0_;
};

}  // namespace nestpeb::detail
