#include "nestpeb/normalize.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "emitter.hpp"
#include "nestpeb/error.hpp"

namespace nestpeb {

std::vector<StateId> LeveledAutomaton::states_at(int l) const {
  std::vector<StateId> out;
  for (std::size_t s = 0; s < level.size(); ++s)
    if (level[s] == l) out.push_back(static_cast<StateId>(s));
  return out;
}

namespace {

std::string canonical(std::size_t depth) { return "c" + std::to_string(depth); }

using Word = std::vector<int>;  // pebble indices of the original automaton, bottom first

struct Pending {
  StateId from;
  Action action;
  StateId to;
};

class Normalizer {
 public:
  Normalizer(const Automaton& aut, const RankedAlphabet& sigma)
      : src_(aut), out_(aut.dialect(), aut.heads()), em_(out_, sigma), n_(static_cast<int>(aut.pebbles().size())) {
    if (aut.alphabet()) out_.set_alphabet(*aut.alphabet());
    for (int d = 1; d <= n_; ++d) out_.add_pebble(canonical(d));
  }

  LeveledAutomaton run() {
    const bool det = check_deterministic(src_).deterministic;
    StateId init = get(src_.initial(), {});
    auto outgoing = src_.outgoing();
    while (!queue_.empty()) {
      auto [q, w] = queue_.front();
      queue_.pop_front();
      StateId self = ids_.at({q, w});
      for (std::size_t i : outgoing[q]) translate(self, w, src_.instructions()[i]);
    }
    std::vector<std::vector<Pending>> by_state(out_.state_count());
    for (auto& p : pending_) by_state[p.from].push_back(p);

    final_ = out_.add_state("accept");
    dead_ = out_.add_state("dead");
    em_.prefix = "halt";
    StateId at_root = out_.dialect() == Dialect::Tree ? em_.if_all_root(out_.heads(), final_, dead_) : final_;
    for (auto& [key, id] : ids_) {
      if (!key.second.empty() || !src_.is_accepting(key.first)) continue;
      det ? halt_check_det(id, by_state[id], at_root) : halt_check(id, by_state[id], at_root);
    }

    // A drop may not lead straight into a retrieve: route it through a test that holds.
    std::vector<bool> retrieves(out_.state_count(), false);
    for (const auto& list : by_state)
      for (const auto& p : list)
        if (p.action.kind == ActionKind::Retrieve) retrieves[p.from] = true;
    for (auto& list : by_state)
      for (auto& p : list) {
        if (p.action.kind != ActionKind::Drop || !retrieves[p.to]) continue;
        StateId mid = out_.fresh_state(out_.state_name(p.to) + "^");
        level_for(mid, level_of(p.to));
        out_.add(mid, act::peb(p.action.head, p.action.pebble), p.to);
        p.to = mid;
      }
    for (const auto& list : by_state)
      for (const auto& p : list) out_.add(p.from, p.action, p.to);

    out_.set_initial(init);
    out_.set_accepting(final_);
    LeveledAutomaton result;
    result.pebbles = n_;
    result.accepting = final_;
    result.level.assign(out_.state_count(), n_);
    for (auto [s, l] : levels_) result.level[s] = l;
    result.automaton = std::move(out_);
    result.automaton.validate();
    return result;
  }

 private:
  const Automaton& src_;
  Automaton out_;
  detail::Emitter em_;
  int n_;
  std::map<std::pair<StateId, Word>, StateId> ids_;
  std::deque<std::pair<StateId, Word>> queue_;
  std::vector<Pending> pending_;
  std::map<StateId, int> levels_;
  StateId final_ = 0, dead_ = 0;

  void level_for(StateId s, int l) { levels_[s] = l; }
  int level_of(StateId s) const {
    auto it = levels_.find(s);
    return it == levels_.end() ? n_ : it->second;
  }

  StateId get(StateId q, const Word& w) {
    auto it = ids_.find({q, w});
    if (it != ids_.end()) return it->second;
    std::string name = src_.state_name(q);
    if (!w.empty()) {
      name += "[";
      for (std::size_t i = 0; i < w.size(); ++i) name += (i ? "," : "") + src_.pebbles()[w[i]];
      name += "]";
    }
    StateId id = out_.fresh_state(name);
    ids_.emplace(std::make_pair(q, w), id);
    level_for(id, n_ - static_cast<int>(w.size()));
    queue_.emplace_back(q, w);
    return id;
  }

  std::optional<std::size_t> depth_of(const Word& w, const std::string& pebble) const {
    int idx = *src_.pebble_index(pebble);
    auto it = std::find(w.begin(), w.end(), idx);
    if (it == w.end()) return std::nullopt;
    return static_cast<std::size_t>(it - w.begin()) + 1;
  }

  void emit(StateId from, Action a, StateId to) { pending_.push_back({from, std::move(a), to}); }

  void translate(StateId self, const Word& w, const Instruction& ins) {
    const Action& a = ins.action;
    switch (a.kind) {
      case ActionKind::Drop: {
        if (depth_of(w, a.pebble)) return;
        Word next = w;
        next.push_back(*src_.pebble_index(a.pebble));
        emit(self, act::drop(a.head, canonical(next.size())), get(ins.to, next));
        return;
      }
      case ActionKind::Retrieve: {
        if (w.empty() || w.back() != *src_.pebble_index(a.pebble)) return;
        Word next(w.begin(), w.end() - 1);
        emit(self, act::retrieve(canonical(w.size())), get(ins.to, next));
        return;
      }
      case ActionKind::Peb: {
        auto d = depth_of(w, a.pebble);
        StateId to = get(ins.to, w);
        if (d) {
          emit(self, act::peb(a.head, canonical(*d), a.negated), to);
        } else if (a.negated) {
          // The pebble is not placed, so the negated test always holds.
          Action yes = act::lab(1, em_.alphabet().symbols().front().name);
          emit(self, yes, to);
          emit(self, yes.negation(), to);
        }
        return;
      }
      case ActionKind::Jump: {
        auto d = depth_of(w, a.pebble);
        if (d) emit(self, act::jump(a.head, canonical(*d)), get(ins.to, w));
        return;
      }
      default: emit(self, a, get(ins.to, w));
    }
  }

  // Entry state of a check that `a` cannot be applied; `applies` otherwise.
  StateId inapplicable(const Action& a, StateId next, StateId applies) {
    switch (a.kind) {
      case ActionKind::Up: return em_.if_root(a.head, next, applies);
      case ActionKind::Down: return em_.if_has_child(a.head, a.child, applies, next);
      case ActionKind::InMove: return em_.test(act::inedge(a.head, a.symbol), applies, next);
      case ActionKind::OutMove: return em_.test(act::outedge(a.head, a.symbol), applies, next);
      case ActionKind::Retrieve:
      case ActionKind::Jump: return next;  // no pebble is placed in these states
      default: return em_.test(a, applies, next);
    }
  }

  void halt_check(StateId q, const std::vector<Pending>& list, StateId at_root) {
    if (std::any_of(list.begin(), list.end(), [](const Pending& p) { return p.action.kind == ActionKind::Drop; }))
      return;
    StateId next = at_root;
    for (auto it = list.rbegin(); it != list.rend(); ++it) next = inapplicable(it->action, next, dead_);
    em_.link(q, next);
  }

  // Keeps the automaton deterministic: a lone move or test gets its failure branch.
  void halt_check_det(StateId q, std::vector<Pending>& list, StateId at_root) {
    if (list.empty()) {
      em_.link(q, at_root);
      return;
    }
    if (list.size() != 1) return;
    Pending& p = list[0];
    const Action& a = p.action;
    if (a.kind == ActionKind::Drop) return;
    if (a.is_test()) {
      emit_now(q, a.negation(), at_root);
      return;
    }
    StateId guarded = em_.op(a, p.to, "move");
    StateId check = inapplicable(a, at_root, guarded);
    list.clear();
    em_.link(q, check);
  }

  void emit_now(StateId from, const Action& a, StateId to) { out_.add(from, a, to); }
};

}  // namespace

LeveledAutomaton normalize(const Automaton& aut, const std::optional<RankedAlphabet>& alphabet) {
  aut.validate();
  std::optional<RankedAlphabet> sigma = alphabet ? alphabet : aut.alphabet();
  if (!sigma) {
    if (aut.dialect() == Dialect::Tree) throw ContractError("normalizing a tree automaton needs its alphabet");
    sigma = RankedAlphabet({{"o", 0}});
  }
  Normalizer norm(aut, *sigma);
  return norm.run();
}

}  // namespace nestpeb
