#include "nestpeb/compile.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "emitter.hpp"
#include "nestpeb/error.hpp"

namespace nestpeb {

namespace {

using Env = std::map<std::string, std::string>;  // variable -> pebble
using Pebbles = std::vector<std::string>;

std::string slot_name(int depth) { return "P" + std::to_string(depth); }

// Code generation in continuation-passing style: every fragment is given the states to
// continue in when its formula is true or false, and returns its entry state. Fragments
// start and end with all heads at the root and the stack as they found it.
struct Holder {
  Automaton owned;
};

class Builder : Holder, detail::Emitter {
 public:
  Builder(int heads, const RankedAlphabet& sigma, bool nondet)
      : Holder{Automaton(Dialect::Tree, heads)}, Emitter(owned, sigma), sigma_(sigma), heads_(heads),
        max_rank_(sigma.max_rank()), nondet_(nondet) {
    owned.set_alphabet(sigma);
    dead_ = owned.add_state("dead");
  }

  Automaton finish(const FormulaPtr& f) {
    for (const auto& v : f->free) owned.add_pebble(v);
    int max_depth = 0;
    depth_needed(f, 0, max_depth);
    for (int d = 1; d <= max_depth; ++d) owned.add_pebble(slot_name(d));
    Env env;
    for (const auto& v : f->free) env[v] = v;
    StateId acc = owned.add_state("accept");
    StateId rej = owned.add_state("reject");
    prefix = "r";
    StateId entry = compile(f, env, 0, acc, rej);
    owned.set_initial(entry);
    owned.set_accepting(acc);
    owned.validate();
    return std::move(owned);
  }

 private:
  const RankedAlphabet& sigma_;
  int heads_;
  int max_rank_;
  bool nondet_;
  StateId dead_;

  void depth_needed(const FormulaPtr& f, int depth, int& best) const {
    if (f->kind == FormulaKind::Exists || f->kind == FormulaKind::Forall) ++depth;
    if (f->kind == FormulaKind::TC) depth += (nondet_ ? 2 : 3) * f->arity();
    best = std::max(best, depth);
    for (const auto& s : f->sub) depth_needed(s, depth, best);
  }


  StateId seek(int h, const std::string& p, StateId found) { return search_pebble(h, p, found, dead_); }

  StateId heads_to(const Pebbles& ps, StateId next) {
    for (std::size_t i = ps.size(); i-- > 0;) next = seek(static_cast<int>(i) + 1, ps[i], next);
    return next;
  }

  StateId heads_at(const Pebbles& ps, StateId yes, StateId no) {
    StateId next = yes;
    for (std::size_t i = ps.size(); i-- > 0;) next = test(act::peb(static_cast<int>(i) + 1, ps[i]), next, no, "at");
    return next;
  }

  StateId drop_at_heads(const Pebbles& ps, StateId next) {
    for (std::size_t i = ps.size(); i-- > 0;) next = op(act::drop(static_cast<int>(i) + 1, ps[i]), next, "drop");
    return next;
  }

  StateId drop_all_head1(const Pebbles& ps, std::size_t from, StateId next) {
    for (std::size_t i = ps.size(); i-- > from;) next = op(act::drop(1, ps[i]), next, "drop");
    return next;
  }

  // `ps` in stack order; the top one is lifted first.
  StateId retrieve_all(const Pebbles& ps, StateId next) {
    for (const auto& p : ps) next = op(act::retrieve(p), next, "lift");
    return next;
  }

  // Lexicographic k-ary increment of the tuple marked by `z` (all dropped, head 1 at the
  // root on entry and on `next`). On `exhausted` every pebble of `z` has been lifted.
  StateId enum_next(const Pebbles& z, StateId next, StateId exhausted) {
    StateId none = exhausted;
    for (std::size_t i = 0; i < z.size(); ++i) {
      StateId redrop = to_root(1, drop_all_head1(z, i + 1, to_root(1, next)));
      StateId moved = op(act::drop(1, z[i]), redrop, "drop");
      StateId np = next_preorder(1, moved, none);
      StateId lift = op(act::retrieve(z[i]), np, "lift");
      none = seek(1, z[i], lift);
    }
    return none;
  }

  StateId pebbles_equal(const Pebbles& a, const Pebbles& b, StateId yes, StateId no) {
    StateId next = yes;
    for (std::size_t i = a.size(); i-- > 0;) {
      StateId check = test(act::peb(1, b[i]), to_root(1, next), to_root(1, no), "same");
      next = seek(1, a[i], check);
    }
    return next;
  }

  const std::string& pebble_of(const Env& env, const std::string& v) const {
    auto it = env.find(v);
    if (it == env.end()) throw ContractError("variable '" + v + "' is not bound to a pebble");
    return it->second;
  }

  StateId compile(const FormulaPtr& fp, const Env& env, int depth, StateId yes, StateId no) {
    const Formula& f = *fp;
    std::string saved_path = prefix;
    struct Restore {
      std::string& p;
      std::string v;
      ~Restore() { p = v; }
    } restore{prefix, saved_path};
    switch (f.kind) {
      case FormulaKind::True: return yes;
      case FormulaKind::False: return no;
      case FormulaKind::Not:
        prefix += ".n";
        return compile(f.sub[0], env, depth, no, yes);
      case FormulaKind::And: {
        StateId next = yes;
        for (std::size_t i = f.sub.size(); i-- > 0;) {
          prefix = saved_path + "." + std::to_string(i + 1);
          next = compile(f.sub[i], env, depth, next, no);
        }
        return next;
      }
      case FormulaKind::Or: {
        if (nondet_) {
          StateId next = no;
          for (std::size_t i = f.sub.size(); i-- > 0;) {
            prefix = saved_path + "." + std::to_string(i + 1);
            StateId branch = compile(f.sub[i], env, depth, yes, dead_);
            next = next == dead_ ? branch : choice(branch, next);
          }
          return next;
        }
        StateId next = no;
        for (std::size_t i = f.sub.size(); i-- > 0;) {
          prefix = saved_path + "." + std::to_string(i + 1);
          next = compile(f.sub[i], env, depth, yes, next);
        }
        return next;
      }
      case FormulaKind::Lab: {
        if (!sigma_.contains(f.symbol)) return no;
        prefix += ".lab";
        StateId check = test(act::lab(1, f.symbol), to_root(1, yes), to_root(1, no), "lab");
        return seek(1, pebble_of(env, f.vars[0]), check);
      }
      case FormulaKind::Eq: {
        prefix += ".eq";
        StateId check = test(act::peb(1, pebble_of(env, f.vars[1])), to_root(1, yes), to_root(1, no), "eq");
        return seek(1, pebble_of(env, f.vars[0]), check);
      }
      case FormulaKind::Edg: {
        if (f.child > max_rank_) return no;
        prefix += ".edg";
        StateId check = test(act::peb(1, pebble_of(env, f.vars[1])), to_root(1, yes), to_root(1, no), "edg");
        StateId down = op(act::down(1, f.child), check, "down");
        StateId has = if_has_child(1, f.child, down, to_root(1, no));
        return seek(1, pebble_of(env, f.vars[0]), has);
      }
      case FormulaKind::Leq: {
        prefix += ".leq";
        StateId walk = state("anc");
        StateId up = op(act::up(1), walk, "up");
        owned.add_test(walk, act::peb(1, pebble_of(env, f.vars[0])), to_root(1, yes), if_root(1, no, up));
        return seek(1, pebble_of(env, f.vars[1]), walk);
      }
      case FormulaKind::EdgeG:
        throw ContractError("edge_" + f.symbol + " atoms cannot be compiled to a tree automaton");
      case FormulaKind::Exists:
      case FormulaKind::Forall: return quantifier(f, env, depth, yes, no);
      case FormulaKind::TC:
        if (f.arity() > heads_)
          throw ContractError("transitive closure of arity " + std::to_string(f.arity()) + " needs at least that many heads");
        if (nondet_) return closure_nondet(f, env, depth, yes);
        if (!f.deterministic) throw ContractError("compile_det needs every transitive closure to be deterministic");
        return closure_det(f, env, depth, yes, no);
    }
    return no;
  }

  StateId quantifier(const Formula& f, const Env& env, int depth, StateId yes, StateId no) {
    const bool ex = f.kind == FormulaKind::Exists;
    const std::string p = slot_name(depth + 1);
    Env inner = env;
    inner[f.vars[0]] = p;
    std::string base = prefix + (ex ? ".E" : ".A") + f.vars[0];
    prefix = base;
    StateId lift_exit = op(act::retrieve(p), ex ? yes : no, "lift");
    if (nondet_ && ex) {
      // Guess the witness: at each node either drop the pebble here or move on.
      StateId walk = state("guess");
      prefix = base + ".b";
      StateId body = compile(f.sub[0], inner, depth + 1, lift_exit, dead_);
      prefix = base;
      link(walk, op(act::drop(1, p), to_root(1, body), "drop"));
      link(walk, next_preorder(1, walk, dead_));
      return walk;
    }
    StateId body_entry = state("body");
    StateId after_last = to_root(1, ex ? no : yes);
    StateId moved = op(act::drop(1, p), to_root(1, body_entry), "drop");
    StateId np = next_preorder(1, moved, after_last);
    StateId advance = seek(1, p, op(act::retrieve(p), np, "lift"));
    prefix = base + ".b";
    StateId body = ex ? compile(f.sub[0], inner, depth + 1, lift_exit, advance)
                      : compile(f.sub[0], inner, depth + 1, advance, nondet_ ? dead_ : lift_exit);
    link(body_entry, body);
    prefix = base;
    return op(act::drop(1, p), body_entry, "drop");
  }

  Env closure_env(const Env& env, const Formula& f, const Pebbles& xs, const Pebbles& ys) const {
    Env inner = env;
    const int k = f.arity();
    for (int i = 0; i < k; ++i) {
      inner[f.vars[i]] = xs[i];
      inner[f.vars[k + i]] = ys[i];
    }
    return inner;
  }

  // Deterministic closure: depth-first walk, without a stack, of the tree of tuples whose
  // body-successor chain reaches v̄, looking for ū. The current tuple is held by heads
  // 1..k; children of a tuple are its predecessors other than v̄, in lexicographic order.
  StateId closure_det(const Formula& f, const Env& env, int depth, StateId yes, StateId no) {
    const int k = f.arity();
    Pebbles s0, s1, s2, u, v;
    for (int i = 0; i < k; ++i) {
      s0.push_back(slot_name(depth + 1 + i));
      s1.push_back(slot_name(depth + 1 + k + i));
      s2.push_back(slot_name(depth + 1 + 2 * k + i));
      u.push_back(pebble_of(env, f.args[i]));
      v.push_back(pebble_of(env, f.args[k + i]));
    }
    const int body_depth = depth + 3 * k;
    const std::string base = prefix + ".tc";
    prefix = base;
    StateId visit = state("visit");
    StateId sib = state("sib");

    // First child of the current tuple c̄ (marked by s0): the least predecessor x̄' (s1).
    prefix = base + ".fc";
    StateId cand_f = state("cand");
    StateId exhausted_f = heads_to(s0, retrieve_all(s0, sib));
    StateId next_f = enum_next(s1, cand_f, exhausted_f);
    StateId found_f = heads_to(s1, retrieve_all(s1, retrieve_all(s0, visit)));
    StateId body_f = compile(f.body(), closure_env(env, f, s1, s0), body_depth, found_f, next_f);
    prefix = base + ".fc";
    link(cand_f, pebbles_equal(s1, v, next_f, body_f));
    StateId first_child = drop_at_heads(s0, gather(k, drop_all_head1(s1, 0, cand_f)));
    link(visit, heads_at(u, gather(k, yes), first_child));

    // Next sibling of c̄ (s0): find its parent ȳ' (s1), then the least predecessor z̄' (s2)
    // of ȳ' above c̄; if none, continue from the parent.
    prefix = base + ".sib";
    StateId cand_z = state("cand");
    StateId exhausted_z = heads_to(s1, retrieve_all(s1, retrieve_all(s0, sib)));
    StateId next_z = enum_next(s2, cand_z, exhausted_z);
    StateId found_z = heads_to(s2, retrieve_all(s2, retrieve_all(s1, retrieve_all(s0, visit))));
    StateId body_z = compile(f.body(), closure_env(env, f, s2, s1), body_depth, found_z, next_z);
    prefix = base + ".sib";
    link(cand_z, pebbles_equal(s2, v, next_z, body_z));
    StateId copy = next_z;
    for (int i = k; i-- > 0;) copy = seek(1, s0[i], op(act::drop(1, s2[i]), copy, "drop"));
    StateId cand_p = state("parent");
    StateId next_p = enum_next(s1, cand_p, dead_);
    StateId body_p = compile(f.body(), closure_env(env, f, s0, s1), body_depth, copy, next_p);
    prefix = base + ".sib";
    link(cand_p, body_p);
    StateId sib_work = drop_at_heads(s0, gather(k, drop_all_head1(s1, 0, cand_p)));
    link(sib, heads_at(v, gather(k, no), sib_work));

    prefix = base;
    return heads_to(v, visit);
  }

  // Nondeterministic closure: from ū, repeatedly either stop (if at v̄) or guess a
  // successor ȳ' and verify the body on (current, ȳ').
  StateId closure_nondet(const Formula& f, const Env& env, int depth, StateId yes) {
    const int k = f.arity();
    Pebbles s0, s1, u, v;
    for (int i = 0; i < k; ++i) {
      s0.push_back(slot_name(depth + 1 + i));
      s1.push_back(slot_name(depth + 1 + k + i));
      u.push_back(pebble_of(env, f.args[i]));
      v.push_back(pebble_of(env, f.args[k + i]));
    }
    const std::string base = prefix + ".ntc";
    prefix = base;
    StateId loop = state("loop");
    StateId moved = heads_to(s1, retrieve_all(s1, retrieve_all(s0, loop)));
    StateId body = compile(f.body(), closure_env(env, f, s0, s1), depth + 2 * k, moved, dead_);
    prefix = base;
    StateId next = to_root(1, body);
    for (int i = k; i-- > 0;) {
      StateId guess = state("guess");
      link(guess, op(act::drop(1, s1[i]), to_root(1, next), "drop"));
      link(guess, next_preorder(1, guess, dead_));
      next = guess;
    }
    StateId step = drop_at_heads(s0, gather(k, next));
    StateId stop = heads_at(v, gather(k, yes), dead_);
    link(loop, stop);
    link(loop, step);
    return heads_to(u, loop);
  }
};

int budget(const FormulaPtr& f, int per_tc) {
  std::function<int(const FormulaPtr&)> go = [&](const FormulaPtr& g) {
    int best = 0;
    for (const auto& s : g->sub) best = std::max(best, go(s));
    if (g->kind == FormulaKind::Exists || g->kind == FormulaKind::Forall) best += 1;
    if (g->kind == FormulaKind::TC) best += per_tc * g->arity();
    return best;
  };
  return static_cast<int>(f->free.size()) + go(f);
}

}  // namespace

Automaton compile_det(const FormulaPtr& f, int heads, const RankedAlphabet& alphabet) {
  if (heads < 1) throw ContractError("at least one head is needed");
  return Builder(heads, alphabet, false).finish(f);
}

Automaton compile_nondet(const FormulaPtr& f, int heads, const RankedAlphabet& alphabet) {
  if (heads < 1) throw ContractError("at least one head is needed");
  if (!check_positive(f)) throw ContractError("compile_nondet needs a positive formula");
  return Builder(heads, alphabet, true).finish(nnf(f));
}

int pebble_budget(const FormulaPtr& f) { return budget(f, 3); }
int pebble_budget_nondet(const FormulaPtr& f) { return budget(f, 2); }

}  // namespace nestpeb
