#include "nestpeb/harness.hpp"

#include <chrono>
#include <cstdlib>
#include <set>
#include <sstream>

#include "nestpeb/error.hpp"

namespace nestpeb {

namespace {

// All ways to write `total` as an ordered sum of `parts` positive sizes.
void compositions(std::size_t total, int parts, std::vector<std::size_t>& cur,
                  const std::function<void(const std::vector<std::size_t>&)>& out) {
  if (parts == 0) {
    if (total == 0) out(cur);
    return;
  }
  for (std::size_t first = 1; first + static_cast<std::size_t>(parts - 1) <= total; ++first) {
    cur.push_back(first);
    compositions(total - first, parts - 1, cur, out);
    cur.pop_back();
  }
}

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string verdict_text(bool b) { return b ? "true" : "false"; }

}  // namespace

std::vector<Tree> enumerate_trees(const RankedAlphabet& alphabet, std::size_t max_nodes) {
  std::vector<std::vector<Tree>> by_size(max_nodes + 1);
  for (std::size_t n = 1; n <= max_nodes; ++n) {
    for (const auto& sym : alphabet.symbols()) {
      if (sym.rank == 0) {
        if (n == 1) by_size[1].push_back(Tree::make(sym.name, {}));
        continue;
      }
      std::vector<std::size_t> cur;
      compositions(n - 1, sym.rank, cur, [&](const std::vector<std::size_t>& sizes) {
        // Odometer over the child choices, last child fastest.
        std::vector<std::size_t> pick(sizes.size(), 0);
        for (std::size_t s : sizes)
          if (by_size[s].empty()) return;
        while (true) {
          std::vector<Tree> children;
          for (std::size_t i = 0; i < sizes.size(); ++i) children.push_back(by_size[sizes[i]][pick[i]]);
          by_size[n].push_back(Tree::make(sym.name, children));
          std::size_t i = sizes.size();
          while (i > 0) {
            --i;
            if (++pick[i] < by_size[sizes[i]].size()) break;
            pick[i] = 0;
            if (i == 0) return;
          }
        }
      });
    }
  }
  std::vector<Tree> all;
  for (auto& v : by_size)
    for (auto& t : v) all.push_back(std::move(t));
  return all;
}

std::uint64_t count_trees(const RankedAlphabet& alphabet, std::size_t nodes) {
  std::vector<std::uint64_t> c(nodes + 1, 0);
  for (std::size_t n = 1; n <= nodes; ++n) {
    for (const auto& sym : alphabet.symbols()) {
      // ways[m]: ordered tuples of `rank` trees with m nodes in total
      std::vector<std::uint64_t> ways(n, 0);
      ways[0] = 1;
      for (int r = 0; r < sym.rank; ++r) {
        std::vector<std::uint64_t> next(n, 0);
        for (std::size_t m = 0; m < n; ++m)
          for (std::size_t s = 1; m + s < n; ++s) next[m + s] += ways[m] * c[s];
        ways = std::move(next);
      }
      c[n] += ways[n - 1];
    }
  }
  return c[nodes];
}

std::optional<Language> parse_language(std::string_view name) {
  if (name == "allLeavesA") return Language::AllLeavesA;
  if (name == "T_evenBranching" || name == "evenBranching") return Language::EvenBranching;
  if (name == "anbn") return Language::AnBn;
  return std::nullopt;
}

std::string_view language_name(Language l) {
  switch (l) {
    case Language::AllLeavesA: return "allLeavesA";
    case Language::EvenBranching: return "T_evenBranching";
    case Language::AnBn: return "anbn";
  }
  return "?";
}

bool oracle(Language language, const Tree& t) {
  const std::size_t n = t.size();
  auto is_a_leaf = [&](NodeId v) { return t.node(v).children.empty() && t.label(v) == "a"; };
  switch (language) {
    case Language::AllLeavesA:
      for (NodeId v = 0; v < n; ++v)
        if (t.node(v).children.empty() && t.label(v) != "a") return false;
      return true;
    case Language::EvenBranching: {
      // Children follow their parents in preorder, so a reverse sweep sees subtrees first.
      std::vector<bool> has_a(n, false);
      for (NodeId v = static_cast<NodeId>(n); v-- > 0;) {
        has_a[v] = is_a_leaf(v);
        for (NodeId c : t.node(v).children) has_a[v] = has_a[v] || has_a[c];
      }
      auto branching = [&](NodeId v) {
        const auto& ch = t.node(v).children;
        return t.label(v) == "c" && ch.size() >= 2 && has_a[ch[0]] && has_a[ch[1]];
      };
      for (NodeId v = 0; v < n; ++v) {
        if (!is_a_leaf(v)) continue;
        int count = 0;
        for (NodeId u = t.parent(v); u != kNoNode; u = t.parent(u)) count += branching(u) ? 1 : 0;
        if (count % 2 != 0) return false;
      }
      return true;
    }
    case Language::AnBn: {
      auto word = decode_string(t);
      if (!word) throw ContractError("anbn is defined on monadic trees only");
      const std::size_t len = word->size();
      if (len % 2 != 0) return false;
      for (std::size_t i = 0; i < len; ++i)
        if ((*word)[i] != (i < len / 2 ? "a" : "b")) return false;
      return true;
    }
  }
  return false;
}

void EquivalenceReport::record(bool same, const std::function<Counterexample()>& describe) {
  ++instances;
  if (same) {
    ++agreements;
  } else if (!counterexample) {
    counterexample = describe();
  }
}

std::string EquivalenceReport::summary() const {
  std::ostringstream os;
  os << "instances " << instances << " agreements " << agreements;
  if (truncated) os << " (truncated by the valuation budget)";
  if (counterexample) {
    os << "\ncounterexample " << counterexample->structure;
    for (const auto& [v, node] : counterexample->valuation) os << ' ' << v << '=' << node;
    os << ": expected " << counterexample->expected << ", got " << counterexample->actual;
  }
  return os.str();
}

std::uint64_t valuation_budget() {
  if (const char* env = std::getenv("NESTPEB_VALUATION_BUDGET")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
  }
  return 1000000;
}

EquivalenceReport equiv_formula_automaton(const FormulaPtr& phi, const Automaton& aut, const std::vector<Tree>& trees,
                                          const EquivOptions& opts) {
  const auto t0 = Clock::now();
  const bool det = opts.mode == RunMode::Deterministic;
  if (det && !check_deterministic(aut)) throw ContractError("deterministic mode needs a deterministic automaton");
  const std::uint64_t budget = opts.budget ? opts.budget : valuation_budget();
  const auto& vars = phi->free;
  EquivalenceReport rep;
  for (const auto& t : trees) {
    Structure st = Structure::from_tree(t);
    Evaluator ev(st, opts.eval);
    Machine m(aut, st);
    const std::size_t n = st.size();
    std::vector<NodeId> pick(vars.size(), 0);
    while (true) {
      if (rep.instances >= budget) {
        rep.truncated = true;
        rep.seconds = since(t0);
        return rep;
      }
      Valuation val;
      std::vector<std::pair<std::string, NodeId>> stack;
      for (std::size_t i = 0; i < vars.size(); ++i) {
        val[vars[i]] = pick[i];
        stack.emplace_back(vars[i], pick[i]);
      }
      const bool expected = ev.eval(phi, val);
      Configuration start = m.initial(std::vector<NodeId>(aut.heads(), 0), m.resolve_stack(stack));
      RunResult r = det ? run_deterministic(m, start) : run_nondeterministic(m, start);
      ++rep.verdicts[r.verdict];
      rep.record(expected == r.accepted(), [&] {
        return Counterexample{t.to_string(), val, verdict_text(expected), std::string(verdict_name(r.verdict))};
      });
      std::size_t i = vars.size();
      while (i > 0 && ++pick[i - 1] == n) pick[--i] = 0;
      if (i == 0) break;
    }
  }
  rep.seconds = since(t0);
  return rep;
}

EquivalenceReport equiv_formula_oracle(const FormulaPtr& phi, const std::vector<Tree>& trees,
                                       const std::function<bool(const Tree&)>& member) {
  if (!phi->free.empty()) throw ContractError("the formula must be closed");
  const auto t0 = Clock::now();
  EquivalenceReport rep;
  for (const auto& t : trees) {
    Structure st = Structure::from_tree(t);
    const bool expected = member(t);
    const bool got = eval(phi, st);
    rep.record(expected == got, [&] { return Counterexample{t.to_string(), {}, verdict_text(expected), verdict_text(got)}; });
  }
  rep.seconds = since(t0);
  return rep;
}

EquivalenceReport equiv_automaton_oracle(const Automaton& aut, const std::vector<Tree>& trees,
                                         const std::function<bool(const Tree&)>& member, RunMode mode) {
  const auto t0 = Clock::now();
  EquivalenceReport rep;
  RunOptions ro;
  ro.mode = mode;
  for (const auto& t : trees) {
    Structure st = Structure::from_tree(t);
    const bool expected = member(t);
    RunResult r = run(aut, st, ro);
    ++rep.verdicts[r.verdict];
    rep.record(expected == r.accepted(), [&] {
      return Counterexample{t.to_string(), {}, verdict_text(expected), std::string(verdict_name(r.verdict))};
    });
  }
  rep.seconds = since(t0);
  return rep;
}

namespace {

int uniform(std::mt19937& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

FormulaPtr frame(const StepMatrix& m, int moved) {
  std::vector<FormulaPtr> parts;
  for (int h = 0; h < m.k; ++h)
    if (h != moved) parts.push_back(fo::eq(m.xs[h], m.ys[h]));
  return fo::conj(std::move(parts));
}

FormulaPtr random_move(std::mt19937& rng, const StepMatrix& m, int max_rank) {
  const int h = uniform(rng, 0, m.k - 1);
  switch (uniform(rng, 0, 2)) {
    case 0: return fo::tuple_eq(m.xs, m.ys);
    case 1: {
      std::vector<FormulaPtr> parents;
      for (int j = 1; j <= max_rank; ++j) parents.push_back(fo::edg(j, m.ys[h], m.xs[h]));
      return fo::conj(fo::disj(std::move(parents)), frame(m, h));
    }
    default: return fo::conj(fo::edg(uniform(rng, 1, std::max(1, max_rank)), m.xs[h], m.ys[h]), frame(m, h));
  }
}

FormulaPtr random_guard(std::mt19937& rng, const StepMatrix& m, int max_rank) {
  const int h = uniform(rng, 0, m.k - 1);
  switch (uniform(rng, 0, m.k > 1 ? 2 : 1)) {
    case 0: return fo::exists("w", fo::edg(uniform(rng, 1, std::max(1, max_rank)), m.xs[h], "w"));
    case 1: return fo::lab("a", m.xs[h]);
    default: return fo::eq(m.xs[0], m.xs[1]);
  }
}

}  // namespace

StepMatrix random_det_matrix(std::mt19937& rng, std::size_t states, int k, int max_rank) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < states; ++i) names.push_back(std::to_string(i + 1));
  StepMatrix m = StepMatrix::empty(names, k);
  auto target = [&] { return static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(states) - 1)); };
  for (std::size_t p = 0; p < states; ++p) {
    switch (uniform(rng, 0, 3)) {
      case 0: break;  // final
      case 1: m.at(p, target()) = random_move(rng, m, max_rank); break;
      default: {
        FormulaPtr g = random_guard(rng, m, max_rank);
        std::size_t q1 = target(), q2 = target();
        FormulaPtr yes = fo::conj(g, random_move(rng, m, max_rank));
        FormulaPtr no = fo::conj(fo::neg(g), random_move(rng, m, max_rank));
        if (q1 == q2) {
          m.at(p, q1) = fo::disj(yes, no);
        } else {
          m.at(p, q1) = yes;
          m.at(p, q2) = no;
        }
      }
    }
  }
  return m;
}

SemiDeterminismReport check_semi_deterministic(const StepMatrix& step, const StepMatrix& closure, const Tree& tree) {
  Structure st = Structure::from_tree(tree);
  Evaluator ev(st);
  const std::size_t n = st.size();
  const int k = closure.k;
  std::size_t tuples = 1;
  for (int i = 0; i < k; ++i) tuples *= n;
  auto assign = [&](Valuation& val, const std::vector<std::string>& vars, std::size_t idx) {
    for (int i = k; i-- > 0;) {
      val[vars[i]] = static_cast<NodeId>(idx % n);
      idx /= n;
    }
  };
  SemiDeterminismReport rep;
  for (std::size_t p = 0; p < closure.size(); ++p) {
    for (std::size_t u = 0; u < tuples; ++u) {
      ++rep.checked;
      std::vector<std::pair<std::size_t, std::size_t>> hits;
      for (std::size_t q = 0; q < closure.size(); ++q) {
        if (!step.is_final(q)) continue;
        for (std::size_t v = 0; v < tuples; ++v) {
          Valuation val;
          assign(val, closure.xs, u);
          assign(val, closure.ys, v);
          if (ev.eval(closure.at(p, q), val)) hits.emplace_back(q, v);
        }
      }
      if (hits.size() > 1) {
        ++rep.violations;
        if (rep.first.empty()) {
          std::ostringstream os;
          os << tree.to_string() << ": from state " << closure.states[p] << " tuple #" << u << " reaches "
             << closure.states[hits[0].first] << " #" << hits[0].second << " and " << closure.states[hits[1].first]
             << " #" << hits[1].second;
          rep.first = os.str();
        }
      }
    }
  }
  return rep;
}

Automaton random_det_automaton(std::mt19937& rng, const RankedAlphabet& alphabet, int states, int pebbles) {
  Automaton aut(Dialect::Tree, 1);
  aut.set_alphabet(alphabet);
  std::vector<std::string> ps;
  for (int i = 1; i <= pebbles; ++i) {
    ps.push_back("x" + std::to_string(i));
    aut.add_pebble(ps.back());
  }
  for (int i = 0; i < states; ++i) aut.add_state("q" + std::to_string(i));
  const int max_rank = alphabet.max_rank();
  auto target = [&] { return uniform(rng, 0, states - 1); };
  for (StateId s = 0; s < states; ++s) {
    if (uniform(rng, 0, 9) < 4) aut.set_accepting(s);
    const int kind = uniform(rng, 0, 9);
    if (kind < 2) continue;  // halting
    if (kind < 6) {
      std::vector<Action> ops{act::up(1)};
      for (int j = 1; j <= max_rank; ++j) ops.push_back(act::down(1, j));
      for (const auto& p : ps) {
        ops.push_back(act::drop(1, p));
        ops.push_back(act::retrieve(p));
      }
      aut.add(s, ops[uniform(rng, 0, static_cast<int>(ops.size()) - 1)], target());
      continue;
    }
    std::vector<Action> tests;
    for (const auto& sym : alphabet.symbols()) tests.push_back(act::lab(1, sym.name));
    for (int j = 1; j <= max_rank; ++j) tests.push_back(act::chno(1, j));
    for (const auto& p : ps) tests.push_back(act::peb(1, p));
    aut.add_test(s, tests[uniform(rng, 0, static_cast<int>(tests.size()) - 1)], target(), target());
  }
  aut.set_initial(0);
  return aut;
}

}  // namespace nestpeb
