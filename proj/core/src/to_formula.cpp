#include "nestpeb/to_formula.hpp"

#include <map>

#include "nestpeb/error.hpp"

namespace nestpeb {

namespace {

std::string pebble_var(std::size_t depth) { return "p" + std::to_string(depth); }

std::size_t canonical_depth(const std::string& pebble) { return std::stoul(pebble.substr(1)); }

// Unmoved heads keep their position.
FormulaPtr frame(const StepMatrix& m, int moved) {
  std::vector<FormulaPtr> parts;
  for (int h = 0; h < m.k; ++h)
    if (h != moved) parts.push_back(fo::eq(m.xs[h], m.ys[h]));
  return fo::conj(std::move(parts));
}

FormulaPtr step_formula(const Action& a, const StepMatrix& m, const RankedAlphabet& sigma) {
  const int h = a.head - 1;
  const std::string& x = m.xs[h];
  const std::string& y = m.ys[h];
  const FormulaPtr all = frame(m, -1);
  auto tested = [&](FormulaPtr t) { return simp::conj({std::move(t), all}); };
  switch (a.kind) {
    case ActionKind::Up: {
      std::vector<FormulaPtr> parents;
      for (int j = 1; j <= sigma.max_rank(); ++j) parents.push_back(fo::edg(j, y, x));
      return simp::conj({simp::disj(std::move(parents)), frame(m, h)});
    }
    case ActionKind::Down:
      if (a.child > sigma.max_rank()) return fo::bottom();
      return simp::conj({fo::edg(a.child, x, y), frame(m, h)});
    case ActionKind::InMove: return simp::conj({fo::edge(a.symbol, y, x), frame(m, h)});
    case ActionKind::OutMove: return simp::conj({fo::edge(a.symbol, x, y), frame(m, h)});
    case ActionKind::Jump: return simp::conj({fo::eq(y, pebble_var(canonical_depth(a.pebble))), frame(m, h)});
    case ActionKind::Lab: return tested(a.negated ? fo::neg(fo::lab(a.symbol, x)) : fo::lab(a.symbol, x));
    case ActionKind::Peb: {
      FormulaPtr at = fo::eq(x, pebble_var(canonical_depth(a.pebble)));
      return tested(a.negated ? fo::neg(at) : at);
    }
    case ActionKind::Chno: {
      if (a.child > sigma.max_rank()) return a.negated ? all : fo::bottom();
      FormulaPtr e = fo::edg(a.child, "w", x);
      return tested(a.negated ? fo::forall("w", fo::neg(e)) : fo::exists("w", e));
    }
    case ActionKind::InEdge:
    case ActionKind::OutEdge: {
      FormulaPtr e = a.kind == ActionKind::InEdge ? fo::edge(a.symbol, "w", x) : fo::edge(a.symbol, x, "w");
      return tested(a.negated ? fo::forall("w", fo::neg(e)) : fo::exists("w", e));
    }
    case ActionKind::Drop:
    case ActionKind::Retrieve: break;
  }
  throw ContractError("drop and retrieve do not stay within a level");
}

}  // namespace

StepMatrix level_matrix(const LeveledAutomaton& la, int level, const StepMatrix* closure_below,
                        const RankedAlphabet& alphabet) {
  const Automaton& aut = la.automaton;
  const auto states = la.states_at(level);
  std::map<StateId, std::size_t> index;
  std::vector<std::string> names;
  for (StateId s : states) {
    index[s] = names.size();
    names.push_back(aut.state_name(s));
  }
  StepMatrix m = StepMatrix::empty(names, aut.heads());
  std::vector<std::vector<std::vector<FormulaPtr>>> parts(states.size(), std::vector<std::vector<FormulaPtr>>(states.size()));

  std::map<StateId, std::size_t> below;
  if (level > 0) {
    const auto lower = la.states_at(level - 1);
    for (std::size_t i = 0; i < lower.size(); ++i) below[lower[i]] = i;
  }
  std::vector<const Instruction*> retrieves;
  for (const auto& ins : aut.instructions())
    if (ins.action.kind == ActionKind::Retrieve && index.count(ins.to) && below.count(ins.from)) retrieves.push_back(&ins);

  const std::size_t depth = static_cast<std::size_t>(la.pebbles - level);
  for (const auto& ins : aut.instructions()) {
    auto from = index.find(ins.from);
    if (from == index.end()) continue;
    if (ins.action.kind == ActionKind::Retrieve) continue;
    if (ins.action.kind == ActionKind::Drop) {
      if (!closure_below) throw ContractError("macro step without the closure of the level below");
      // Pebble p_{d+1} sits where the dropping head is; the level below runs until a retrieve.
      const std::string p = pebble_var(depth + 1);
      const FormulaPtr placed = fo::eq(p, m.xs[ins.action.head - 1]);
      for (const Instruction* r : retrieves) {
        const FormulaPtr& run = closure_below->at(below.at(ins.to), below.at(r->from));
        FormulaPtr macro = simp::exists({p}, simp::conj({placed, run}));
        parts[from->second][index.at(r->to)].push_back(macro);
      }
      continue;
    }
    parts[from->second][index.at(ins.to)].push_back(step_formula(ins.action, m, alphabet));
  }
  for (std::size_t p = 0; p < states.size(); ++p)
    for (std::size_t q = 0; q < states.size(); ++q) m.at(p, q) = simp::disj(std::move(parts[p][q]));
  return m;
}

FormulaPtr to_formula(const Automaton& aut, const ToFormulaOptions& opts) {
  std::optional<RankedAlphabet> sigma = opts.alphabet ? opts.alphabet : aut.alphabet();
  if (!sigma) {
    if (aut.dialect() == Dialect::Tree) throw ContractError("translating a tree automaton needs its alphabet");
    sigma = RankedAlphabet({{"o", 0}});
  }
  const LeveledAutomaton la = normalize(aut, sigma);
  // Order entries name original or normalized states.
  for (const auto& name : opts.order)
    if (!aut.find_state(name) && !la.automaton.find_state(name))
      throw ContractError("elimination order names unknown state '" + name + "'");
  const bool det = check_deterministic(la.automaton).deterministic;

  StepMatrix closed;
  for (int level = 0; level <= la.pebbles; ++level) {
    StepMatrix step = level_matrix(la, level, level > 0 ? &closed : nullptr, *sigma);
    std::vector<std::size_t> order;
    for (const auto& name : opts.order)
      for (std::size_t i = 0; i < step.states.size(); ++i)
        if (step.states[i] == name || step.states[i].rfind(name + "[", 0) == 0) order.push_back(i);
    closed = computation_closure(step, det, order);
  }

  const auto top = la.states_at(la.pebbles);
  std::size_t q0 = 0, qf = 0;
  for (std::size_t i = 0; i < top.size(); ++i) {
    if (top[i] == la.automaton.initial()) q0 = i;
    if (top[i] == la.accepting) qf = i;
  }
  const FormulaPtr& run = closed.at(q0, qf);
  const int k = aut.heads();
  if (aut.dialect() == Dialect::Tree) {
    std::vector<FormulaPtr> no_parent;
    for (int j = 1; j <= sigma->max_rank(); ++j) no_parent.push_back(fo::neg(fo::edg(j, "z", "r")));
    FormulaPtr root = simp::forall({"z"}, fo::conj(std::move(no_parent)));
    std::vector<std::string> rs(k, "r");
    FormulaPtr at_root = simp::conj({fo::tuple_eq(closed.xs, rs), fo::tuple_eq(closed.ys, rs), run});
    std::vector<std::string> heads = closed.xs;
    heads.insert(heads.end(), closed.ys.begin(), closed.ys.end());
    return simp::exists({"r"}, simp::conj({root, simp::exists(heads, at_root)}));
  }
  std::vector<std::string> os(k, "o");
  FormulaPtr from_start = simp::exists(closed.xs, simp::conj({fo::tuple_eq(closed.xs, os), run}));
  return simp::forall({"o"}, simp::exists(closed.ys, from_start));
}

}  // namespace nestpeb
