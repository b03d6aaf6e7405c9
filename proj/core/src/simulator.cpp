#include "nestpeb/simulator.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <unordered_set>

#include "nestpeb/error.hpp"

namespace nestpeb {

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Accept: return "Accept";
    case Verdict::RejectHalt: return "RejectHalt";
    case Verdict::Diverge: return "Diverge";
    case Verdict::Reject: return "Reject";
    case Verdict::StartDependent: return "StartDependent";
    case Verdict::StepLimit: return "StepLimit";
  }
  return "?";
}

Machine::Machine(const Automaton& aut, const Structure& structure) : aut_(&aut), st_(&structure) {
  if ((aut.dialect() == Dialect::Tree) != structure.is_tree())
    throw ContractError(aut.dialect() == Dialect::Tree ? "tree automaton cannot run on a graph"
                                                       : "graph automaton cannot run on a tree");
  ops_.resize(aut.state_count());
  for (const auto& ins : aut.instructions()) {
    const Action& a = ins.action;
    Op op{a.kind, a.negated, a.head - 1, 0, ins.to};
    switch (a.kind) {
      case ActionKind::Down:
      case ActionKind::Chno: op.arg = a.child; break;
      case ActionKind::Lab: op.arg = structure.label_index(a.symbol); break;
      case ActionKind::InMove:
      case ActionKind::OutMove:
      case ActionKind::InEdge:
      case ActionKind::OutEdge: op.arg = structure.edge_label_index(a.symbol); break;
      case ActionKind::Drop:
      case ActionKind::Retrieve:
      case ActionKind::Peb:
      case ActionKind::Jump: op.arg = *aut.pebble_index(a.pebble); break;
      case ActionKind::Up: break;
    }
    ops_[ins.from].push_back(op);
  }
}

Configuration Machine::initial(std::vector<NodeId> heads, std::vector<StackEntry> stack) const {
  if (heads.size() != static_cast<std::size_t>(aut_->heads()))
    throw ContractError("expected " + std::to_string(aut_->heads()) + " head positions");
  for (NodeId h : heads)
    if (h >= st_->size()) throw ContractError("head position out of range");
  for (const auto& e : stack)
    if (e.node >= st_->size()) throw ContractError("pebble position out of range");
  return Configuration{aut_->initial(), std::move(heads), std::move(stack)};
}

Configuration Machine::initial_at(NodeId start, std::vector<StackEntry> stack) const {
  return initial(std::vector<NodeId>(static_cast<std::size_t>(aut_->heads()), start), std::move(stack));
}

std::vector<StackEntry> Machine::resolve_stack(const std::vector<std::pair<std::string, NodeId>>& stack) const {
  std::vector<StackEntry> out;
  for (const auto& [name, node] : stack) {
    auto idx = aut_->pebble_index(name);
    if (!idx) throw ContractError("unknown pebble '" + name + "'");
    if (node >= st_->size()) throw ContractError("pebble '" + name + "' placed outside the structure");
    if (std::any_of(out.begin(), out.end(), [&](const StackEntry& e) { return e.pebble == *idx; }))
      throw ContractError("pebble '" + name + "' placed twice");
    out.push_back({*idx, node});
  }
  return out;
}

namespace {

const StackEntry* find_pebble(const Configuration& c, int pebble) {
  for (const auto& e : c.stack)
    if (e.pebble == pebble) return &e;
  return nullptr;
}

}  // namespace

bool Machine::holds(const Op& op, const Configuration& c) const {
  NodeId n = c.heads[op.head];
  bool r = false;
  switch (op.kind) {
    case ActionKind::Lab: r = op.arg >= 0 && st_->label(n) == op.arg; break;
    case ActionKind::Chno: r = st_->child_number(n) == op.arg; break;
    case ActionKind::Peb: {
      const StackEntry* e = find_pebble(c, op.arg);
      r = e && e->node == n;
      break;
    }
    case ActionKind::InEdge: r = st_->in(n, op.arg) != kNoNode; break;
    case ActionKind::OutEdge: r = st_->out(n, op.arg) != kNoNode; break;
    default: break;
  }
  return r != op.negated;
}

bool Machine::apply(const Op& op, Configuration& c) const {
  NodeId& h = c.heads[op.head];
  switch (op.kind) {
    case ActionKind::Up: {
      NodeId p = st_->parent(h);
      if (p == kNoNode) return false;
      h = p;
      break;
    }
    case ActionKind::Down: {
      NodeId ch = st_->child(h, op.arg);
      if (ch == kNoNode) return false;
      h = ch;
      break;
    }
    case ActionKind::InMove: {
      NodeId m = st_->in(h, op.arg);
      if (m == kNoNode) return false;
      h = m;
      break;
    }
    case ActionKind::OutMove: {
      NodeId m = st_->out(h, op.arg);
      if (m == kNoNode) return false;
      h = m;
      break;
    }
    case ActionKind::Jump: {
      const StackEntry* e = find_pebble(c, op.arg);
      if (!e) return false;
      h = e->node;
      break;
    }
    case ActionKind::Drop:
      if (find_pebble(c, op.arg)) return false;
      c.stack.push_back({op.arg, h});
      break;
    case ActionKind::Retrieve:
      if (c.stack.empty() || c.stack.back().pebble != op.arg) return false;
      c.stack.pop_back();
      break;
    default:
      if (!holds(op, c)) return false;
      break;
  }
  c.state = op.to;
  return true;
}

std::vector<Configuration> Machine::successors(const Configuration& c) const {
  std::vector<Configuration> out;
  for (const Op& op : ops_[c.state]) {
    Configuration next = c;
    if (apply(op, next) && std::find(out.begin(), out.end(), next) == out.end()) out.push_back(std::move(next));
  }
  return out;
}

bool Machine::step(Configuration& c) const {
  // A failed move or test leaves `c` untouched, so trying in order is safe.
  for (const Op& op : ops_[c.state])
    if (apply(op, c)) return true;
  return false;
}

bool Machine::is_halting(const Configuration& c) const {
  Configuration probe = c;
  return !step(probe);
}

bool Machine::is_accepting(const Configuration& c, const std::vector<StackEntry>& expected_stack) const {
  if (!aut_->is_accepting(c.state)) return false;
  if (c.stack != expected_stack) return false;
  if (st_->is_tree())
    for (NodeId h : c.heads)
      if (h != st_->root()) return false;
  return is_halting(c);
}

std::string Machine::describe(const Configuration& c) const {
  std::ostringstream os;
  os << aut_->state_name(c.state) << " |";
  for (NodeId h : c.heads) os << ' ' << st_->node_name(h);
  os << " |";
  for (const auto& e : c.stack) os << ' ' << aut_->pebbles()[e.pebble] << '@' << st_->node_name(e.node);
  return os.str();
}

Verdict walk(const Machine& m, const Configuration& start, const std::function<bool(const Configuration&)>& visit,
             std::optional<std::uint64_t> max_steps) {
  // Brent's cycle detection: `tortoise` jumps to `hare` at powers of two.
  Configuration hare = start;
  Configuration tortoise = start;
  std::uint64_t power = 1, lam = 0, steps = 0;
  if (!visit(hare)) return Verdict::StepLimit;
  while (true) {
    if (max_steps && steps >= *max_steps) return Verdict::StepLimit;
    if (!m.step(hare)) return Verdict::RejectHalt;
    ++steps;
    if (!visit(hare)) return Verdict::StepLimit;
    ++lam;
    if (hare == tortoise) return Verdict::Diverge;
    if (lam == power) {
      tortoise = hare;
      power *= 2;
      lam = 0;
    }
  }
}

RunResult run_deterministic(const Machine& m, const Configuration& start, const RunOptions& opts) {
  RunResult res;
  Configuration last;
  std::uint64_t visited = 0;
  Verdict v = walk(
      m, start,
      [&](const Configuration& c) {
        ++visited;
        if (opts.trace) res.trace.push_back(m.describe(c));
        last = c;
        return true;
      },
      opts.max_steps);
  res.steps = visited - 1;
  if (v == Verdict::RejectHalt) {
    res.verdict = m.is_accepting(last, start.stack) ? Verdict::Accept : Verdict::RejectHalt;
    res.final_config = last;
  } else {
    res.verdict = v;
  }
  return res;
}

namespace {

std::string encode(const Configuration& c) {
  std::string key;
  key.reserve(4 + 4 * c.heads.size() + 5 * c.stack.size());
  auto put32 = [&](std::uint32_t v) {
    for (int i = 0; i < 4; ++i) key.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  };
  put32(static_cast<std::uint32_t>(c.state));
  for (NodeId h : c.heads) put32(h);
  for (const auto& e : c.stack) {
    key.push_back(static_cast<char>(e.pebble));
    put32(e.node);
  }
  return key;
}

}  // namespace

RunResult run_nondeterministic(const Machine& m, const Configuration& start, const RunOptions& opts) {
  RunResult res;
  res.verdict = Verdict::Reject;
  std::unordered_set<std::string> seen;
  std::deque<Configuration> queue;
  seen.insert(encode(start));
  queue.push_back(start);
  while (!queue.empty()) {
    Configuration c = std::move(queue.front());
    queue.pop_front();
    if (opts.trace) res.trace.push_back(m.describe(c));
    auto next = m.successors(c);
    if (next.empty() && m.is_accepting(c, start.stack)) {
      res.verdict = Verdict::Accept;
      res.final_config = c;
      return res;
    }
    for (auto& n : next) {
      if (seen.insert(encode(n)).second) queue.push_back(std::move(n));
    }
    if (opts.max_steps && ++res.steps >= *opts.max_steps) {
      res.verdict = Verdict::StepLimit;
      return res;
    }
  }
  res.steps = seen.size();
  return res;
}

RunResult run(const Automaton& aut, const Structure& structure, const RunOptions& opts) {
  if (opts.mode == RunMode::Deterministic) {
    auto report = check_deterministic(aut);
    if (!report) throw ContractError("automaton is not deterministic: " + report.violations.front());
  }
  Machine m(aut, structure);
  auto stack = m.resolve_stack(opts.initial_stack);
  auto run_from = [&](const Configuration& c) {
    return opts.mode == RunMode::Deterministic ? run_deterministic(m, c, opts) : run_nondeterministic(m, c, opts);
  };
  if (opts.heads) return run_from(m.initial(*opts.heads, stack));
  if (structure.is_tree()) return run_from(m.initial_at(structure.root(), stack));
  if (opts.start) return run_from(m.initial_at(*opts.start, stack));

  // Graphs without a start node: the verdict must not depend on where the heads begin.
  RunResult combined;
  bool any_accept = false, any_reject = false;
  for (NodeId s = 0; s < structure.size(); ++s) {
    RunResult r = run_from(m.initial_at(s, stack));
    combined.steps += r.steps;
    combined.per_start.push_back(r.verdict);
    (r.accepted() ? any_accept : any_reject) = true;
    if (s == 0) {
      combined.final_config = r.final_config;
      combined.trace = std::move(r.trace);
    }
  }
  if (any_accept && any_reject) combined.verdict = Verdict::StartDependent;
  else if (any_accept) combined.verdict = Verdict::Accept;
  else combined.verdict = opts.mode == RunMode::Deterministic ? combined.per_start.front() : Verdict::Reject;
  if (!any_accept && opts.mode == RunMode::Deterministic) {
    // Deterministic rejection: report Diverge only if every start diverged.
    bool all_diverge = std::all_of(combined.per_start.begin(), combined.per_start.end(),
                                   [](Verdict v) { return v == Verdict::Diverge; });
    combined.verdict = all_diverge ? Verdict::Diverge : Verdict::RejectHalt;
  }
  return combined;
}

}  // namespace nestpeb
