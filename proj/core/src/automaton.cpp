#include "nestpeb/automaton.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "nestpeb/error.hpp"

namespace nestpeb {

Action Action::negation() const {
  Action a = *this;
  a.negated = !negated;
  return a;
}

std::string Action::to_string() const {
  std::string h = std::to_string(head);
  std::string out = negated ? "!" : "";
  switch (kind) {
    case ActionKind::Up: return out + "up_" + h;
    case ActionKind::Down: return out + "down_" + h + "_" + std::to_string(child);
    case ActionKind::Chno: return out + "chno_" + h + "_" + std::to_string(child);
    case ActionKind::InMove: return out + "inmove_" + h + "_" + symbol;
    case ActionKind::OutMove: return out + "outmove_" + h + "_" + symbol;
    case ActionKind::InEdge: return out + "inedge_" + h + "_" + symbol;
    case ActionKind::OutEdge: return out + "outedge_" + h + "_" + symbol;
    case ActionKind::Drop: return out + "drop_" + h + "(" + pebble + ")";
    case ActionKind::Retrieve: return out + "retrieve(" + pebble + ")";
    case ActionKind::Jump: return out + "jump_" + h + "(" + pebble + ")";
    case ActionKind::Lab: return out + "lab_" + h + "_" + symbol;
    case ActionKind::Peb: return out + "peb_" + h + "(" + pebble + ")";
  }
  return out;
}

namespace act {
Action up(int head) { return Action{ActionKind::Up, false, head, 0, {}, {}}; }
Action down(int head, int child) { return Action{ActionKind::Down, false, head, child, {}, {}}; }
Action chno(int head, int child, bool negated) { return Action{ActionKind::Chno, negated, head, child, {}, {}}; }
Action lab(int head, std::string symbol, bool negated) {
  return Action{ActionKind::Lab, negated, head, 0, std::move(symbol), {}};
}
Action peb(int head, std::string pebble, bool negated) {
  return Action{ActionKind::Peb, negated, head, 0, {}, std::move(pebble)};
}
Action drop(int head, std::string pebble) { return Action{ActionKind::Drop, false, head, 0, {}, std::move(pebble)}; }
Action retrieve(std::string pebble) { return Action{ActionKind::Retrieve, false, 1, 0, {}, std::move(pebble)}; }
Action jump(int head, std::string pebble) { return Action{ActionKind::Jump, false, head, 0, {}, std::move(pebble)}; }
Action inmove(int head, std::string label) { return Action{ActionKind::InMove, false, head, 0, std::move(label), {}}; }
Action outmove(int head, std::string label) {
  return Action{ActionKind::OutMove, false, head, 0, std::move(label), {}};
}
Action inedge(int head, std::string label, bool negated) {
  return Action{ActionKind::InEdge, negated, head, 0, std::move(label), {}};
}
Action outedge(int head, std::string label, bool negated) {
  return Action{ActionKind::OutEdge, negated, head, 0, std::move(label), {}};
}
}  // namespace act

namespace {

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

int to_int(std::string_view s, std::string_view whole) {
  if (!all_digits(s)) throw ParseError("expected a number in action '" + std::string(whole) + "'", 0);
  return std::stoi(std::string(s));
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Action parse_action(std::string_view raw) {
  std::string_view text = trim(raw);
  Action a;
  if (!text.empty() && text.front() == '!') {
    a.negated = true;
    text.remove_prefix(1);
  }
  auto fail = [&](const std::string& why) -> Action { throw ParseError(why + ": '" + std::string(raw) + "'", 0); };

  // Pebble forms: name_head(pebble) or retrieve(pebble).
  if (auto open = text.find('('); open != std::string_view::npos) {
    if (text.back() != ')') return fail("missing ')'");
    std::string pebble(trim(text.substr(open + 1, text.size() - open - 2)));
    if (pebble.empty()) return fail("empty pebble name");
    std::string_view head_part = text.substr(0, open);
    a.pebble = pebble;
    if (head_part == "retrieve") {
      a.kind = ActionKind::Retrieve;
      a.head = 1;
    } else {
      auto us = head_part.find('_');
      if (us == std::string_view::npos) return fail("expected <op>_<head>(pebble)");
      std::string_view op = head_part.substr(0, us);
      a.head = to_int(head_part.substr(us + 1), raw);
      if (op == "drop") a.kind = ActionKind::Drop;
      else if (op == "peb") a.kind = ActionKind::Peb;
      else if (op == "jump") a.kind = ActionKind::Jump;
      else return fail("unknown pebble operation");
    }
    if (a.negated && a.kind != ActionKind::Peb) return fail("only tests can be negated");
    return a;
  }

  auto us1 = text.find('_');
  if (us1 == std::string_view::npos) return fail("unknown action");
  std::string_view op = text.substr(0, us1);
  std::string_view rest = text.substr(us1 + 1);
  auto us2 = rest.find('_');
  std::string_view head_s = us2 == std::string_view::npos ? rest : rest.substr(0, us2);
  std::string_view arg = us2 == std::string_view::npos ? std::string_view{} : rest.substr(us2 + 1);
  a.head = to_int(head_s, raw);

  if (op == "up") {
    if (!arg.empty()) return fail("up takes only a head");
    a.kind = ActionKind::Up;
  } else if (op == "down" || op == "chno") {
    a.kind = op == "down" ? ActionKind::Down : ActionKind::Chno;
    a.child = to_int(arg, raw);
  } else if (op == "lab" || op == "inmove" || op == "outmove" || op == "inedge" || op == "outedge") {
    if (arg.empty()) return fail("missing label");
    a.symbol = std::string(arg);
    if (op == "lab") a.kind = ActionKind::Lab;
    else if (op == "inmove") a.kind = ActionKind::InMove;
    else if (op == "outmove") a.kind = ActionKind::OutMove;
    else if (op == "inedge") a.kind = ActionKind::InEdge;
    else a.kind = ActionKind::OutEdge;
  } else {
    return fail("unknown action");
  }
  if (a.negated && !a.is_test()) return fail("only tests can be negated");
  return a;
}

StateId Automaton::add_state(std::string_view name) {
  auto it = state_index_.find(std::string(name));
  if (it != state_index_.end()) return it->second;
  StateId id = static_cast<StateId>(states_.size());
  states_.emplace_back(name);
  state_index_.emplace(std::string(name), id);
  return id;
}

StateId Automaton::fresh_state(std::string_view prefix) {
  std::string name(prefix);
  if (!state_index_.count(name)) return add_state(name);
  for (;;) {
    std::string candidate = name + "." + std::to_string(++fresh_counter_);
    if (!state_index_.count(candidate)) return add_state(candidate);
  }
}

std::optional<StateId> Automaton::find_state(std::string_view name) const {
  auto it = state_index_.find(std::string(name));
  if (it == state_index_.end()) return std::nullopt;
  return it->second;
}

void Automaton::add_pebble(std::string_view name) {
  if (!pebble_index(name)) pebbles_.emplace_back(name);
}

std::optional<int> Automaton::pebble_index(std::string_view name) const {
  for (std::size_t i = 0; i < pebbles_.size(); ++i)
    if (pebbles_[i] == name) return static_cast<int>(i);
  return std::nullopt;
}

void Automaton::set_accepting(StateId s, bool accepting) {
  if (accepting) accepting_.insert(s);
  else accepting_.erase(s);
}

void Automaton::add(StateId from, Action action, StateId to) { instructions_.push_back({from, std::move(action), to}); }

void Automaton::add_test(StateId from, const Action& test, StateId if_true, StateId if_false) {
  Action pos = test;
  pos.negated = false;
  add(from, pos, if_true);
  add(from, pos.negation(), if_false);
}

std::vector<std::vector<std::size_t>> Automaton::outgoing() const {
  std::vector<std::vector<std::size_t>> out(states_.size());
  for (std::size_t i = 0; i < instructions_.size(); ++i) out[instructions_[i].from].push_back(i);
  return out;
}

void Automaton::validate() const {
  if (heads_ < 1) throw ContractError("automaton needs at least one head");
  if (states_.empty()) throw ContractError("automaton has no states");
  if (initial_ < 0 || static_cast<std::size_t>(initial_) >= states_.size())
    throw ContractError("initial state is not declared");
  for (StateId s : accepting_)
    if (s < 0 || static_cast<std::size_t>(s) >= states_.size()) throw ContractError("accepting state not declared");
  const int max_child = alphabet_ ? alphabet_->max_rank() : -1;
  for (const auto& ins : instructions_) {
    const Action& a = ins.action;
    auto where = [&] { return " in instruction " + states_[ins.from] + " , " + a.to_string() + " , " + states_[ins.to]; };
    if (a.head < 1 || a.head > heads_) throw ContractError("head index out of range" + where());
    if (a.negated && !a.is_test()) throw ContractError("negation of an operation" + where());
    bool tree_only = a.kind == ActionKind::Up || a.kind == ActionKind::Down || a.kind == ActionKind::Chno;
    bool graph_only = a.kind == ActionKind::InMove || a.kind == ActionKind::OutMove || a.kind == ActionKind::InEdge ||
                      a.kind == ActionKind::OutEdge;
    if (tree_only && dialect_ != Dialect::Tree) throw ContractError("tree-dialect action in a graph automaton" + where());
    if (graph_only && dialect_ != Dialect::Graph) throw ContractError("graph-dialect action in a tree automaton" + where());
    if (a.kind == ActionKind::Down || a.kind == ActionKind::Chno) {
      if (a.child < 1) throw ContractError("child number must be at least 1" + where());
      if (max_child >= 0 && a.child > max_child) throw ContractError("child number exceeds the alphabet's maximal rank" + where());
    }
    if (!a.pebble.empty() && !pebble_index(a.pebble)) throw ContractError("undeclared pebble" + where());
    bool needs_pebble = a.kind == ActionKind::Drop || a.kind == ActionKind::Retrieve || a.kind == ActionKind::Peb ||
                        a.kind == ActionKind::Jump;
    if (needs_pebble && a.pebble.empty()) throw ContractError("missing pebble" + where());
    if (a.kind == ActionKind::Lab && alphabet_ && !alphabet_->contains(a.symbol))
      throw ContractError("label not in the alphabet" + where());
  }
}

std::string Automaton::to_string() const {
  std::ostringstream os;
  os << "heads: " << heads_ << '\n';
  os << "dialect: " << (dialect_ == Dialect::Tree ? "tree" : "graph") << '\n';
  if (alphabet_) os << "alphabet: " << alphabet_->to_string() << '\n';
  os << "pebbles:";
  for (const auto& p : pebbles_) os << ' ' << p;
  os << '\n';
  os << "initial: " << states_.at(initial_) << '\n';
  os << "accepting:";
  for (StateId s : accepting_) os << ' ' << states_[s];
  os << '\n';
  for (const auto& ins : instructions_)
    os << states_[ins.from] << " , " << ins.action.to_string() << " , " << states_[ins.to] << '\n';
  return os.str();
}

Automaton parse_automaton(std::string_view text) {
  Automaton aut;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t offset = 0;
  std::optional<std::string> initial;
  std::vector<std::string> accepting;
  std::optional<Dialect> dialect;
  bool saw_tree_action = false, saw_graph_action = false, pebbles_header = false;
  auto split_ws = [](std::string_view s) {
    std::vector<std::string> out;
    std::istringstream is{std::string(s)};
    std::string w;
    while (is >> w) out.push_back(w);
    return out;
  };
  while (std::getline(in, line)) {
    std::size_t line_offset = offset;
    offset += line.size() + 1;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::string_view l = trim(line);
    if (l.empty()) continue;
    auto colon = l.find(':');
    auto comma = l.find(',');
    // Instructions always contain commas, so a state name may itself contain ':'.
    if (colon != std::string_view::npos && comma == std::string_view::npos) {
      std::string key(trim(l.substr(0, colon)));
      std::string_view value = trim(l.substr(colon + 1));
      if (key == "heads") {
        if (!all_digits(value)) throw ParseError("heads must be a positive integer", line_offset);
        aut.set_heads(std::stoi(std::string(value)));
      } else if (key == "pebbles") {
        pebbles_header = true;
        for (const auto& p : split_ws(value)) aut.add_pebble(p);
      } else if (key == "initial") {
        auto names = split_ws(value);
        if (names.size() != 1) throw ParseError("expected exactly one initial state", line_offset);
        initial = names[0];
      } else if (key == "accepting") {
        for (const auto& s : split_ws(value)) accepting.push_back(s);
      } else if (key == "alphabet") {
        aut.set_alphabet(parse_alphabet(value));
      } else if (key == "dialect") {
        if (value == "tree") dialect = Dialect::Tree;
        else if (value == "graph") dialect = Dialect::Graph;
        else throw ParseError("dialect must be 'tree' or 'graph'", line_offset);
      } else {
        throw ParseError("unknown header '" + key + "'", line_offset);
      }
      continue;
    }
    // Instruction: p , action , q
    auto c1 = l.find(',');
    auto c2 = c1 == std::string_view::npos ? c1 : l.find(',', c1 + 1);
    if (c1 == std::string_view::npos || c2 == std::string_view::npos || l.find(',', c2 + 1) != std::string_view::npos)
      throw ParseError("expected 'state , action , state'", line_offset);
    std::string from(trim(l.substr(0, c1)));
    std::string action_text(trim(l.substr(c1 + 1, c2 - c1 - 1)));
    std::string to(trim(l.substr(c2 + 1)));
    if (from.empty() || to.empty()) throw ParseError("empty state name", line_offset);
    Action a;
    try {
      a = parse_action(action_text);
    } catch (const ParseError& e) {
      throw ParseError(e.what(), line_offset + (l.data() - line.data()) + c1 + 1);
    }
    if (a.kind == ActionKind::Up || a.kind == ActionKind::Down || a.kind == ActionKind::Chno) saw_tree_action = true;
    if (a.kind == ActionKind::InMove || a.kind == ActionKind::OutMove || a.kind == ActionKind::InEdge ||
        a.kind == ActionKind::OutEdge)
      saw_graph_action = true;
    // Without a pebbles header the pebbles are declared by use.
    if (!a.pebble.empty() && !pebbles_header) aut.add_pebble(a.pebble);
    StateId f = aut.add_state(from);
    StateId t = aut.add_state(to);
    aut.add(f, std::move(a), t);
  }
  if (saw_tree_action && saw_graph_action) throw ParseError("automaton mixes tree and graph dialect actions", 0);
  if (!dialect) dialect = saw_graph_action ? Dialect::Graph : Dialect::Tree;
  aut.set_dialect(*dialect);
  if (!initial) throw ParseError("missing 'initial:' header", 0);
  aut.set_initial(aut.add_state(*initial));
  for (const auto& s : accepting) aut.set_accepting(aut.add_state(s));
  try {
    aut.validate();
  } catch (const ContractError& e) {
    throw ParseError(e.what(), 0);
  }
  return aut;
}

DeterminismReport check_deterministic(const Automaton& aut) {
  DeterminismReport report;
  auto out = aut.outgoing();
  for (std::size_t s = 0; s < out.size(); ++s) {
    // Distinct instructions only: exact duplicates are the same instruction.
    std::vector<const Instruction*> uniq;
    for (std::size_t idx : out[s]) {
      const Instruction* ins = &aut.instructions()[idx];
      if (std::none_of(uniq.begin(), uniq.end(), [&](const Instruction* u) { return *u == *ins; })) uniq.push_back(ins);
    }
    for (std::size_t i = 0; i < uniq.size(); ++i) {
      for (std::size_t j = i + 1; j < uniq.size(); ++j) {
        const Action& a = uniq[i]->action;
        const Action& b = uniq[j]->action;
        if (a.is_test() && a.negation() == b) continue;
        report.deterministic = false;
        report.violations.push_back("state " + aut.state_name(static_cast<StateId>(s)) + ": '" + a.to_string() +
                                    "' and '" + b.to_string() + "' are not complementary");
      }
    }
  }
  return report;
}

Automaton complement(const Automaton& aut) {
  Automaton c = aut;
  for (std::size_t s = 0; s < aut.state_count(); ++s)
    c.set_accepting(static_cast<StateId>(s), !aut.is_accepting(static_cast<StateId>(s)));
  return c;
}

}  // namespace nestpeb
