#include "nestpeb/guides.hpp"

#include <sstream>

#include "nestpeb/error.hpp"

namespace nestpeb {

namespace {

Automaton grid_guide() {
  Automaton a(Dialect::Graph, 1);
  StateId left = a.add_state("left");
  StateId top = a.add_state("top");
  StateId row = a.add_state("row");
  StateId back = a.add_state("back");
  StateId next = a.add_state("next");
  StateId end = a.add_state("end");
  StateId l = a.add_state("left'"), t = a.add_state("top'"), r = a.add_state("row'"), b = a.add_state("back'"),
          n = a.add_state("next'");
  a.add_test(left, act::inedge(1, "h"), l, top);
  a.add(l, act::inmove(1, "h"), left);
  a.add_test(top, act::inedge(1, "v"), t, row);
  a.add(t, act::inmove(1, "v"), top);
  a.add_test(row, act::outedge(1, "h"), r, back);
  a.add(r, act::outmove(1, "h"), row);
  a.add_test(back, act::inedge(1, "h"), b, next);
  a.add(b, act::inmove(1, "h"), back);
  a.add_test(next, act::outedge(1, "v"), n, end);
  a.add(n, act::outmove(1, "v"), row);
  a.set_initial(left);
  a.set_accepting(end);
  return a;
}

Automaton torus_guide() {
  Automaton a(Dialect::Graph, 1);
  a.add_pebble("o");
  a.add_pebble("r");
  StateId start = a.add_state("start");
  StateId row = a.add_state("row");
  StateId walk = a.add_state("walk");
  StateId at = a.add_state("at");
  StateId lift = a.add_state("lift");
  StateId down = a.add_state("down");
  StateId home = a.add_state("home");
  StateId finish = a.add_state("finish");
  StateId end = a.add_state("end");
  a.add(start, act::drop(1, "o"), row);
  a.add(row, act::drop(1, "r"), walk);
  a.add(walk, act::outmove(1, "h"), at);
  a.add_test(at, act::peb(1, "r"), lift, walk);
  a.add(lift, act::retrieve("r"), down);
  a.add(down, act::outmove(1, "v"), home);
  a.add_test(home, act::peb(1, "o"), finish, row);
  a.add(finish, act::retrieve("o"), end);
  a.set_initial(start);
  a.set_accepting(end);
  return a;
}

// Depth-first walk along the out-edges "1" and "2" below the node holding pebble x.
// Single in-edges make the way back unique. A walk that moves down onto x either backs
// off again or leaves for `on_cycle`.
struct Dfs {
  StateId explore;  // entry, head at the node holding x
  StateId done;     // every node below has been walked, head back at x
};

Dfs bracelet_dfs(Automaton& a, const std::string& tag, bool back_off, StateId on_cycle) {
  auto s = [&](const std::string& role) { return a.add_state(tag + "." + role); };
  Dfs d{s("explore"), s("done")};
  StateId climb = s("climb");
  // After the second child the walk climbs on.
  StateId after[3] = {0, s("after1"), climb};
  StateId arrive[3] = {0, s("arrive1"), s("arrive2")};
  StateId next_child = s("second");
  StateId leaf_or_2 = s("try2");

  StateId down1 = s("down1"), down2 = s("down2");
  a.add(down1, act::outmove(1, "1"), arrive[1]);
  a.add(down2, act::outmove(1, "2"), arrive[2]);
  a.add_test(d.explore, act::outedge(1, "1"), down1, leaf_or_2);
  a.add_test(leaf_or_2, act::outedge(1, "2"), down2, climb);

  for (int j = 1; j <= 2; ++j) {
    StateId target = on_cycle;
    if (back_off) {
      target = s("backoff" + std::to_string(j));
      a.add(target, act::inmove(1, std::to_string(j)), after[j]);
    }
    a.add_test(arrive[j], act::peb(1, "x"), target, d.explore);
  }
  a.add_test(after[1], act::outedge(1, "2"), next_child, climb);
  a.add(next_child, act::outmove(1, "2"), arrive[2]);

  StateId up1 = s("up1"), up2 = s("up2"), which = s("which");
  a.add(up1, act::inmove(1, "1"), after[1]);
  a.add(up2, act::inmove(1, "2"), after[2]);
  a.add_test(climb, act::peb(1, "x"), d.done, which);
  a.add_test(which, act::inedge(1, "1"), up1, up2);
  return d;
}

Automaton bracelet_guide() {
  Automaton a(Dialect::Graph, 1);
  a.add_pebble("x");
  StateId start = a.add_state("start");
  StateId cover_entry = a.add_state("cover");
  Dfs probe = bracelet_dfs(a, "probe", false, cover_entry);
  Dfs cover = bracelet_dfs(a, "walk", true, cover_entry);
  a.add(start, act::drop(1, "x"), probe.explore);
  a.add_test(cover_entry, act::peb(1, "x"), cover.explore, cover.explore);

  // Not on the cycle: move the pebble to the parent and probe again.
  StateId which = a.add_state("parent");
  StateId up1 = a.add_state("parent1"), up2 = a.add_state("parent2");
  StateId redrop = a.add_state("redrop");
  a.add(probe.done, act::retrieve("x"), which);
  a.add_test(which, act::inedge(1, "1"), up1, up2);
  a.add(up1, act::inmove(1, "1"), redrop);
  a.add(up2, act::inmove(1, "2"), redrop);
  a.add(redrop, act::drop(1, "x"), probe.explore);

  StateId end = a.add_state("end");
  a.add(cover.done, act::retrieve("x"), end);
  a.set_initial(start);
  a.set_accepting(end);
  return a;
}

}  // namespace

Automaton make_guide(Family family) {
  switch (family) {
    case Family::Grid: return grid_guide();
    case Family::Torus: return torus_guide();
    case Family::Bracelet: return bracelet_guide();
  }
  throw ContractError("unknown family");
}

bool GuideReport::ok() const {
  for (const auto& r : runs)
    if (!r.halted || !r.stack_empty || r.covered != nodes) return false;
  return !runs.empty();
}

std::string GuideReport::failure() const {
  for (const auto& r : runs) {
    if (r.halted && r.stack_empty && r.covered == nodes) continue;
    std::ostringstream os;
    os << "start " << r.start << ": ";
    if (!r.halted) os << verdict_name(r.verdict);
    else if (!r.stack_empty) os << "pebbles left on the graph";
    else os << "covered " << r.covered << "/" << nodes;
    return os.str();
  }
  return runs.empty() ? "no start nodes" : "";
}

namespace {

void require_guide(const Automaton& guide) {
  if (guide.dialect() != Dialect::Graph || guide.heads() != 1)
    throw ContractError("a guide is a single-head graph automaton");
  if (!check_deterministic(guide)) throw ContractError("a guide must be deterministic");
}

GuideRun run_guide(const Machine& m, NodeId start, std::optional<std::uint64_t> max_steps) {
  GuideRun r;
  r.start = start;
  std::vector<bool> seen(m.structure().size(), false);
  Configuration last;
  Verdict v = walk(
      m, m.initial_at(start),
      [&](const Configuration& c) {
        NodeId h = c.heads[0];
        if (!seen[h]) {
          seen[h] = true;
          r.first_visits.push_back(h);
        }
        last = c;
        return true;
      },
      max_steps);
  r.verdict = v;
  r.halted = v == Verdict::RejectHalt;
  r.stack_empty = r.halted && last.stack.empty();
  r.covered = r.first_visits.size();
  return r;
}

}  // namespace

GuideReport check_guide(const Automaton& guide, const Graph& g, std::optional<std::uint64_t> max_steps) {
  require_guide(guide);
  Structure st = Structure::from_graph(g);
  Machine m(guide, st);
  GuideReport report;
  report.nodes = g.size();
  for (NodeId s = 0; s < g.size(); ++s) report.runs.push_back(run_guide(m, s, max_steps));
  return report;
}

std::vector<NodeId> first_visit_order(const Graph& g, const Automaton& guide, NodeId origin) {
  require_guide(guide);
  if (origin >= g.size()) throw ContractError("origin is not a node of the graph");
  Structure st = Structure::from_graph(g);
  Machine m(guide, st);
  GuideRun r = run_guide(m, origin, std::nullopt);
  if (!r.halted) throw ContractError("the guide does not halt from node " + g.name(origin));
  if (r.covered != g.size()) throw ContractError("the guide misses nodes from " + g.name(origin));
  return r.first_visits;
}

std::optional<NodeId> successor_via_origin(const Graph& g, const Automaton& guide, NodeId origin, NodeId marked) {
  require_guide(guide);
  if (origin >= g.size() || marked >= g.size()) throw ContractError("origin and marked node must be nodes of the graph");
  Structure st = Structure::from_graph(g);
  Machine m(guide, st);
  const Configuration reset = m.initial_at(origin);

  // The configuration in which a fresh copy from the origin first stands on `node`.
  auto first_arrival = [&](NodeId node) {
    std::optional<Configuration> found;
    walk(m, reset, [&](const Configuration& c) {
      if (c.heads[0] != node) return true;
      found = c;
      return false;
    });
    return found;
  };

  bool passed = false;
  std::optional<NodeId> result;
  Verdict v = walk(m, reset, [&](const Configuration& cur) {
    if (!passed) {
      passed = cur.heads[0] == marked;
      return true;
    }
    auto first = first_arrival(cur.heads[0]);
    if (first && *first == cur && cur.heads[0] != marked) {
      result = cur.heads[0];
      return false;
    }
    return true;
  });
  if (v == Verdict::Diverge) throw ContractError("the guide does not halt from the origin");
  return result;
}

}  // namespace nestpeb
