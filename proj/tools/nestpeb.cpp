#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "nestpeb/compile.hpp"
#include "nestpeb/eval.hpp"
#include "nestpeb/examples.hpp"
#include "nestpeb/formula_parser.hpp"
#include "nestpeb/guides.hpp"
#include "nestpeb/harness.hpp"
#include "nestpeb/simulator.hpp"
#include "nestpeb/to_formula.hpp"

using namespace nestpeb;
using json = nlohmann::json;

namespace {

constexpr int kUsage = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
}

// Structure input shared by run and eval.
struct Input {
  std::string term, term_file, graph_file;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--term", term, "Tree in term syntax, e.g. c(a,b)");
    cmd->add_option("--term-file", term_file, "File holding one term");
    cmd->add_option("--graph", graph_file, "Graph file: node and edge lines");
  }

  std::optional<Tree> tree;
  std::optional<Graph> graph;
  std::optional<Structure> st;

  const Structure& load(const std::optional<RankedAlphabet>& sigma) {
    const int given = !term.empty() + !term_file.empty() + !graph_file.empty();
    if (given != 1) throw CLI::ValidationError("exactly one of --term, --term-file, --graph is required");
    if (!graph_file.empty()) {
      graph = parse_graph(read_file(graph_file));
      if (auto bad = validate_graph(*graph); !bad.empty()) throw Error("invalid graph: " + bad.front().message);
      st = Structure::from_graph(*graph);
    } else {
      std::string text = term.empty() ? read_file(term_file) : term;
      tree = sigma ? parse_term(text, *sigma) : parse_term(text);
      st = Structure::from_tree(*tree);
    }
    return *st;
  }

  NodeId node(const std::string& s) const {
    if (graph) {
      if (auto n = graph->find(s)) return *n;
      throw Error("no node named '" + s + "'");
    }
    std::size_t pos = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(s, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != s.size() || v >= st->size()) throw Error("'" + s + "' is not a node (preorder index) of the tree");
    return static_cast<NodeId>(v);
  }

  std::string name(NodeId n) const { return st->node_name(n); }
};

std::pair<std::string, std::string> split_assignment(const std::string& s) {
  auto eq = s.find('=');
  if (eq == std::string::npos || eq == 0) throw Error("expected var=node, got '" + s + "'");
  return {s.substr(0, eq), s.substr(eq + 1)};
}

std::optional<RankedAlphabet> alphabet_from(const std::string& inline_text, const std::string& file) {
  if (!inline_text.empty()) return parse_alphabet(inline_text);
  if (!file.empty()) return parse_alphabet(read_file(file));
  return std::nullopt;
}

FormulaPtr load_formula(const std::string& file, const std::string& text) {
  if (!file.empty() && !text.empty()) throw CLI::ValidationError("give --formula or --formula-text, not both");
  if (file.empty() && text.empty()) throw CLI::ValidationError("--formula or --formula-text is required");
  return parse_formula(file.empty() ? text : read_file(file));
}

std::string stats_block(const FormulaPtr& f) {
  const FormulaStats s = formula_stats(f);
  std::ostringstream os;
  os << "# dag_size " << s.dag_size << "\n# tree_size " << s.tree_size << "\n# tc_depth " << s.tc_depth
     << "\n# tc_count " << s.tc_count << "\n# max_tc_arity " << s.max_tc_arity << "\n# deterministic "
     << (s.all_tc_deterministic ? "yes" : "no") << "\n# positive " << (check_positive(f) ? "yes" : "no") << "\n";
  return os.str();
}

json report_json(const EquivalenceReport& r) {
  json j{{"instances", r.instances}, {"agreements", r.agreements}, {"truncated", r.truncated}, {"seconds", r.seconds}};
  json verdicts = json::object();
  for (auto [v, n] : r.verdicts) verdicts[std::string(verdict_name(v))] = n;
  j["verdicts"] = verdicts;
  if (r.counterexample) {
    json val = json::object();
    for (const auto& [v, n] : r.counterexample->valuation) val[v] = n;
    j["counterexample"] = {{"structure", r.counterexample->structure},
                           {"valuation", val},
                           {"expected", r.counterexample->expected},
                           {"actual", r.counterexample->actual}};
  }
  return j;
}

std::optional<Family> family_of(const std::string& s) {
  if (s.empty()) return std::nullopt;
  auto f = parse_family(s);
  if (!f) throw CLI::ValidationError("unknown family '" + s + "' (grid, torus, bracelet)");
  return f;
}

RankedAlphabet shape_alphabet() { return RankedAlphabet({{"l", 0}, {"n", 2}}); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pebble tree-walking automata and transitive-closure logic"};
  app.require_subcommand(1);
  app.fallthrough();
  bool as_json = false;
  app.add_flag("--json", as_json, "Machine-readable summary");

  // run
  auto* run_cmd = app.add_subcommand("run", "Run an automaton on a tree or graph");
  std::string aut_file, mode = "auto";
  Input run_in;
  run_in.add_to(run_cmd);
  std::vector<std::string> pebbles;
  std::string start;
  bool trace = false;
  std::uint64_t max_steps = 0;
  run_cmd->add_option("--aut", aut_file, "Automaton file")->required();
  run_cmd->add_option("--mode", mode, "auto, det or nondet")->check(CLI::IsMember({"auto", "det", "nondet"}));
  run_cmd->add_option("--pebble", pebbles, "Pre-placed pebble x=node, bottom first");
  run_cmd->add_option("--start", start, "Graph start node (default: every node)");
  run_cmd->add_flag("--trace", trace, "Print every configuration");
  run_cmd->add_option("--max-steps", max_steps, "Step limit (0: none)");

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a formula on a tree or graph");
  std::string formula_file, formula_text;
  Input eval_in;
  eval_in.add_to(eval_cmd);
  std::vector<std::string> vals;
  bool no_check = false;
  eval_cmd->add_option("--formula", formula_file, "Formula file");
  eval_cmd->add_option("--formula-text", formula_text, "Formula text");
  eval_cmd->add_option("--val", vals, "Free variable x=node");
  eval_cmd->add_flag("--no-functionality-check", no_check, "Trust dtc bodies to be functional");

  // f2a
  auto* f2a_cmd = app.add_subcommand("f2a", "Compile a formula to a pebble automaton");
  std::string alphabet_text, alphabet_file, out_file;
  int heads = 1;
  bool nondet = false;
  f2a_cmd->add_option("--formula", formula_file, "Formula file");
  f2a_cmd->add_option("--formula-text", formula_text, "Formula text");
  f2a_cmd->add_option("--alphabet", alphabet_text, "Alphabet, e.g. \"a:0 b:0 c:2\"");
  f2a_cmd->add_option("--alphabet-file", alphabet_file, "Alphabet file");
  f2a_cmd->add_option("--heads", heads, "Number of heads")->check(CLI::PositiveNumber);
  f2a_cmd->add_flag("--nondet", nondet, "Guess closure steps (positive formulas)");
  f2a_cmd->add_option("-o,--output", out_file, "Output file (default: stdout)");

  // a2f
  auto* a2f_cmd = app.add_subcommand("a2f", "Translate an automaton to a formula");
  std::string order;
  a2f_cmd->add_option("--aut", aut_file, "Automaton file")->required();
  a2f_cmd->add_option("--alphabet", alphabet_text, "Alphabet when the automaton has none");
  a2f_cmd->add_option("--alphabet-file", alphabet_file, "Alphabet file");
  a2f_cmd->add_option("--order", order, "Comma-separated states of the normal form to eliminate first");
  a2f_cmd->add_option("-o,--output", out_file, "Output file (default: stdout)");

  // equiv
  auto* equiv_cmd = app.add_subcommand("equiv", "Compare a formula and an automaton on all small trees");
  std::size_t bound = 5;
  std::uint64_t budget = 0;
  equiv_cmd->add_option("--formula", formula_file, "Formula file");
  equiv_cmd->add_option("--formula-text", formula_text, "Formula text");
  equiv_cmd->add_option("--aut", aut_file, "Automaton file")->required();
  equiv_cmd->add_option("--bound", bound, "Maximal number of nodes")->check(CLI::PositiveNumber);
  equiv_cmd->add_option("--alphabet", alphabet_text, "Alphabet (default: the automaton's)");
  equiv_cmd->add_option("--alphabet-file", alphabet_file, "Alphabet file");
  equiv_cmd->add_option("--mode", mode, "auto, det or nondet")->check(CLI::IsMember({"auto", "det", "nondet"}));
  equiv_cmd->add_option("--budget", budget, "Instance budget (default: NESTPEB_VALUATION_BUDGET or 10^6)");

  // enum
  auto* enum_cmd = app.add_subcommand("enum", "List all trees up to a size");
  bool count_only = false;
  enum_cmd->add_option("--alphabet", alphabet_text, "Alphabet");
  enum_cmd->add_option("--alphabet-file", alphabet_file, "Alphabet file");
  enum_cmd->add_option("--bound", bound, "Maximal number of nodes")->check(CLI::PositiveNumber);
  enum_cmd->add_flag("--count", count_only, "Only print the counts per size");

  // guide
  auto* guide_cmd = app.add_subcommand("guide", "Check a guide on a range of graphs of a family");
  std::string family_name_opt, guide_file, term;
  int min_size = 2, max_size = 5, width = 0, height = 0;
  std::size_t max_nodes = 9;
  guide_cmd->add_option("--family", family_name_opt, "grid, torus or bracelet")->required();
  guide_cmd->add_option("--guide", guide_file, "Guide automaton file (default: the built-in guide)");
  guide_cmd->add_option("--width", width, "Single grid/torus width");
  guide_cmd->add_option("--height", height, "Single grid/torus height");
  guide_cmd->add_option("--min", min_size, "Smallest width and height")->check(CLI::PositiveNumber);
  guide_cmd->add_option("--max", max_size, "Largest width and height")->check(CLI::PositiveNumber);
  guide_cmd->add_option("--term", term, "Bracelet: binary tree over l:0 n:2 (default: all trees)");
  guide_cmd->add_option("--max-nodes", max_nodes, "Bracelet: largest tree size")->check(CLI::PositiveNumber);

  // succ
  auto* succ_cmd = app.add_subcommand("succ", "Successor in the first-visit order, via the origin procedure");
  std::string graph_file, origin, marked;
  bool all_pairs = false;
  succ_cmd->add_option("--graph", graph_file, "Graph file");
  succ_cmd->add_option("--family", family_name_opt, "Built-in family instead of --graph");
  succ_cmd->add_option("--width", width, "Grid/torus width");
  succ_cmd->add_option("--height", height, "Grid/torus height");
  succ_cmd->add_option("--guide", guide_file, "Guide automaton file (default: the family's guide)");
  succ_cmd->add_option("--origin", origin, "Origin node name");
  succ_cmd->add_option("--marked", marked, "Marked node name");
  succ_cmd->add_flag("--all", all_pairs, "Check every (origin, marked) pair against the recorded order");

  // builtin
  auto* builtin_cmd = app.add_subcommand("builtin", "Print a built-in example");
  std::string builtin_name;
  builtin_cmd
      ->add_option("name", builtin_name,
                   "all-leaves-a, even-branching, walking, anbn, guide-grid, guide-torus, guide-bracelet, "
                   "det-suite, positive-suite")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*run_cmd) {
      Automaton aut = parse_automaton(read_file(aut_file));
      const Structure& st = run_in.load(aut.alphabet());
      RunOptions ro;
      if (mode == "auto") ro.mode = check_deterministic(aut) ? RunMode::Deterministic : RunMode::Nondeterministic;
      else ro.mode = mode == "det" ? RunMode::Deterministic : RunMode::Nondeterministic;
      for (const auto& p : pebbles) {
        auto [name, node] = split_assignment(p);
        ro.initial_stack.emplace_back(name, run_in.node(node));
      }
      if (!start.empty()) ro.start = run_in.node(start);
      ro.trace = trace;
      if (max_steps) ro.max_steps = max_steps;
      RunResult r = run(aut, st, ro);
      if (as_json) {
        json j{{"verdict", verdict_name(r.verdict)}, {"steps", r.steps}};
        if (r.final_config) j["final"] = Machine(aut, st).describe(*r.final_config);
        if (!r.per_start.empty()) {
          json per = json::object();
          for (std::size_t s = 0; s < r.per_start.size(); ++s) per[run_in.name(static_cast<NodeId>(s))] = verdict_name(r.per_start[s]);
          j["per_start"] = per;
        }
        if (trace) j["trace"] = r.trace;
        std::cout << j.dump(2) << "\n";
      } else {
        for (const auto& line : r.trace) std::cout << line << "\n";
        std::cout << verdict_name(r.verdict) << "\n";
        for (std::size_t s = 0; s < r.per_start.size(); ++s)
          std::cout << "start " << run_in.name(static_cast<NodeId>(s)) << ": " << verdict_name(r.per_start[s]) << "\n";
      }
      return r.accepted() ? 0 : 1;
    }

    if (*eval_cmd) {
      FormulaPtr f = load_formula(formula_file, formula_text);
      const Structure& st = eval_in.load(std::nullopt);
      Valuation val;
      for (const auto& v : vals) {
        auto [name, node] = split_assignment(v);
        val[name] = eval_in.node(node);
      }
      EvalOptions eo;
      eo.check_functionality = !no_check;
      const bool result = eval(f, st, val, eo);
      if (as_json) std::cout << json{{"value", result}}.dump() << "\n";
      else std::cout << (result ? "true" : "false") << "\n";
      return result ? 0 : 1;
    }

    if (*f2a_cmd) {
      FormulaPtr f = load_formula(formula_file, formula_text);
      auto sigma = alphabet_from(alphabet_text, alphabet_file);
      if (!sigma) throw CLI::ValidationError("f2a needs --alphabet or --alphabet-file");
      Automaton a = nondet ? compile_nondet(f, heads, *sigma) : compile_det(f, heads, *sigma);
      std::ostringstream os;
      os << "# " << a.state_count() << " states, " << a.pebbles().size() << " pebbles, " << a.instructions().size()
         << " instructions\n"
         << a.to_string();
      write_output(out_file, os.str());
      return 0;
    }

    if (*a2f_cmd) {
      Automaton aut = parse_automaton(read_file(aut_file));
      ToFormulaOptions opts;
      opts.alphabet = alphabet_from(alphabet_text, alphabet_file);
      std::stringstream ss(order);
      for (std::string s; std::getline(ss, s, ',');)
        if (!s.empty()) opts.order.push_back(s);
      FormulaPtr f = to_formula(aut, opts);
      write_output(out_file, stats_block(f) + to_string(f) + "\n");
      return 0;
    }

    if (*equiv_cmd) {
      FormulaPtr f = load_formula(formula_file, formula_text);
      Automaton aut = parse_automaton(read_file(aut_file));
      auto sigma = alphabet_from(alphabet_text, alphabet_file);
      if (!sigma) sigma = aut.alphabet();
      if (!sigma) throw CLI::ValidationError("equiv needs an alphabet: --alphabet or an alphabet header");
      EquivOptions eo;
      if (mode == "auto") eo.mode = check_deterministic(aut) ? RunMode::Deterministic : RunMode::Nondeterministic;
      else eo.mode = mode == "det" ? RunMode::Deterministic : RunMode::Nondeterministic;
      eo.budget = budget;
      const auto trees = enumerate_trees(*sigma, bound);
      std::uint64_t combos = 0;
      for (const auto& t : trees) {
        std::uint64_t c = 1;
        for (std::size_t i = 0; i < f->free.size() && c <= eo.budget + valuation_budget(); ++i) c *= t.size();
        combos += c;
      }
      const std::uint64_t cap = budget ? budget : valuation_budget();
      if (combos > cap)
        std::cerr << "warning: " << combos << " instances exceed the budget of " << cap << "; the check is truncated\n";
      EquivalenceReport r = equiv_formula_automaton(f, aut, trees, eo);
      if (as_json) std::cout << report_json(r).dump(2) << "\n";
      else std::cout << r.summary() << "\n";
      return r.agree() ? 0 : 1;
    }

    if (*enum_cmd) {
      auto sigma = alphabet_from(alphabet_text, alphabet_file);
      if (!sigma) throw CLI::ValidationError("enum needs --alphabet or --alphabet-file");
      if (count_only) {
        std::uint64_t total = 0;
        json sizes = json::object();
        for (std::size_t n = 1; n <= bound; ++n) {
          std::uint64_t c = count_trees(*sigma, n);
          total += c;
          if (as_json) sizes[std::to_string(n)] = c;
          else std::cout << "size " << n << ": " << c << "\n";
        }
        if (as_json) std::cout << json{{"sizes", sizes}, {"total", total}}.dump(2) << "\n";
        else std::cout << "total " << total << "\n";
        return 0;
      }
      const auto trees = enumerate_trees(*sigma, bound);
      if (as_json) {
        json list = json::array();
        for (const auto& t : trees) list.push_back(t.to_string());
        std::cout << json{{"trees", list}, {"total", trees.size()}}.dump(2) << "\n";
      } else {
        for (const auto& t : trees) std::cout << t.to_string() << "\n";
      }
      return 0;
    }

    if (*guide_cmd) {
      const Family fam = *family_of(family_name_opt);
      Automaton guide = guide_file.empty() ? make_guide(fam) : parse_automaton(read_file(guide_file));
      struct Instance {
        std::string name;
        Graph g;
      };
      std::vector<Instance> instances;
      std::string range;
      if (fam == Family::Bracelet) {
        std::vector<Tree> trees;
        if (!term.empty()) {
          trees.push_back(parse_term(term, shape_alphabet()));
          range = "bracelets from " + term;
        } else {
          trees = enumerate_trees(shape_alphabet(), max_nodes);
          range = "bracelets from all binary trees with at most " + std::to_string(max_nodes) + " nodes";
        }
        for (const auto& t : trees)
          for (NodeId v = 1; v < t.size(); ++v)
            if (t.node(v).children.empty()) instances.push_back({t.to_string() + " leaf " + std::to_string(v), build_bracelet(t, v)});
      } else {
        int lo_w = min_size, hi_w = max_size, lo_h = min_size, hi_h = max_size;
        if (width) lo_w = hi_w = width;
        if (height) lo_h = hi_h = height;
        range = std::string(family_name(fam)) + " width " + std::to_string(lo_w) + ".." + std::to_string(hi_w) +
                ", height " + std::to_string(lo_h) + ".." + std::to_string(hi_h);
        for (int w = lo_w; w <= hi_w; ++w)
          for (int h = lo_h; h <= hi_h; ++h)
            instances.push_back({std::string(family_name(fam)) + " " + std::to_string(w) + "x" + std::to_string(h),
                                 fam == Family::Grid ? build_grid(w, h) : build_torus(w, h)});
      }
      std::size_t failed = 0;
      json items = json::array();
      for (const auto& inst : instances) {
        GuideReport rep = check_guide(guide, inst.g);
        const bool ok = rep.ok();
        failed += ok ? 0 : 1;
        if (as_json) {
          items.push_back({{"instance", inst.name}, {"nodes", rep.nodes}, {"ok", ok}, {"failure", rep.failure()}});
        } else {
          std::cout << inst.name << ": " << (ok ? "ok" : "FAIL " + rep.failure()) << " (" << rep.nodes << " nodes, "
                    << rep.runs.size() << " starts)\n";
        }
      }
      if (as_json) {
        std::cout << json{{"tested", range}, {"pebbles", guide.pebbles().size()}, {"instances", items}, {"failed", failed}}.dump(2)
                  << "\n";
      } else {
        std::cout << "tested " << range << " with " << guide.pebbles().size() << " pebbles: " << instances.size() - failed
                  << "/" << instances.size() << " instances pass\n";
      }
      return failed == 0 ? 0 : 1;
    }

    if (*succ_cmd) {
      auto fam = family_of(family_name_opt);
      Graph g;
      if (!graph_file.empty()) {
        g = parse_graph(read_file(graph_file));
      } else if (fam && fam != Family::Bracelet) {
        if (width < 1 || height < 1) throw CLI::ValidationError("--width and --height are required with --family");
        g = *fam == Family::Grid ? build_grid(width, height) : build_torus(width, height);
      } else {
        throw CLI::ValidationError("give --graph, or --family grid|torus with --width and --height");
      }
      if (guide_file.empty() && !fam) throw CLI::ValidationError("--guide is required with --graph and no --family");
      Automaton guide = guide_file.empty() ? make_guide(*fam) : parse_automaton(read_file(guide_file));
      auto node = [&](const std::string& s) {
        auto n = g.find(s);
        if (!n) throw Error("no node named '" + s + "'");
        return *n;
      };
      if (all_pairs) {
        std::size_t pairs = 0, agree = 0;
        for (NodeId o = 0; o < g.size(); ++o) {
          auto order_vec = first_visit_order(g, guide, o);
          for (std::size_t i = 0; i < order_vec.size(); ++i) {
            std::optional<NodeId> expect;
            if (i + 1 < order_vec.size()) expect = order_vec[i + 1];
            ++pairs;
            if (successor_via_origin(g, guide, o, order_vec[i]) == expect) ++agree;
          }
        }
        if (as_json) std::cout << json{{"pairs", pairs}, {"agreements", agree}}.dump() << "\n";
        else std::cout << "pairs " << pairs << " agreements " << agree << "\n";
        return pairs == agree ? 0 : 1;
      }
      if (origin.empty() || marked.empty()) throw CLI::ValidationError("--origin and --marked are required");
      auto s = successor_via_origin(g, guide, node(origin), node(marked));
      std::string out = s ? g.name(*s) : "none";
      if (as_json) std::cout << json{{"successor", s ? json(out) : json(nullptr)}}.dump() << "\n";
      else std::cout << out << "\n";
      return 0;
    }

    if (*builtin_cmd) {
      auto suite_text = [](const std::vector<NamedFormula>& suite) {
        std::ostringstream os;
        for (const auto& nf : suite) os << "# " << nf.name << " (heads " << nf.heads << ")\n" << nf.text << "\n";
        return os.str();
      };
      std::string out;
      if (builtin_name == "all-leaves-a") out = all_leaves_a_automaton().to_string();
      else if (builtin_name == "even-branching") out = even_branching_automaton().to_string();
      else if (builtin_name == "walking") out = to_string(walking_sentence()) + "\n";
      else if (builtin_name == "anbn") out = to_string(anbn_sentence()) + "\n";
      else if (builtin_name == "guide-grid") out = make_guide(Family::Grid).to_string();
      else if (builtin_name == "guide-torus") out = make_guide(Family::Torus).to_string();
      else if (builtin_name == "guide-bracelet") out = make_guide(Family::Bracelet).to_string();
      else if (builtin_name == "det-suite") out = suite_text(deterministic_suite());
      else if (builtin_name == "positive-suite") out = suite_text(positive_tc_suite());
      else throw CLI::ValidationError("unknown built-in '" + builtin_name + "'");
      std::cout << out;
      return 0;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
