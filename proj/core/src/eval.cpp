#include "nestpeb/eval.hpp"

#include <deque>
#include <sstream>

namespace nestpeb {

std::string FunctionalityReport::describe() const {
  if (functional) return "functional";
  auto tuple = [](const std::vector<NodeId>& t) {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < t.size(); ++i) os << (i ? " " : "") << t[i];
    os << ')';
    return os.str();
  };
  return tuple(source) + " has successors " + tuple(first) + " and " + tuple(second);
}

namespace {

using Key = std::string;

void put(Key& k, NodeId v) {
  for (int i = 0; i < 4; ++i) k.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

}  // namespace

struct Evaluator::Impl {
  const Structure& st;
  EvalOptions opts;
  std::size_t n;
  std::unordered_map<std::string, int> slots;
  std::vector<NodeId> env;
  std::vector<FormulaPtr> roots;  // keeps node addresses stable for the memo tables

  struct Closure {
    std::vector<std::optional<std::vector<std::uint32_t>>> succ;
    std::unordered_map<std::uint32_t, std::vector<bool>> reach;
  };

  struct Info {
    std::vector<int> free_slots;
    std::vector<int> var_slots;  // atom args, quantified var, TC binders
    std::vector<int> arg_slots;  // TC applied tuples
    std::vector<int> outer_slots;
    int label = -1;  // Lab: node label index; Edg/EdgeG: edge label index
    std::unordered_map<Key, bool> memo;
    std::unordered_map<Key, Closure> closures;
  };
  std::unordered_map<const Formula*, Info> info;

  Impl(const Structure& s, EvalOptions o) : st(s), opts(o), n(s.size()) {}

  int slot(const std::string& name) {
    auto [it, fresh] = slots.emplace(name, static_cast<int>(env.size()));
    if (fresh) env.push_back(kNoNode);
    return it->second;
  }

  Info& info_of(const Formula& f) {
    auto it = info.find(&f);
    if (it != info.end()) return it->second;
    Info in;
    for (const auto& v : f.free) in.free_slots.push_back(slot(v));
    for (const auto& v : f.vars) in.var_slots.push_back(slot(v));
    for (const auto& v : f.args) in.arg_slots.push_back(slot(v));
    if (f.kind == FormulaKind::Lab) in.label = st.label_index(f.symbol);
    if (f.kind == FormulaKind::Edg) in.label = st.edge_label_index(std::to_string(f.child));
    if (f.kind == FormulaKind::EdgeG) in.label = st.edge_label_index(f.symbol);
    if (f.kind == FormulaKind::TC) {
      for (const auto& v : f.body()->free)
        if (std::find(f.vars.begin(), f.vars.end(), v) == f.vars.end()) in.outer_slots.push_back(slot(v));
    }
    return info.emplace(&f, std::move(in)).first->second;
  }

  Key key_of(const std::vector<int>& s) const {
    Key k;
    k.reserve(4 * s.size());
    for (int i : s) put(k, env[i]);
    return k;
  }

  void set_tuple(const std::vector<int>& s, std::size_t from, std::size_t k, std::uint32_t idx) {
    for (std::size_t i = k; i-- > 0;) {
      env[s[from + i]] = static_cast<NodeId>(idx % n);
      idx /= static_cast<std::uint32_t>(n);
    }
  }

  std::vector<NodeId> decode(std::uint32_t idx, std::size_t k) const {
    std::vector<NodeId> t(k);
    for (std::size_t i = k; i-- > 0;) {
      t[i] = static_cast<NodeId>(idx % n);
      idx /= static_cast<std::uint32_t>(n);
    }
    return t;
  }

  std::uint32_t tuple_index(const std::vector<int>& s, std::size_t from, std::size_t k) const {
    std::uint32_t idx = 0;
    for (std::size_t i = 0; i < k; ++i) idx = idx * static_cast<std::uint32_t>(n) + env[s[from + i]];
    return idx;
  }

  std::uint32_t tuple_count(std::size_t k) const {
    std::uint64_t c = 1;
    for (std::size_t i = 0; i < k; ++i) c *= n;
    if (c > (1u << 24)) throw ContractError("transitive closure over too many tuples");
    return static_cast<std::uint32_t>(c);
  }

  // Successors of tuple `a` under the body; binder slots are saved and restored.
  std::vector<std::uint32_t> successors(const Formula& f, Info& in, std::uint32_t a) {
    const std::size_t k = f.vars.size() / 2;
    std::vector<NodeId> saved;
    for (int s : in.var_slots) saved.push_back(env[s]);
    set_tuple(in.var_slots, 0, k, a);
    std::vector<std::uint32_t> out;
    const std::uint32_t total = tuple_count(k);
    for (std::uint32_t b = 0; b < total; ++b) {
      set_tuple(in.var_slots, k, k, b);
      if (go(f.body())) out.push_back(b);
    }
    for (std::size_t i = 0; i < in.var_slots.size(); ++i) env[in.var_slots[i]] = saved[i];
    return out;
  }

  void check(const Formula& f, std::uint32_t a, const std::vector<std::uint32_t>& succ) {
    if (!f.deterministic || !opts.check_functionality || succ.size() < 2) return;
    const std::size_t k = f.vars.size() / 2;
    FunctionalityReport r;
    r.functional = false;
    r.source = decode(a, k);
    r.first = decode(succ[0], k);
    r.second = decode(succ[1], k);
    throw FunctionalityError(std::move(r));
  }

  const std::vector<std::uint32_t>& succ_of(const Formula& f, Info& in, Closure& c, std::uint32_t a) {
    if (!c.succ[a]) {
      c.succ[a] = successors(f, in, a);
      check(f, a, *c.succ[a]);
    }
    return *c.succ[a];
  }

  bool eval_tc(const Formula& f, Info& in) {
    const std::size_t k = f.vars.size() / 2;
    Key outer = key_of(in.outer_slots);
    auto [it, fresh] = in.closures.try_emplace(outer);
    Closure& c = it->second;
    if (fresh) {
      c.succ.resize(tuple_count(k));
      if (opts.scope == FunctionalityScope::Global)
        for (std::uint32_t a = 0; a < c.succ.size(); ++a) succ_of(f, in, c, a);
    }
    std::uint32_t u = tuple_index(in.arg_slots, 0, k);
    std::uint32_t v = tuple_index(in.arg_slots, k, k);
    auto rit = c.reach.find(u);
    if (rit == c.reach.end()) {
      std::vector<bool> seen(c.succ.size(), false);
      std::deque<std::uint32_t> queue{u};
      seen[u] = true;
      while (!queue.empty()) {
        std::uint32_t a = queue.front();
        queue.pop_front();
        for (std::uint32_t b : succ_of(f, in, c, a))
          if (!seen[b]) {
            seen[b] = true;
            queue.push_back(b);
          }
      }
      rit = c.reach.emplace(u, std::move(seen)).first;
    }
    return rit->second[v];
  }

  bool go(const FormulaPtr& fp) {
    const Formula& f = *fp;
    switch (f.kind) {
      case FormulaKind::True: return true;
      case FormulaKind::False: return false;
      case FormulaKind::Not: return !go(f.sub[0]);
      case FormulaKind::And:
        for (const auto& s : f.sub)
          if (!go(s)) return false;
        return true;
      case FormulaKind::Or:
        for (const auto& s : f.sub)
          if (go(s)) return true;
        return false;
      default: break;
    }
    Info& in = info_of(f);
    switch (f.kind) {
      case FormulaKind::Lab: return in.label >= 0 && st.label(env[in.var_slots[0]]) == in.label;
      case FormulaKind::Edg:
      case FormulaKind::EdgeG: {
        NodeId x = env[in.var_slots[0]];
        return in.label >= 0 && st.out(x, in.label) == env[in.var_slots[1]];
      }
      case FormulaKind::Leq:
        if (!st.is_tree()) throw ContractError("leq is only defined on trees");
        return st.is_ancestor_or_self(env[in.var_slots[0]], env[in.var_slots[1]]);
      case FormulaKind::Eq: return env[in.var_slots[0]] == env[in.var_slots[1]];
      default: break;
    }
    Key key = key_of(in.free_slots);
    if (auto it = in.memo.find(key); it != in.memo.end()) return it->second;
    bool r = false;
    if (f.kind == FormulaKind::TC) {
      r = eval_tc(f, in);
    } else {
      const bool ex = f.kind == FormulaKind::Exists;
      int s = in.var_slots[0];
      NodeId saved = env[s];
      r = !ex;
      for (NodeId v = 0; v < n; ++v) {
        env[s] = v;
        if (go(f.sub[0]) == ex) {
          r = ex;
          break;
        }
      }
      env[s] = saved;
    }
    in.memo.emplace(std::move(key), r);
    return r;
  }

  void bind(const FormulaPtr& f, const Valuation& val) {
    roots.push_back(f);
    for (const auto& v : f->free) {
      auto it = val.find(v);
      if (it == val.end()) throw ContractError("no value for free variable '" + v + "'");
      if (it->second >= n) throw ContractError("value of '" + v + "' is outside the structure");
      env[slot(v)] = it->second;
    }
  }
};

Evaluator::Evaluator(const Structure& structure, EvalOptions opts)
    : st_(&structure), impl_(std::make_unique<Impl>(structure, opts)) {}

Evaluator::~Evaluator() = default;

bool Evaluator::eval(const FormulaPtr& f, const Valuation& val) {
  impl_->bind(f, val);
  return impl_->go(f);
}

FunctionalityReport Evaluator::check_functional(const FormulaPtr& body, const std::vector<std::string>& xs,
                                                const std::vector<std::string>& ys, const Valuation& outer) {
  // Evaluate the body on all tuple pairs through a non-deterministic TC wrapper.
  FormulaPtr wrapper = fo::tc(xs, ys, body, xs, ys, false);
  Valuation val = outer;
  for (const auto& v : wrapper->free)
    if (!val.count(v)) val[v] = 0;
  impl_->bind(wrapper, val);
  auto& in = impl_->info_of(*wrapper);
  const std::size_t k = xs.size();
  FunctionalityReport r;
  for (std::uint32_t a = 0; a < impl_->tuple_count(k); ++a) {
    auto succ = impl_->successors(*wrapper, in, a);
    if (succ.size() >= 2) {
      r.functional = false;
      r.source = impl_->decode(a, k);
      r.first = impl_->decode(succ[0], k);
      r.second = impl_->decode(succ[1], k);
      return r;
    }
  }
  return r;
}

bool eval(const FormulaPtr& f, const Structure& structure, const Valuation& val, const EvalOptions& opts) {
  Evaluator ev(structure, opts);
  return ev.eval(f, val);
}

FunctionalityReport check_functional(const FormulaPtr& body, const Structure& structure,
                                     const std::vector<std::string>& xs, const std::vector<std::string>& ys,
                                     const Valuation& outer) {
  Evaluator ev(structure);
  return ev.check_functional(body, xs, ys, outer);
}

}  // namespace nestpeb
