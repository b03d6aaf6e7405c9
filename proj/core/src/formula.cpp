#include "nestpeb/formula.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "nestpeb/error.hpp"

namespace nestpeb {

bool Formula::is_free(std::string_view v) const { return std::binary_search(free.begin(), free.end(), v); }

namespace {

void sort_unique(std::vector<std::string>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

FormulaPtr finish(Formula f) {
  std::vector<std::string> fv;
  switch (f.kind) {
    case FormulaKind::True:
    case FormulaKind::False: break;
    case FormulaKind::Lab:
    case FormulaKind::Edg:
    case FormulaKind::EdgeG:
    case FormulaKind::Leq:
    case FormulaKind::Eq: fv = f.vars; break;
    case FormulaKind::Not:
    case FormulaKind::And:
    case FormulaKind::Or:
      for (const auto& s : f.sub) fv.insert(fv.end(), s->free.begin(), s->free.end());
      break;
    case FormulaKind::Exists:
    case FormulaKind::Forall:
      for (const auto& v : f.sub[0]->free)
        if (v != f.vars[0]) fv.push_back(v);
      break;
    case FormulaKind::TC: {
      for (const auto& v : f.sub[0]->free)
        if (std::find(f.vars.begin(), f.vars.end(), v) == f.vars.end()) fv.push_back(v);
      fv.insert(fv.end(), f.args.begin(), f.args.end());
      break;
    }
  }
  sort_unique(fv);
  f.free = std::move(fv);
  return std::make_shared<const Formula>(std::move(f));
}

Formula make(FormulaKind k) {
  Formula f;
  f.kind = k;
  return f;
}

}  // namespace

namespace fo {

FormulaPtr top() {
  static const FormulaPtr t = finish(make(FormulaKind::True));
  return t;
}

FormulaPtr bottom() {
  static const FormulaPtr f = finish(make(FormulaKind::False));
  return f;
}

FormulaPtr lab(std::string symbol, std::string x) {
  Formula f = make(FormulaKind::Lab);
  f.symbol = std::move(symbol);
  f.vars = {std::move(x)};
  return finish(std::move(f));
}

FormulaPtr edg(int i, std::string x, std::string y) {
  if (i < 1) throw ContractError("edg child index must be at least 1");
  Formula f = make(FormulaKind::Edg);
  f.child = i;
  f.vars = {std::move(x), std::move(y)};
  return finish(std::move(f));
}

FormulaPtr edge(std::string symbol, std::string x, std::string y) {
  Formula f = make(FormulaKind::EdgeG);
  f.symbol = std::move(symbol);
  f.vars = {std::move(x), std::move(y)};
  return finish(std::move(f));
}

FormulaPtr leq(std::string x, std::string y) {
  Formula f = make(FormulaKind::Leq);
  f.vars = {std::move(x), std::move(y)};
  return finish(std::move(f));
}

FormulaPtr eq(std::string x, std::string y) {
  Formula f = make(FormulaKind::Eq);
  f.vars = {std::move(x), std::move(y)};
  return finish(std::move(f));
}

FormulaPtr neg(FormulaPtr g) {
  Formula f = make(FormulaKind::Not);
  f.sub = {std::move(g)};
  return finish(std::move(f));
}

namespace {
FormulaPtr nary(FormulaKind k, std::vector<FormulaPtr> fs) {
  if (fs.empty()) return k == FormulaKind::And ? top() : bottom();
  if (fs.size() == 1) return fs[0];
  Formula f = make(k);
  f.sub = std::move(fs);
  return finish(std::move(f));
}
}  // namespace

FormulaPtr conj(std::vector<FormulaPtr> fs) { return nary(FormulaKind::And, std::move(fs)); }
FormulaPtr disj(std::vector<FormulaPtr> fs) { return nary(FormulaKind::Or, std::move(fs)); }
FormulaPtr conj(FormulaPtr a, FormulaPtr b) { return conj(std::vector<FormulaPtr>{std::move(a), std::move(b)}); }
FormulaPtr disj(FormulaPtr a, FormulaPtr b) { return disj(std::vector<FormulaPtr>{std::move(a), std::move(b)}); }
FormulaPtr implies(FormulaPtr a, FormulaPtr b) { return disj(neg(std::move(a)), std::move(b)); }

FormulaPtr exists(std::string x, FormulaPtr body) {
  Formula f = make(FormulaKind::Exists);
  f.vars = {std::move(x)};
  f.sub = {std::move(body)};
  return finish(std::move(f));
}

FormulaPtr forall(std::string x, FormulaPtr body) {
  Formula f = make(FormulaKind::Forall);
  f.vars = {std::move(x)};
  f.sub = {std::move(body)};
  return finish(std::move(f));
}

FormulaPtr exists(const std::vector<std::string>& xs, FormulaPtr body) {
  for (auto it = xs.rbegin(); it != xs.rend(); ++it) body = exists(*it, std::move(body));
  return body;
}

FormulaPtr forall(const std::vector<std::string>& xs, FormulaPtr body) {
  for (auto it = xs.rbegin(); it != xs.rend(); ++it) body = forall(*it, std::move(body));
  return body;
}

FormulaPtr tc(std::vector<std::string> xs, std::vector<std::string> ys, FormulaPtr body, std::vector<std::string> us,
              std::vector<std::string> vs, bool deterministic) {
  const std::size_t k = xs.size();
  if (k == 0) throw ContractError("transitive closure needs at least one variable per tuple");
  if (ys.size() != k) throw ContractError("transitive closure binder tuples differ in length");
  if (us.size() != k || vs.size() != k) throw ContractError("transitive closure argument tuples must have length " + std::to_string(k));
  std::vector<std::string> binders = xs;
  binders.insert(binders.end(), ys.begin(), ys.end());
  std::set<std::string> distinct(binders.begin(), binders.end());
  if (distinct.size() != binders.size()) throw ContractError("transitive closure binder variables must be distinct");
  Formula f = make(FormulaKind::TC);
  f.vars = std::move(binders);
  f.args = std::move(us);
  f.args.insert(f.args.end(), vs.begin(), vs.end());
  f.sub = {std::move(body)};
  f.deterministic = deterministic;
  return finish(std::move(f));
}

FormulaPtr tuple_eq(const std::vector<std::string>& xs, const std::vector<std::string>& ys) {
  if (xs.size() != ys.size()) throw ContractError("tuple equality of different lengths");
  std::vector<FormulaPtr> parts;
  for (std::size_t i = 0; i < xs.size(); ++i) parts.push_back(eq(xs[i], ys[i]));
  return conj(std::move(parts));
}

}  // namespace fo

namespace {

void collect_names(const FormulaPtr& f, std::unordered_set<const Formula*>& seen, std::set<std::string>& out) {
  if (!seen.insert(f.get()).second) return;
  out.insert(f->vars.begin(), f->vars.end());
  out.insert(f->args.begin(), f->args.end());
  for (const auto& s : f->sub) collect_names(s, seen, out);
}

FormulaPtr rebuild(const Formula& f, std::vector<FormulaPtr> sub, std::vector<std::string> vars,
                   std::vector<std::string> args) {
  Formula g = f;
  g.sub = std::move(sub);
  g.vars = std::move(vars);
  g.args = std::move(args);
  return finish(std::move(g));
}

}  // namespace

FormulaPtr rename_free(const FormulaPtr& root, const std::string& from, const std::string& to) {
  if (from == to) return root;
  std::unordered_map<const Formula*, FormulaPtr> memo;
  std::function<FormulaPtr(const FormulaPtr&)> go = [&](const FormulaPtr& f) -> FormulaPtr {
    if (!f->is_free(from)) return f;
    if (auto it = memo.find(f.get()); it != memo.end()) return it->second;
    auto swap_name = [&](std::vector<std::string> v) {
      for (auto& s : v)
        if (s == from) s = to;
      return v;
    };
    FormulaPtr out;
    if (f->is_atom()) {
      out = rebuild(*f, {}, swap_name(f->vars), {});
    } else if (f->kind == FormulaKind::Exists || f->kind == FormulaKind::Forall) {
      if (f->vars[0] == to) throw ContractError("renaming " + from + " to " + to + " would be captured");
      out = rebuild(*f, {go(f->sub[0])}, f->vars, {});
    } else if (f->kind == FormulaKind::TC) {
      bool bound_here = std::find(f->vars.begin(), f->vars.end(), from) != f->vars.end();
      FormulaPtr body = f->sub[0];
      if (!bound_here && body->is_free(from)) {
        if (std::find(f->vars.begin(), f->vars.end(), to) != f->vars.end())
          throw ContractError("renaming " + from + " to " + to + " would be captured");
        body = go(body);
      }
      out = rebuild(*f, {body}, f->vars, swap_name(f->args));
    } else {
      std::vector<FormulaPtr> sub;
      for (const auto& s : f->sub) sub.push_back(go(s));
      out = rebuild(*f, std::move(sub), {}, {});
    }
    memo.emplace(f.get(), out);
    return out;
  };
  return go(root);
}

FormulaPtr functionalized(const FormulaPtr& psi, const std::vector<std::string>& xs,
                          const std::vector<std::string>& ys) {
  if (xs.size() != ys.size() || xs.empty()) throw ContractError("functionalized needs tuples of equal nonzero length");
  std::set<std::string> used;
  std::unordered_set<const Formula*> seen;
  collect_names(psi, seen, used);
  used.insert(xs.begin(), xs.end());
  used.insert(ys.begin(), ys.end());
  std::vector<std::string> zs;
  int counter = 1;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    std::string z;
    do z = "z" + std::to_string(counter++);
    while (used.count(z));
    used.insert(z);
    zs.push_back(z);
  }
  FormulaPtr psi_z = psi;
  for (std::size_t i = 0; i < ys.size(); ++i) psi_z = rename_free(psi_z, ys[i], zs[i]);
  return fo::conj(psi, fo::forall(zs, fo::implies(psi_z, fo::tuple_eq(ys, zs))));
}

namespace {

// Precedence levels: 0 = implication context, 1 = or, 2 = and, 3 = unary.
void print(const FormulaPtr& f, int ctx, std::ostream& os) {
  auto join = [&](const std::vector<std::string>& v, std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) os << (i > b ? " " : "") << v[i];
  };
  switch (f->kind) {
    case FormulaKind::True: os << "true"; return;
    case FormulaKind::False: os << "false"; return;
    case FormulaKind::Lab: os << "lab_" << f->symbol << '(' << f->vars[0] << ')'; return;
    case FormulaKind::Edg: os << "edg" << f->child << '(' << f->vars[0] << ',' << f->vars[1] << ')'; return;
    case FormulaKind::EdgeG: os << "edge_" << f->symbol << '(' << f->vars[0] << ',' << f->vars[1] << ')'; return;
    case FormulaKind::Leq: os << "leq(" << f->vars[0] << ',' << f->vars[1] << ')'; return;
    case FormulaKind::Eq: os << f->vars[0] << '=' << f->vars[1]; return;
    case FormulaKind::Not:
      if (f->sub[0]->kind == FormulaKind::Eq) {
        os << f->sub[0]->vars[0] << "!=" << f->sub[0]->vars[1];
        return;
      }
      os << '!';
      print(f->sub[0], 3, os);
      return;
    case FormulaKind::And:
    case FormulaKind::Or: {
      int level = f->kind == FormulaKind::And ? 2 : 1;
      bool paren = ctx > level;
      if (paren) os << '(';
      for (std::size_t i = 0; i < f->sub.size(); ++i) {
        if (i) os << (level == 2 ? " & " : " | ");
        // Operands are printed one level tighter so quantifiers get parentheses.
        print(f->sub[i], level + 1, os);
      }
      if (paren) os << ')';
      return;
    }
    case FormulaKind::Exists:
    case FormulaKind::Forall: {
      bool paren = ctx > 0;
      if (paren) os << '(';
      os << (f->kind == FormulaKind::Exists ? 'E' : 'A') << f->vars[0] << ". ";
      print(f->sub[0], 0, os);
      if (paren) os << ')';
      return;
    }
    case FormulaKind::TC: {
      std::size_t k = f->vars.size() / 2;
      os << '[' << (f->deterministic ? "dtc" : "tc") << " (";
      join(f->vars, 0, k);
      os << ")(";
      join(f->vars, k, 2 * k);
      os << "): ";
      print(f->sub[0], 0, os);
      os << "](";
      join(f->args, 0, k);
      os << ", ";
      join(f->args, k, 2 * k);
      os << ')';
      return;
    }
  }
}

}  // namespace

std::string to_string(const FormulaPtr& f) {
  std::ostringstream os;
  print(f, 0, os);
  return os.str();
}

bool check_positive(const FormulaPtr& root) {
  // Memoised on (node, parity of negations above it).
  std::set<std::pair<const Formula*, bool>> seen;
  std::function<bool(const FormulaPtr&, bool)> go = [&](const FormulaPtr& f, bool odd) {
    if (!seen.insert({f.get(), odd}).second) return true;
    if (f->kind == FormulaKind::TC && odd) return false;
    bool next = f->kind == FormulaKind::Not ? !odd : odd;
    for (const auto& s : f->sub)
      if (!go(s, next)) return false;
    return true;
  };
  return go(root, false);
}

FormulaPtr nnf(const FormulaPtr& root) {
  std::unordered_map<const Formula*, FormulaPtr> memo_pos, memo_neg;
  std::function<FormulaPtr(const FormulaPtr&, bool)> go = [&](const FormulaPtr& f, bool negate) -> FormulaPtr {
    auto& memo = negate ? memo_neg : memo_pos;
    if (auto it = memo.find(f.get()); it != memo.end()) return it->second;
    FormulaPtr out;
    switch (f->kind) {
      case FormulaKind::True: out = negate ? fo::bottom() : f; break;
      case FormulaKind::False: out = negate ? fo::top() : f; break;
      case FormulaKind::Not: out = go(f->sub[0], !negate); break;
      case FormulaKind::And:
      case FormulaKind::Or: {
        std::vector<FormulaPtr> sub;
        for (const auto& s : f->sub) sub.push_back(go(s, negate));
        bool is_and = (f->kind == FormulaKind::And) != negate;
        out = is_and ? fo::conj(std::move(sub)) : fo::disj(std::move(sub));
        break;
      }
      case FormulaKind::Exists:
      case FormulaKind::Forall: {
        bool is_exists = (f->kind == FormulaKind::Exists) != negate;
        FormulaPtr body = go(f->sub[0], negate);
        out = is_exists ? fo::exists(f->vars[0], body) : fo::forall(f->vars[0], body);
        break;
      }
      case FormulaKind::TC: {
        Formula g = *f;
        g.sub = {go(f->sub[0], false)};
        FormulaPtr t = finish(std::move(g));
        out = negate ? fo::neg(t) : t;
        break;
      }
      default: out = negate ? fo::neg(f) : f; break;
    }
    memo.emplace(f.get(), out);
    return out;
  };
  return go(root, false);
}

FormulaStats formula_stats(const FormulaPtr& root) {
  FormulaStats st;
  std::unordered_map<const Formula*, std::pair<std::uint64_t, int>> memo;  // tree size, tc depth
  constexpr std::uint64_t kCap = UINT64_MAX / 4;
  std::function<std::pair<std::uint64_t, int>(const FormulaPtr&)> go = [&](const FormulaPtr& f) {
    if (auto it = memo.find(f.get()); it != memo.end()) return it->second;
    ++st.dag_size;
    std::uint64_t size = 1;
    int depth = 0;
    for (const auto& s : f->sub) {
      auto [ss, sd] = go(s);
      size = std::min(kCap, size + ss);
      depth = std::max(depth, sd);
    }
    if (f->kind == FormulaKind::TC) {
      ++depth;
      ++st.tc_count;
      st.max_tc_arity = std::max(st.max_tc_arity, f->arity());
      if (!f->deterministic) st.all_tc_deterministic = false;
    }
    if (f->kind == FormulaKind::Leq) st.uses_leq = true;
    memo.emplace(f.get(), std::make_pair(size, depth));
    return std::make_pair(size, depth);
  };
  auto [size, depth] = go(root);
  st.tree_size = size;
  st.tc_depth = depth;
  return st;
}

}  // namespace nestpeb
