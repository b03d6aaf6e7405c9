#include "nestpeb/closure.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

#include "nestpeb/error.hpp"

namespace nestpeb {

namespace {

bool is_true(const FormulaPtr& f) { return f->kind == FormulaKind::True; }
bool is_false(const FormulaPtr& f) { return f->kind == FormulaKind::False; }

FormulaPtr nary(FormulaKind kind, std::vector<FormulaPtr> fs) {
  const bool is_and = kind == FormulaKind::And;
  std::vector<FormulaPtr> out;
  std::set<const Formula*> seen;
  for (auto& f : fs) {
    if (is_and ? is_false(f) : is_true(f)) return f;
    if (is_and ? is_true(f) : is_false(f)) continue;
    if (f->kind == kind) {
      for (const auto& g : f->sub)
        if (seen.insert(g.get()).second) out.push_back(g);
      continue;
    }
    if (seen.insert(f.get()).second) out.push_back(std::move(f));
  }
  return is_and ? fo::conj(std::move(out)) : fo::disj(std::move(out));
}

FormulaPtr quantify(FormulaKind kind, const std::vector<std::string>& xs, FormulaPtr body) {
  for (auto it = xs.rbegin(); it != xs.rend(); ++it) {
    if (is_true(body) || is_false(body) || !body->is_free(*it)) continue;
    body = kind == FormulaKind::Exists ? fo::exists(*it, std::move(body)) : fo::forall(*it, std::move(body));
  }
  return body;
}

// A prefix p such that p1..pk are not among `taken`.
std::vector<std::string> fresh_tuple(const std::string& base, int k, const std::set<std::string>& taken) {
  for (std::string p = base;; p += "q") {
    std::vector<std::string> names;
    for (int i = 1; i <= k; ++i) names.push_back(p + std::to_string(i));
    if (std::none_of(names.begin(), names.end(), [&](const std::string& n) { return taken.count(n) != 0; })) return names;
  }
}

}  // namespace

namespace simp {

FormulaPtr conj(std::vector<FormulaPtr> fs) { return nary(FormulaKind::And, std::move(fs)); }
FormulaPtr disj(std::vector<FormulaPtr> fs) { return nary(FormulaKind::Or, std::move(fs)); }
FormulaPtr exists(const std::vector<std::string>& xs, FormulaPtr body) {
  return quantify(FormulaKind::Exists, xs, std::move(body));
}
FormulaPtr forall(const std::vector<std::string>& xs, FormulaPtr body) {
  return quantify(FormulaKind::Forall, xs, std::move(body));
}

FormulaPtr tc(const std::vector<std::string>& xs, const std::vector<std::string>& ys, FormulaPtr body,
              const std::vector<std::string>& us, const std::vector<std::string>& vs, bool deterministic) {
  if (is_false(body)) return fo::tuple_eq(us, vs);
  return fo::tc(xs, ys, std::move(body), us, vs, deterministic);
}

}  // namespace simp

FormulaPtr simplify(const FormulaPtr& root) {
  std::unordered_map<const Formula*, FormulaPtr> memo;
  auto go = [&](auto& self, const FormulaPtr& f) -> FormulaPtr {
    if (auto it = memo.find(f.get()); it != memo.end()) return it->second;
    std::vector<FormulaPtr> sub;
    for (const auto& s : f->sub) sub.push_back(self(self, s));
    FormulaPtr out;
    switch (f->kind) {
      case FormulaKind::Eq: out = f->vars[0] == f->vars[1] ? fo::top() : f; break;
      case FormulaKind::Not:
        if (is_true(sub[0])) out = fo::bottom();
        else if (is_false(sub[0])) out = fo::top();
        else if (sub[0]->kind == FormulaKind::Not) out = sub[0]->sub[0];
        else out = sub[0] == f->sub[0] ? f : fo::neg(sub[0]);
        break;
      case FormulaKind::And: out = simp::conj(std::move(sub)); break;
      case FormulaKind::Or: out = simp::disj(std::move(sub)); break;
      case FormulaKind::Exists: out = simp::exists(f->vars, sub[0]); break;
      case FormulaKind::Forall: out = simp::forall(f->vars, sub[0]); break;
      case FormulaKind::TC: {
        const int k = f->arity();
        std::vector<std::string> xs(f->vars.begin(), f->vars.begin() + k), ys(f->vars.begin() + k, f->vars.end());
        std::vector<std::string> us(f->args.begin(), f->args.begin() + k), vs(f->args.begin() + k, f->args.end());
        out = simp::tc(xs, ys, sub[0], us, vs, f->deterministic);
        break;
      }
      default: out = f;
    }
    memo.emplace(f.get(), out);
    return out;
  };
  return go(go, root);
}

StepMatrix StepMatrix::empty(std::vector<std::string> states, int k) {
  StepMatrix m;
  m.k = k;
  m.states = std::move(states);
  for (int i = 1; i <= k; ++i) {
    m.xs.push_back("x" + std::to_string(i));
    m.ys.push_back("y" + std::to_string(i));
  }
  m.entries.assign(m.states.size(), std::vector<FormulaPtr>(m.states.size(), fo::bottom()));
  return m;
}

bool StepMatrix::is_final(std::size_t p) const {
  return std::all_of(entries[p].begin(), entries[p].end(), [](const FormulaPtr& f) { return is_false(f); });
}

StepMatrix computation_closure(const StepMatrix& phi, bool deterministic, const std::vector<std::size_t>& order) {
  const std::size_t m = phi.size();
  if (phi.entries.size() != m) throw ContractError("step matrix is not square");
  std::set<std::string> taken(phi.xs.begin(), phi.xs.end());
  taken.insert(phi.ys.begin(), phi.ys.end());
  for (const auto& row : phi.entries) {
    if (row.size() != m) throw ContractError("step matrix is not square");
    for (const auto& f : row) taken.insert(f->free.begin(), f->free.end());
  }
  const auto ss = fresh_tuple("s", phi.k, taken);
  taken.insert(ss.begin(), ss.end());
  const auto ts = fresh_tuple("t", phi.k, taken);

  std::vector<std::size_t> seq;
  std::vector<bool> placed(m, false);
  for (std::size_t r : order) {
    if (r >= m) throw ContractError("elimination order names a state outside the matrix");
    if (!placed[r]) {
      placed[r] = true;
      seq.push_back(r);
    }
  }
  for (std::size_t r = 0; r < m; ++r)
    if (!placed[r]) seq.push_back(r);

  StepMatrix cur = phi;
  for (std::size_t r : seq) {
    // Paths through r: into r (ȳ renamed to s̄), any number of r-loops (s̄ to t̄), out of r.
    const FormulaPtr loop = cur.at(r, r);
    const bool no_loop = is_false(loop);
    const auto& mid = no_loop ? ss : ts;
    const FormulaPtr star = no_loop ? fo::top() : simp::tc(cur.xs, cur.ys, loop, ss, ts, deterministic);
    std::vector<FormulaPtr> into(m), out(m);
    for (std::size_t p = 0; p < m; ++p) {
      if (!is_false(cur.at(p, r)))
        into[p] = simp::exists(cur.ys, simp::conj({fo::tuple_eq(cur.ys, ss), cur.at(p, r)}));
      if (!is_false(cur.at(r, p)))
        out[p] = simp::exists(cur.xs, simp::conj({fo::tuple_eq(cur.xs, mid), cur.at(r, p)}));
    }
    std::vector<FormulaPtr> tail(m);
    for (std::size_t q = 0; q < m; ++q)
      if (out[q]) tail[q] = no_loop ? out[q] : simp::exists(ts, simp::conj({star, out[q]}));
    StepMatrix next = cur;
    for (std::size_t p = 0; p < m; ++p) {
      if (!into[p]) continue;
      for (std::size_t q = 0; q < m; ++q) {
        if (!tail[q]) continue;
        FormulaPtr via = simp::exists(ss, simp::conj({into[p], tail[q]}));
        next.at(p, q) = simp::disj({cur.at(p, q), via});
      }
    }
    cur = std::move(next);
  }
  return cur;
}

}  // namespace nestpeb
