#pragma once

// First-order formulas over trees and graphs with k-ary (deterministic) transitive
// closure. Formulas are immutable and shared, so large formulas are DAGs in memory.

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace nestpeb {

enum class FormulaKind {
  True,
  False,
  Lab,     // lab_σ(x)
  Edg,     // edg_i(x,y): y is the i-th child of x
  EdgeG,   // edge_σ(x,y): graph edge labelled σ from x to y
  Leq,     // x is an ancestor of y or equal to it
  Eq,
  Not,
  And,
  Or,
  Exists,
  Forall,
  TC,
};

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  FormulaKind kind = FormulaKind::True;
  std::string symbol;             // Lab, EdgeG
  int child = 0;                  // Edg
  std::vector<std::string> vars;  // atom arguments; quantified variable; TC binders x̄ then ȳ
  std::vector<std::string> args;  // TC: applied tuples ū then v̄
  std::vector<FormulaPtr> sub;    // operands; quantifier/TC body is sub[0]
  bool deterministic = false;     // TC only
  std::vector<std::string> free;  // sorted free variables, computed on construction

  int arity() const noexcept { return static_cast<int>(vars.size() / 2); }
  const FormulaPtr& body() const { return sub.at(0); }
  bool is_atom() const noexcept {
    return kind == FormulaKind::Lab || kind == FormulaKind::Edg || kind == FormulaKind::EdgeG ||
           kind == FormulaKind::Leq || kind == FormulaKind::Eq;
  }
  bool is_free(std::string_view v) const;
};

namespace fo {
FormulaPtr top();
FormulaPtr bottom();
FormulaPtr lab(std::string symbol, std::string x);
FormulaPtr edg(int i, std::string x, std::string y);
FormulaPtr edge(std::string symbol, std::string x, std::string y);
FormulaPtr leq(std::string x, std::string y);
FormulaPtr eq(std::string x, std::string y);
FormulaPtr neg(FormulaPtr f);
FormulaPtr conj(std::vector<FormulaPtr> fs);
FormulaPtr disj(std::vector<FormulaPtr> fs);
FormulaPtr conj(FormulaPtr a, FormulaPtr b);
FormulaPtr disj(FormulaPtr a, FormulaPtr b);
FormulaPtr implies(FormulaPtr a, FormulaPtr b);
FormulaPtr exists(std::string x, FormulaPtr body);
FormulaPtr forall(std::string x, FormulaPtr body);
FormulaPtr exists(const std::vector<std::string>& xs, FormulaPtr body);
FormulaPtr forall(const std::vector<std::string>& xs, FormulaPtr body);
/// Throws ContractError unless xs, ys have equal nonzero length, are 2k distinct names,
/// and us, vs have that length too.
FormulaPtr tc(std::vector<std::string> xs, std::vector<std::string> ys, FormulaPtr body, std::vector<std::string> us,
              std::vector<std::string> vs, bool deterministic);
/// Conjunction of xs[i] = ys[i].
FormulaPtr tuple_eq(const std::vector<std::string>& xs, const std::vector<std::string>& ys);
}  // namespace fo

/// ψ(x̄,ȳ) ∧ ∀z̄ (ψ(x̄,z̄) → ȳ = z̄), with z̄ fresh. Functional in x̄,ȳ by construction.
FormulaPtr functionalized(const FormulaPtr& psi, const std::vector<std::string>& xs,
                          const std::vector<std::string>& ys);

/// Renames free occurrences of `from` to `to`. Throws ContractError if `to` would be captured.
FormulaPtr rename_free(const FormulaPtr& f, const std::string& from, const std::string& to);

/// Concrete syntax accepted by parse_formula; fully parenthesised where precedence requires it.
std::string to_string(const FormulaPtr& f);

/// True iff every TC node lies under an even number of negations.
bool check_positive(const FormulaPtr& f);
/// Negation normal form: negations only on atoms (TC subformulas keep inner negations
/// but a negated TC stays as Not(TC)).
FormulaPtr nnf(const FormulaPtr& f);

struct FormulaStats {
  std::uint64_t dag_size = 0;   // distinct nodes
  std::uint64_t tree_size = 0;  // nodes of the unfolded tree, saturating
  int tc_depth = 0;             // maximal nesting of TC nodes
  int tc_count = 0;             // distinct TC nodes
  int max_tc_arity = 0;
  bool all_tc_deterministic = true;
  bool uses_leq = false;
};
FormulaStats formula_stats(const FormulaPtr& f);

}  // namespace nestpeb
