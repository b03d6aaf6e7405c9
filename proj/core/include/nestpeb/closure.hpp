#pragma once

// Step matrices over automaton states and their computation closure by state elimination.

#include <string>
#include <vector>

#include "nestpeb/formula.hpp"

namespace nestpeb {

/// Q×Q matrix of formulas; entry (p,q) relates the head tuple `xs` before a step from p
/// to the tuple `ys` after arriving in q. Other free variables are parameters that the
/// closure leaves untouched.
struct StepMatrix {
  int k = 1;
  std::vector<std::string> states;
  std::vector<std::string> xs, ys;
  std::vector<std::vector<FormulaPtr>> entries;  // never null; bottom() for no step

  /// All entries false; tuple variables x1..xk and y1..yk.
  static StepMatrix empty(std::vector<std::string> states, int k);

  std::size_t size() const noexcept { return states.size(); }
  const FormulaPtr& at(std::size_t p, std::size_t q) const { return entries[p][q]; }
  FormulaPtr& at(std::size_t p, std::size_t q) { return entries[p][q]; }
  /// A state with an all-false row.
  bool is_final(std::size_t p) const;
};

/// Entry (p,q) of the result holds iff a nonempty path of steps leads from (p, xs) to
/// (q, ys). States are eliminated in `order` (indices; missing ones follow in ascending
/// order). With `deterministic` every emitted closure carries the deterministic flag, which
/// is sound when the matrix is functional and its rows are exclusive.
StepMatrix computation_closure(const StepMatrix& phi, bool deterministic, const std::vector<std::size_t>& order = {});

/// Constant-aware constructors used by the closure: they absorb true/false, flatten nested
/// connectives and drop vacuous quantifiers (structures are nonempty).
namespace simp {
FormulaPtr conj(std::vector<FormulaPtr> fs);
FormulaPtr disj(std::vector<FormulaPtr> fs);
FormulaPtr exists(const std::vector<std::string>& xs, FormulaPtr body);
FormulaPtr forall(const std::vector<std::string>& xs, FormulaPtr body);
/// Closure with a false body is the identity relation on tuples.
FormulaPtr tc(const std::vector<std::string>& xs, const std::vector<std::string>& ys, FormulaPtr body,
              const std::vector<std::string>& us, const std::vector<std::string>& vs, bool deterministic);
}  // namespace simp

/// Applies the simp rules bottom-up to a whole formula.
FormulaPtr simplify(const FormulaPtr& f);

}  // namespace nestpeb
