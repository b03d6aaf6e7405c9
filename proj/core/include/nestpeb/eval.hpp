#pragma once

// Brute-force model checking of formulas on trees and graphs.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "nestpeb/error.hpp"
#include "nestpeb/formula.hpp"
#include "nestpeb/structure.hpp"

namespace nestpeb {

using Valuation = std::map<std::string, NodeId>;

enum class FunctionalityScope {
  Global,     // every source tuple is checked once the closure is first needed
  PathLocal,  // only tuples reached from the queried source; successors computed lazily
};

struct EvalOptions {
  bool check_functionality = true;  // for TC nodes carrying the deterministic flag
  FunctionalityScope scope = FunctionalityScope::Global;
};

struct FunctionalityReport {
  bool functional = true;
  std::vector<NodeId> source;
  std::vector<NodeId> first, second;  // two distinct successors of `source`
  std::string describe() const;
};

class FunctionalityError : public Error {
 public:
  explicit FunctionalityError(FunctionalityReport report)
      : Error("deterministic transitive closure over a non-functional body: " + report.describe()),
        report_(std::move(report)) {}
  const FunctionalityReport& report() const noexcept { return report_; }

 private:
  FunctionalityReport report_;
};

/// Evaluates formulas on one structure. Results of quantifier and TC nodes are memoised
/// per valuation of their free variables, so shared subformulas are evaluated once.
class Evaluator {
 public:
  explicit Evaluator(const Structure& structure, EvalOptions opts = {});
  ~Evaluator();
  Evaluator(const Evaluator&) = delete;
  Evaluator& operator=(const Evaluator&) = delete;

  /// Throws ContractError if `val` misses a free variable of `f` or maps outside the structure.
  bool eval(const FormulaPtr& f, const Valuation& val);

  FunctionalityReport check_functional(const FormulaPtr& body, const std::vector<std::string>& xs,
                                       const std::vector<std::string>& ys, const Valuation& outer);

  const Structure& structure() const noexcept { return *st_; }

 private:
  struct Impl;
  const Structure* st_;
  std::unique_ptr<Impl> impl_;
};

bool eval(const FormulaPtr& f, const Structure& structure, const Valuation& val = {}, const EvalOptions& opts = {});

FunctionalityReport check_functional(const FormulaPtr& body, const Structure& structure,
                                     const std::vector<std::string>& xs, const std::vector<std::string>& ys,
                                     const Valuation& outer = {});

}  // namespace nestpeb
