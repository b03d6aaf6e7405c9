#pragma once

#include <string_view>

#include "nestpeb/formula.hpp"

namespace nestpeb {

struct FormulaParseOptions {
  /// Graph mode / local FO: `leq` is rejected.
  bool allow_leq = true;
};

/// Grammar, loosest to tightest binding:
///   f   := or ('->' f | '<->' or)?          implication is right associative
///   or  := and ('|' and)*
///   and := un ('&' un)*
///   un  := '!' un | ('E'|'A') var '.' f | '(' f ')' | atom | tc
///   atom:= lab_σ(x) | edgI(x,y) | edge_σ(x,y) | leq(x,y) | x=y | x!=y | true | false
///   tc  := '[' ('tc'|'dtc') '(' x1 .. xk ')' '(' y1 .. yk ')' ':' f ']' '(' u1 .. uk ',' v1 .. vk ')'
/// Variables match [a-z][a-z0-9]*. Implications are desugared to !a | b.
FormulaPtr parse_formula(std::string_view text, const FormulaParseOptions& opts = {});

}  // namespace nestpeb
