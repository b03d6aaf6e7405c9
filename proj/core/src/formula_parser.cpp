#include "nestpeb/formula_parser.hpp"

#include <cctype>

#include "nestpeb/error.hpp"

namespace nestpeb {

namespace {

bool is_lower(char c) { return c >= 'a' && c <= 'z'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

class Parser {
 public:
  Parser(std::string_view text, const FormulaParseOptions& opts) : s_(text), opts_(opts) {}

  FormulaPtr parse() {
    FormulaPtr f = implication();
    skip();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return f;
  }

 private:
  std::string_view s_;
  FormulaParseOptions opts_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& why) const { throw ParseError(why, pos_); }

  void skip() {
    while (pos_ < s_.size()) {
      if (std::isspace(static_cast<unsigned char>(s_[pos_]))) {
        ++pos_;
      } else if (s_[pos_] == '#') {
        while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  bool peek(std::string_view tok) {
    skip();
    return s_.substr(pos_, tok.size()) == tok;
  }

  bool accept(std::string_view tok) {
    if (!peek(tok)) return false;
    pos_ += tok.size();
    return true;
  }

  void expect(std::string_view tok) {
    if (!accept(tok)) fail("expected '" + std::string(tok) + "'");
  }

  std::string variable() {
    skip();
    if (pos_ >= s_.size() || !is_lower(s_[pos_])) fail("expected a variable");
    std::size_t b = pos_;
    while (pos_ < s_.size() && (is_lower(s_[pos_]) || is_digit(s_[pos_]))) ++pos_;
    std::string v(s_.substr(b, pos_ - b));
    if (v == "true" || v == "false") {
      pos_ = b;
      fail("'" + v + "' is reserved");
    }
    return v;
  }

  // Variables separated by blanks and/or commas, up to `close`.
  std::vector<std::string> var_list(char close) {
    std::vector<std::string> out;
    while (true) {
      skip();
      if (pos_ < s_.size() && s_[pos_] == close) break;
      if (!out.empty()) accept(",");
      out.push_back(variable());
    }
    return out;
  }

  FormulaPtr implication() {
    FormulaPtr lhs = disjunction();
    if (accept("->")) return fo::implies(lhs, implication());
    if (accept("<->")) {
      FormulaPtr rhs = disjunction();
      return fo::conj(fo::implies(lhs, rhs), fo::implies(rhs, lhs));
    }
    return lhs;
  }

  FormulaPtr disjunction() {
    std::vector<FormulaPtr> parts{conjunction()};
    while (accept("|")) parts.push_back(conjunction());
    return fo::disj(std::move(parts));
  }

  FormulaPtr conjunction() {
    std::vector<FormulaPtr> parts{unary()};
    while (accept("&")) parts.push_back(unary());
    return fo::conj(std::move(parts));
  }

  FormulaPtr unary() {
    skip();
    if (peek("!") && !peek("!=")) {
      ++pos_;
      return fo::neg(unary());
    }
    if (pos_ < s_.size() && (s_[pos_] == 'E' || s_[pos_] == 'A')) {
      bool ex = s_[pos_] == 'E';
      ++pos_;
      std::string v = variable();
      expect(".");
      FormulaPtr body = implication();
      return ex ? fo::exists(v, body) : fo::forall(v, body);
    }
    if (accept("(")) {
      FormulaPtr f = implication();
      expect(")");
      return f;
    }
    if (peek("[")) return closure();
    return atom();
  }

  FormulaPtr closure() {
    expect("[");
    bool det;
    if (accept("dtc")) det = true;
    else if (accept("tc")) det = false;
    else fail("expected 'tc' or 'dtc'");
    expect("(");
    auto xs = var_list(')');
    expect(")");
    expect("(");
    auto ys = var_list(')');
    expect(")");
    if (xs.empty()) fail("transitive closure needs at least one variable");
    if (xs.size() != ys.size()) fail("transitive closure tuples differ in length");
    expect(":");
    FormulaPtr body = implication();
    expect("]");
    expect("(");
    std::size_t args_at = pos_;
    auto args = var_list(')');
    expect(")");
    if (args.size() != 2 * xs.size()) {
      pos_ = args_at;
      fail("transitive closure of arity " + std::to_string(xs.size()) + " needs " + std::to_string(2 * xs.size()) +
           " arguments");
    }
    std::vector<std::string> us(args.begin(), args.begin() + xs.size());
    std::vector<std::string> vs(args.begin() + xs.size(), args.end());
    try {
      return fo::tc(xs, ys, body, us, vs, det);
    } catch (const ContractError& e) {
      fail(e.what());
    }
  }

  std::string symbol_until_paren() {
    std::size_t b = pos_;
    while (pos_ < s_.size() && s_[pos_] != '(' && !std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ == b) fail("expected a symbol");
    return std::string(s_.substr(b, pos_ - b));
  }

  std::pair<std::string, std::string> two_args() {
    expect("(");
    std::string x = variable();
    expect(",");
    std::string y = variable();
    expect(")");
    return {x, y};
  }

  FormulaPtr atom() {
    skip();
    std::size_t at = pos_;
    auto rest = s_.substr(pos_);
    if (rest.substr(0, 4) == "true" && (rest.size() == 4 || !(is_lower(rest[4]) || is_digit(rest[4])))) {
      pos_ += 4;
      return fo::top();
    }
    if (rest.substr(0, 5) == "false" && (rest.size() == 5 || !(is_lower(rest[5]) || is_digit(rest[5])))) {
      pos_ += 5;
      return fo::bottom();
    }
    if (rest.substr(0, 4) == "lab_") {
      pos_ += 4;
      std::string sym = symbol_until_paren();
      expect("(");
      std::string x = variable();
      expect(")");
      return fo::lab(sym, x);
    }
    if (rest.substr(0, 5) == "edge_") {
      pos_ += 5;
      std::string sym = symbol_until_paren();
      auto [x, y] = two_args();
      return fo::edge(sym, x, y);
    }
    if (rest.substr(0, 3) == "edg" && rest.size() > 3 && is_digit(rest[3])) {
      std::size_t e = 3;
      while (e < rest.size() && is_digit(rest[e])) ++e;
      std::size_t after = e;
      while (after < rest.size() && std::isspace(static_cast<unsigned char>(rest[after]))) ++after;
      if (after < rest.size() && rest[after] == '(') {
        int i = std::stoi(std::string(rest.substr(3, e - 3)));
        if (i < 1) fail("child index must be at least 1");
        pos_ += e;
        auto [x, y] = two_args();
        return fo::edg(i, x, y);
      }
    }
    if (rest.substr(0, 3) == "leq") {
      std::size_t after = 3;
      while (after < rest.size() && std::isspace(static_cast<unsigned char>(rest[after]))) ++after;
      if (after < rest.size() && rest[after] == '(') {
        if (!opts_.allow_leq) fail("leq is not available in graph mode");
        pos_ += 3;
        auto [x, y] = two_args();
        return fo::leq(x, y);
      }
    }
    if (pos_ >= s_.size()) fail("unexpected end of input");
    if (!is_lower(s_[pos_])) fail("expected a formula");
    std::string x = variable();
    if (accept("!=")) return fo::neg(fo::eq(x, variable()));
    if (accept("=")) return fo::eq(x, variable());
    pos_ = at;
    fail("expected an atom");
  }
};

}  // namespace

FormulaPtr parse_formula(std::string_view text, const FormulaParseOptions& opts) { return Parser(text, opts).parse(); }

}  // namespace nestpeb
