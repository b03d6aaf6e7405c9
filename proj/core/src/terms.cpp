#include "nestpeb/terms.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "nestpeb/error.hpp"

namespace nestpeb {

RankedAlphabet::RankedAlphabet(std::vector<Symbol> symbols) : symbols_(std::move(symbols)) {
  if (symbols_.empty()) throw ContractError("ranked alphabet must be nonempty");
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    const Symbol& s = symbols_[i];
    if (s.name.empty()) throw ContractError("symbol with empty name");
    if (s.rank < 0) throw ContractError("symbol '" + s.name + "' has negative rank");
    if (!index_.emplace(s.name, static_cast<int>(i)).second)
      throw ContractError("duplicate symbol '" + s.name + "'");
    max_rank_ = std::max(max_rank_, s.rank);
  }
}

std::optional<int> RankedAlphabet::rank_of(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return symbols_[it->second].rank;
}

std::string RankedAlphabet::to_string() const {
  std::string out;
  for (const Symbol& s : symbols_) {
    if (!out.empty()) out += ' ';
    out += s.name + ":" + std::to_string(s.rank);
  }
  return out;
}

RankedAlphabet parse_alphabet(std::string_view text) {
  std::vector<Symbol> symbols;
  std::size_t i = 0;
  auto is_sep = [](char c) { return c == ',' || std::isspace(static_cast<unsigned char>(c)); };
  while (i < text.size()) {
    char c = text[i];
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    if (is_sep(c)) {
      ++i;
      continue;
    }
    std::size_t start = i;
    while (i < text.size() && !is_sep(text[i]) && text[i] != '#') ++i;
    std::string_view entry = text.substr(start, i - start);
    auto colon = entry.rfind(':');
    if (colon == std::string_view::npos || colon == 0 || colon + 1 == entry.size())
      throw ParseError("expected name:rank, got '" + std::string(entry) + "'", start);
    Symbol sym;
    sym.name = std::string(entry.substr(0, colon));
    std::string_view digits = entry.substr(colon + 1);
    if (!std::all_of(digits.begin(), digits.end(), [](char d) { return std::isdigit(static_cast<unsigned char>(d)); }))
      throw ParseError("rank must be a nonnegative integer in '" + std::string(entry) + "'", start + colon + 1);
    sym.rank = std::stoi(std::string(digits));
    symbols.push_back(std::move(sym));
  }
  if (symbols.empty()) throw ParseError("empty alphabet", 0);
  try {
    return RankedAlphabet(std::move(symbols));
  } catch (const ContractError& e) {
    throw ParseError(e.what(), 0);
  }
}

NodeId Tree::child(NodeId id, int j) const {
  const auto& kids = nodes_[id].children;
  if (j < 1 || j > static_cast<int>(kids.size())) return kNoNode;
  return kids[j - 1];
}

bool Tree::is_ancestor_or_self(NodeId ancestor, NodeId node) const {
  for (NodeId cur = node; cur != kNoNode; cur = nodes_[cur].parent)
    if (cur == ancestor) return true;
  return false;
}

std::string Tree::to_string() const { return nodes_.empty() ? std::string() : to_string(0); }

std::string Tree::to_string(NodeId subtree) const {
  std::string out;
  // Iterative to survive very deep monadic trees.
  struct Frame {
    NodeId node;
    std::size_t next;
  };
  std::vector<Frame> stack{{subtree, 0}};
  out += nodes_[subtree].label;
  while (!stack.empty()) {
    Frame& f = stack.back();
    const auto& kids = nodes_[f.node].children;
    if (f.next == kids.size()) {
      if (!kids.empty()) out += ')';
      stack.pop_back();
      continue;
    }
    out += f.next == 0 ? '(' : ',';
    NodeId c = kids[f.next++];
    out += nodes_[c].label;
    stack.push_back({c, 0});
  }
  return out;
}

bool operator==(const Tree& a, const Tree& b) {
  if (a.nodes_.size() != b.nodes_.size()) return false;
  for (std::size_t i = 0; i < a.nodes_.size(); ++i) {
    if (a.nodes_[i].label != b.nodes_[i].label || a.nodes_[i].children != b.nodes_[i].children) return false;
  }
  return true;
}

class TreeBuilder {
 public:
  static void append(Tree& dst, const Tree& src, NodeId parent, int child_number) {
    const NodeId offset = static_cast<NodeId>(dst.nodes_.size());
    for (const Tree::Node& n : src.nodes_) {
      Tree::Node copy = n;
      for (NodeId& c : copy.children) c += offset;
      if (copy.parent == kNoNode) {
        copy.parent = parent;
        copy.child_number = child_number;
      } else {
        copy.parent += offset;
      }
      dst.nodes_.push_back(std::move(copy));
    }
  }
  static std::vector<Tree::Node>& nodes(Tree& t) { return t.nodes_; }
};

Tree Tree::make(std::string label, std::span<const Tree> children) {
  Tree t;
  t.nodes_.push_back(Node{std::move(label), kNoNode, 0, {}});
  int j = 1;
  for (const Tree& c : children) {
    NodeId at = static_cast<NodeId>(t.nodes_.size());
    t.nodes_[0].children.push_back(at);
    TreeBuilder::append(t, c, 0, j++);
  }
  return t;
}

namespace {

class TermParser {
 public:
  TermParser(std::string_view text, const RankedAlphabet* alphabet) : text_(text), alphabet_(alphabet) {}

  Tree parse() {
    Tree t;
    auto& nodes = TreeBuilder::nodes(t);
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("empty term", pos_);
    // Explicit stack so that deep terms do not overflow the call stack.
    struct Open {
      NodeId node;
      std::size_t label_pos;
    };
    std::vector<Open> open;
    for (;;) {
      skip_ws();
      std::size_t label_pos = pos_;
      std::string label = read_symbol();
      NodeId id = static_cast<NodeId>(nodes.size());
      Tree::Node n;
      n.label = label;
      if (!open.empty()) {
        n.parent = open.back().node;
        n.child_number = static_cast<int>(nodes[open.back().node].children.size()) + 1;
        nodes[open.back().node].children.push_back(id);
      }
      nodes.push_back(std::move(n));
      skip_ws();
      if (pos_ < text_.size() && text_[pos_] == '(') {
        ++pos_;
        open.push_back({id, label_pos});
        continue;
      }
      check_arity(id, label_pos, nodes);
      // Close as many parentheses as present.
      for (;;) {
        skip_ws();
        if (open.empty()) {
          if (pos_ != text_.size()) throw ParseError("unexpected trailing input", pos_);
          return t;
        }
        if (pos_ >= text_.size()) throw ParseError("unexpected end of input, expected ',' or ')'", pos_);
        char c = text_[pos_];
        if (c == ',') {
          ++pos_;
          break;
        }
        if (c == ')') {
          ++pos_;
          Open o = open.back();
          open.pop_back();
          check_arity(o.node, o.label_pos, nodes);
          continue;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
      }
    }
  }

 private:
  static bool is_delim(char c) {
    return c == '(' || c == ')' || c == ',' || std::isspace(static_cast<unsigned char>(c));
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  std::string read_symbol() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && !is_delim(text_[pos_])) ++pos_;
    if (start == pos_) throw ParseError("expected a symbol", start);
    std::string name(text_.substr(start, pos_ - start));
    if (alphabet_ && !alphabet_->contains(name)) throw ParseError("unknown symbol '" + name + "'", start);
    return name;
  }

  void check_arity(NodeId id, std::size_t label_pos, const std::vector<Tree::Node>& nodes) {
    const auto& n = nodes[id];
    int arity = static_cast<int>(n.children.size());
    if (alphabet_) {
      int rank = *alphabet_->rank_of(n.label);
      if (rank != arity)
        throw ParseError("arity mismatch: '" + n.label + "' has rank " + std::to_string(rank) + " but " +
                             std::to_string(arity) + " argument(s) were given",
                         label_pos);
    } else {
      auto [it, fresh] = inferred_.emplace(n.label, arity);
      if (!fresh && it->second != arity)
        throw ParseError("symbol '" + n.label + "' used with inconsistent arities", label_pos);
    }
  }

  std::string_view text_;
  const RankedAlphabet* alphabet_;
  std::size_t pos_ = 0;
  std::unordered_map<std::string, int> inferred_;
};

}  // namespace

Tree parse_term(std::string_view text, const RankedAlphabet& alphabet) {
  return TermParser(text, &alphabet).parse();
}

Tree parse_term(std::string_view text) { return TermParser(text, nullptr).parse(); }

RankedAlphabet infer_alphabet(const Tree& tree) {
  std::vector<Symbol> symbols;
  std::unordered_map<std::string, int> seen;
  for (const auto& n : tree.nodes()) {
    int arity = static_cast<int>(n.children.size());
    auto [it, fresh] = seen.emplace(n.label, arity);
    if (fresh) symbols.push_back({n.label, arity});
    else if (it->second != arity) throw ContractError("symbol '" + n.label + "' used with inconsistent arities");
  }
  return RankedAlphabet(std::move(symbols));
}

std::vector<NodeId> preorder(const Tree& tree) {
  std::vector<NodeId> order;
  order.reserve(tree.size());
  if (tree.size() == 0) return order;
  std::vector<NodeId> stack{tree.root()};
  while (!stack.empty()) {
    NodeId n = stack.back();
    stack.pop_back();
    order.push_back(n);
    const auto& kids = tree.node(n).children;
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
  }
  return order;
}

RankedAlphabet monadic_alphabet(const std::vector<std::string>& base) {
  std::vector<Symbol> symbols;
  for (const auto& s : base) symbols.push_back({s, 1});
  symbols.push_back({std::string(kEndMarker), 0});
  return RankedAlphabet(std::move(symbols));
}

Tree encode_string(std::span<const std::string> word, const std::vector<std::string>& base) {
  for (const auto& s : word)
    if (std::find(base.begin(), base.end(), s) == base.end())
      throw ContractError("symbol '" + s + "' is not in the base alphabet");
  Tree t;
  auto& nodes = TreeBuilder::nodes(t);
  nodes.reserve(word.size() + 1);
  for (std::size_t i = 0; i <= word.size(); ++i) {
    Tree::Node n;
    n.label = i < word.size() ? word[i] : std::string(kEndMarker);
    if (i > 0) {
      n.parent = static_cast<NodeId>(i - 1);
      n.child_number = 1;
      nodes[i - 1].children.push_back(static_cast<NodeId>(i));
    }
    nodes.push_back(std::move(n));
  }
  return t;
}

Tree encode_string(std::string_view word, const std::vector<std::string>& base) {
  std::vector<std::string> symbols;
  for (char c : word) symbols.emplace_back(1, c);
  return encode_string(std::span<const std::string>(symbols), base);
}

std::optional<std::vector<std::string>> decode_string(const Tree& tree) {
  std::vector<std::string> word;
  NodeId cur = tree.root();
  for (;;) {
    const auto& n = tree.node(cur);
    if (n.children.empty()) {
      if (n.label != kEndMarker) return std::nullopt;
      return word;
    }
    if (n.children.size() != 1 || n.label == kEndMarker) return std::nullopt;
    word.push_back(n.label);
    cur = n.children[0];
  }
}

}  // namespace nestpeb
