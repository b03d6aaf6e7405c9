#pragma once

// Ranked alphabets and trees (terms) over them.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace nestpeb {

/// Preorder index of a node. The root is 0.
using NodeId = std::uint32_t;
inline constexpr NodeId kNoNode = static_cast<NodeId>(-1);

/// Name of the nullary end marker used by the monadic string encoding.
inline constexpr std::string_view kEndMarker = "⊥";

struct Symbol {
  std::string name;
  int rank = 0;

  friend bool operator==(const Symbol&, const Symbol&) = default;
};

class RankedAlphabet {
 public:
  RankedAlphabet() = default;
  /// Throws ContractError if `symbols` is empty, has a duplicate name or a negative rank.
  explicit RankedAlphabet(std::vector<Symbol> symbols);

  const std::vector<Symbol>& symbols() const noexcept { return symbols_; }
  std::size_t size() const noexcept { return symbols_.size(); }
  int max_rank() const noexcept { return max_rank_; }

  std::optional<int> rank_of(std::string_view name) const;
  bool contains(std::string_view name) const { return rank_of(name).has_value(); }

  /// Renders as `a:0 b:0 c:2`.
  std::string to_string() const;

  friend bool operator==(const RankedAlphabet& a, const RankedAlphabet& b) {
    return a.symbols_ == b.symbols_;
  }

 private:
  std::vector<Symbol> symbols_;
  std::unordered_map<std::string, int> index_;
  int max_rank_ = 0;
};

/// Parses `name:rank` entries separated by newlines, commas or blanks; `#` starts a comment.
RankedAlphabet parse_alphabet(std::string_view text);

/// Immutable ranked tree. Nodes are stored in preorder.
class Tree {
 public:
  struct Node {
    std::string label;
    NodeId parent = kNoNode;
    int child_number = 0;  // 0 for the root, j for the j-th child
    std::vector<NodeId> children;
  };

  std::size_t size() const noexcept { return nodes_.size(); }
  NodeId root() const noexcept { return 0; }
  const Node& node(NodeId id) const { return nodes_.at(id); }
  const std::vector<Node>& nodes() const noexcept { return nodes_; }

  const std::string& label(NodeId id) const { return nodes_[id].label; }
  NodeId parent(NodeId id) const { return nodes_[id].parent; }
  int child_number(NodeId id) const { return nodes_[id].child_number; }
  /// j-th child (1-based) or kNoNode.
  NodeId child(NodeId id, int j) const;
  bool is_ancestor_or_self(NodeId ancestor, NodeId node) const;

  /// Term syntax, e.g. `c(a,b)`.
  std::string to_string() const;
  std::string to_string(NodeId subtree) const;

  friend bool operator==(const Tree& a, const Tree& b);

  /// Builds a tree from a label and already-built subtrees.
  static Tree make(std::string label, std::span<const Tree> children);

 private:
  friend class TreeBuilder;
  std::vector<Node> nodes_;
};

/// Parses `sym` | `sym(t1,...,tn)`. Whitespace is ignored. Validates labels and arities
/// against `alphabet`; errors are ParseError carrying the offset.
Tree parse_term(std::string_view text, const RankedAlphabet& alphabet);

/// Parses a term and infers the alphabet from the arities used (inconsistent arities throw).
Tree parse_term(std::string_view text);
RankedAlphabet infer_alphabet(const Tree& tree);

/// Nodes in preorder. Equal to 0..size-1 by construction of Tree.
std::vector<NodeId> preorder(const Tree& tree);

/// The alphabet Σ ∪ {⊥} with every base symbol of rank 1.
RankedAlphabet monadic_alphabet(const std::vector<std::string>& base);

/// a1...an becomes a1(a2(...an(⊥))). Throws ContractError if a symbol is not in `base`.
Tree encode_string(std::span<const std::string> word, const std::vector<std::string>& base);
/// Convenience overload for single-character symbols.
Tree encode_string(std::string_view word, const std::vector<std::string>& base);
/// Inverse of encode_string on monadic trees; nullopt if `tree` is not monadic.
std::optional<std::vector<std::string>> decode_string(const Tree& tree);

}  // namespace nestpeb
