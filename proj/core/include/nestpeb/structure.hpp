#pragma once

// Read-only, index-based view of a tree or a graph. The simulator and the formula
// evaluator both run on this so that one engine covers both kinds of input.

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "nestpeb/graph.hpp"
#include "nestpeb/terms.hpp"

namespace nestpeb {

enum class StructureKind { Tree, Graph };

class Structure {
 public:
  static Structure from_tree(const Tree& tree);
  static Structure from_graph(const Graph& graph);

  StructureKind kind() const noexcept { return kind_; }
  bool is_tree() const noexcept { return kind_ == StructureKind::Tree; }
  std::size_t size() const noexcept { return n_; }
  const std::string& node_name(NodeId n) const { return names_[n]; }

  /// Interned node-label index, -1 if the structure never uses `name`.
  int label_index(std::string_view name) const;
  int edge_label_index(std::string_view name) const;
  int label(NodeId n) const { return labels_[n]; }
  const std::string& label_name(int idx) const { return label_names_[idx]; }
  std::size_t edge_label_count() const noexcept { return edge_label_names_.size(); }
  const std::string& edge_label_name(int idx) const { return edge_label_names_[idx]; }

  /// Target of the outgoing edge labelled `edge_label` (an index), or kNoNode.
  NodeId out(NodeId n, int edge_label) const {
    return edge_label < 0 ? kNoNode : out_[static_cast<std::size_t>(edge_label) * n_ + n];
  }
  NodeId in(NodeId n, int edge_label) const {
    return edge_label < 0 ? kNoNode : in_[static_cast<std::size_t>(edge_label) * n_ + n];
  }

  // Tree-only accessors. On a graph, root() is kNoNode.
  NodeId root() const noexcept { return is_tree() ? 0 : kNoNode; }
  NodeId parent(NodeId n) const { return parent_[n]; }
  int child_number(NodeId n) const { return child_number_[n]; }
  NodeId child(NodeId n, int j) const {
    return j >= 1 && j <= max_children_ ? child_table_[n * static_cast<std::size_t>(max_children_) + (j - 1)] : kNoNode;
  }
  bool is_ancestor_or_self(NodeId ancestor, NodeId node) const;

 private:
  StructureKind kind_ = StructureKind::Tree;
  std::size_t n_ = 0;
  std::vector<std::string> names_;
  std::vector<int> labels_;
  std::vector<std::string> label_names_;
  std::unordered_map<std::string, int> label_index_;
  std::vector<std::string> edge_label_names_;
  std::unordered_map<std::string, int> edge_label_index_;
  std::vector<NodeId> out_, in_;
  std::vector<NodeId> parent_;
  std::vector<int> child_number_;
  int max_children_ = 0;
  std::vector<NodeId> child_table_;

  void intern_graph(const Graph& g);
};

}  // namespace nestpeb
