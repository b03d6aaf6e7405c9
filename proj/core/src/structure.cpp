#include "nestpeb/structure.hpp"

#include <algorithm>

#include "nestpeb/error.hpp"

namespace nestpeb {

void Structure::intern_graph(const Graph& g) {
  n_ = g.size();
  names_.resize(n_);
  labels_.resize(n_);
  for (NodeId i = 0; i < n_; ++i) {
    names_[i] = g.name(i);
    auto [it, fresh] = label_index_.emplace(g.label(i), static_cast<int>(label_names_.size()));
    if (fresh) label_names_.push_back(g.label(i));
    labels_[i] = it->second;
  }
  for (const auto& lab : g.edge_labels()) {
    edge_label_index_.emplace(lab, static_cast<int>(edge_label_names_.size()));
    edge_label_names_.push_back(lab);
  }
  out_.assign(edge_label_names_.size() * n_, kNoNode);
  in_.assign(edge_label_names_.size() * n_, kNoNode);
  for (const auto& e : g.edges()) {
    std::size_t l = static_cast<std::size_t>(edge_label_index_.at(e.label));
    NodeId& o = out_[l * n_ + e.src];
    NodeId& i = in_[l * n_ + e.dst];
    if (o != kNoNode || i != kNoNode)
      throw ContractError("graph violates edge-label injectivity at edge " + g.name(e.src) + " -" + e.label + "-> " +
                          g.name(e.dst));
    o = e.dst;
    i = e.src;
  }
}

Structure Structure::from_tree(const Tree& tree) {
  Structure s;
  s.kind_ = StructureKind::Tree;
  s.intern_graph(graph_from_tree(tree));
  s.parent_.resize(s.n_);
  s.child_number_.resize(s.n_);
  for (NodeId n = 0; n < s.n_; ++n) {
    s.parent_[n] = tree.parent(n);
    s.child_number_[n] = tree.child_number(n);
    s.max_children_ = std::max(s.max_children_, static_cast<int>(tree.node(n).children.size()));
  }
  s.child_table_.assign(s.n_ * static_cast<std::size_t>(s.max_children_), kNoNode);
  for (NodeId n = 0; n < s.n_; ++n) {
    const auto& kids = tree.node(n).children;
    for (std::size_t j = 0; j < kids.size(); ++j) s.child_table_[n * s.max_children_ + j] = kids[j];
  }
  return s;
}

Structure Structure::from_graph(const Graph& graph) {
  Structure s;
  s.kind_ = StructureKind::Graph;
  s.intern_graph(graph);
  s.parent_.assign(s.n_, kNoNode);
  s.child_number_.assign(s.n_, 0);
  return s;
}

int Structure::label_index(std::string_view name) const {
  auto it = label_index_.find(std::string(name));
  return it == label_index_.end() ? -1 : it->second;
}

int Structure::edge_label_index(std::string_view name) const {
  auto it = edge_label_index_.find(std::string(name));
  return it == edge_label_index_.end() ? -1 : it->second;
}

bool Structure::is_ancestor_or_self(NodeId ancestor, NodeId node) const {
  for (NodeId cur = node; cur != kNoNode; cur = parent_[cur])
    if (cur == ancestor) return true;
  return false;
}

}  // namespace nestpeb
