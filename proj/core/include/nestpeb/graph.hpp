#pragma once

// Labelled directed graphs with the local injectivity condition: no node has two
// outgoing, or two incoming, edges carrying the same label.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nestpeb/terms.hpp"

namespace nestpeb {

class Graph {
 public:
  struct Edge {
    NodeId src;
    std::string label;
    NodeId dst;
    friend bool operator==(const Edge&, const Edge&) = default;
  };

  NodeId add_node(std::string name, std::string label);
  void add_edge(NodeId src, std::string label, NodeId dst);

  std::size_t size() const noexcept { return names_.size(); }
  const std::string& name(NodeId n) const { return names_.at(n); }
  const std::string& label(NodeId n) const { return labels_.at(n); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  std::optional<NodeId> find(std::string_view name) const;

  /// Edge labels in first-use order.
  std::vector<std::string> edge_labels() const;

  /// `node id label` lines followed by `edge src label dst` lines.
  std::string to_string() const;

 private:
  std::vector<std::string> names_;
  std::vector<std::string> labels_;
  std::vector<Edge> edges_;
};

Graph parse_graph(std::string_view text);

/// Child edges labelled "1", "2", ...; node names are preorder indices.
Graph graph_from_tree(const Tree& tree);

struct GraphViolation {
  enum class Kind { OutInjectivity, InInjectivity, Disconnected, Empty };
  Kind kind;
  NodeId node = kNoNode;
  std::string label;
  std::string message;
};

/// Empty result means the graph is valid (nonempty, weakly connected, injective).
std::vector<GraphViolation> validate_graph(const Graph& g);

enum class Family { Grid, Torus, Bracelet };
std::optional<Family> parse_family(std::string_view name);
std::string_view family_name(Family f);

/// Nodes are named `r_c`, row-major, all labelled "o"; edges "h" go right and "v" go down.
Graph build_grid(int width, int height);
/// Grid plus wraparound h-edges (last column to first) and v-edges (last row to first).
Graph build_torus(int width, int height);
/// Removes the chosen leaf (a preorder index) and redirects its incoming edge to the root.
Graph build_bracelet(const Tree& tree, NodeId leaf);

}  // namespace nestpeb
