#include "nestpeb/graph.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "nestpeb/error.hpp"

namespace nestpeb {

NodeId Graph::add_node(std::string name, std::string label) {
  if (find(name)) throw ContractError("duplicate node name '" + name + "'");
  names_.push_back(std::move(name));
  labels_.push_back(std::move(label));
  return static_cast<NodeId>(names_.size() - 1);
}

void Graph::add_edge(NodeId src, std::string label, NodeId dst) {
  if (src >= size() || dst >= size()) throw ContractError("edge endpoint out of range");
  edges_.push_back({src, std::move(label), dst});
}

std::optional<NodeId> Graph::find(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return static_cast<NodeId>(i);
  return std::nullopt;
}

std::vector<std::string> Graph::edge_labels() const {
  std::vector<std::string> out;
  for (const auto& e : edges_)
    if (std::find(out.begin(), out.end(), e.label) == out.end()) out.push_back(e.label);
  return out;
}

std::string Graph::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < names_.size(); ++i) os << "node " << names_[i] << ' ' << labels_[i] << '\n';
  for (const auto& e : edges_) os << "edge " << names_[e.src] << ' ' << e.label << ' ' << names_[e.dst] << '\n';
  return os.str();
}

Graph parse_graph(std::string_view text) {
  Graph g;
  std::size_t offset = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  bool seen_edge = false;
  while (std::getline(in, line)) {
    std::size_t line_offset = offset;
    offset += line.size() + 1;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw)) continue;
    if (kw == "node") {
      if (seen_edge) throw ParseError("node lines must precede edge lines", line_offset);
      std::string name, label, extra;
      if (!(ls >> name >> label) || (ls >> extra)) throw ParseError("expected 'node <id> <label>'", line_offset);
      if (g.find(name)) throw ParseError("duplicate node '" + name + "'", line_offset);
      g.add_node(name, label);
    } else if (kw == "edge") {
      seen_edge = true;
      std::string src, label, dst, extra;
      if (!(ls >> src >> label >> dst) || (ls >> extra))
        throw ParseError("expected 'edge <src> <label> <dst>'", line_offset);
      auto s = g.find(src);
      auto d = g.find(dst);
      if (!s) throw ParseError("unknown node '" + src + "'", line_offset);
      if (!d) throw ParseError("unknown node '" + dst + "'", line_offset);
      g.add_edge(*s, label, *d);
    } else {
      throw ParseError("unknown keyword '" + kw + "'", line_offset);
    }
  }
  return g;
}

Graph graph_from_tree(const Tree& tree) {
  Graph g;
  for (NodeId n = 0; n < tree.size(); ++n) g.add_node(std::to_string(n), tree.label(n));
  for (NodeId n = 0; n < tree.size(); ++n) {
    const auto& kids = tree.node(n).children;
    for (std::size_t j = 0; j < kids.size(); ++j) g.add_edge(n, std::to_string(j + 1), kids[j]);
  }
  return g;
}

std::vector<GraphViolation> validate_graph(const Graph& g) {
  std::vector<GraphViolation> out;
  if (g.size() == 0) {
    out.push_back({GraphViolation::Kind::Empty, kNoNode, "", "graph has no nodes"});
    return out;
  }
  std::set<std::pair<NodeId, std::string>> outs, ins;
  for (const auto& e : g.edges()) {
    if (!outs.emplace(e.src, e.label).second)
      out.push_back({GraphViolation::Kind::OutInjectivity, e.src, e.label,
                     "node " + g.name(e.src) + " has two outgoing '" + e.label + "' edges"});
    if (!ins.emplace(e.dst, e.label).second)
      out.push_back({GraphViolation::Kind::InInjectivity, e.dst, e.label,
                     "node " + g.name(e.dst) + " has two incoming '" + e.label + "' edges"});
  }
  // Weak connectivity by union-find.
  std::vector<NodeId> parent(g.size());
  for (NodeId i = 0; i < g.size(); ++i) parent[i] = i;
  auto root = [&](NodeId x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& e : g.edges()) parent[root(e.src)] = root(e.dst);
  NodeId r0 = root(0);
  for (NodeId i = 1; i < g.size(); ++i) {
    if (root(i) != r0) {
      out.push_back({GraphViolation::Kind::Disconnected, i, "",
                     "node " + g.name(i) + " is not connected to node " + g.name(0)});
      break;
    }
  }
  return out;
}

std::optional<Family> parse_family(std::string_view name) {
  if (name == "grid") return Family::Grid;
  if (name == "torus") return Family::Torus;
  if (name == "bracelet") return Family::Bracelet;
  return std::nullopt;
}

std::string_view family_name(Family f) {
  switch (f) {
    case Family::Grid: return "grid";
    case Family::Torus: return "torus";
    case Family::Bracelet: return "bracelet";
  }
  return "?";
}

namespace {

Graph grid_nodes(int width, int height) {
  if (width < 1 || height < 1) throw ContractError("grid dimensions must be at least 1");
  Graph g;
  for (int r = 0; r < height; ++r)
    for (int c = 0; c < width; ++c) g.add_node(std::to_string(r) + "_" + std::to_string(c), "o");
  return g;
}

}  // namespace

Graph build_grid(int width, int height) {
  Graph g = grid_nodes(width, height);
  auto at = [&](int r, int c) { return static_cast<NodeId>(r * width + c); };
  for (int r = 0; r < height; ++r)
    for (int c = 0; c + 1 < width; ++c) g.add_edge(at(r, c), "h", at(r, c + 1));
  for (int r = 0; r + 1 < height; ++r)
    for (int c = 0; c < width; ++c) g.add_edge(at(r, c), "v", at(r + 1, c));
  return g;
}

Graph build_torus(int width, int height) {
  Graph g = grid_nodes(width, height);
  auto at = [&](int r, int c) { return static_cast<NodeId>(r * width + c); };
  for (int r = 0; r < height; ++r)
    for (int c = 0; c < width; ++c) g.add_edge(at(r, c), "h", at(r, (c + 1) % width));
  for (int r = 0; r < height; ++r)
    for (int c = 0; c < width; ++c) g.add_edge(at(r, c), "v", at((r + 1) % height, c));
  return g;
}

Graph build_bracelet(const Tree& tree, NodeId leaf) {
  if (leaf >= tree.size()) throw ContractError("bracelet leaf out of range");
  if (!tree.node(leaf).children.empty()) throw ContractError("bracelet node " + std::to_string(leaf) + " is not a leaf");
  if (leaf == tree.root()) throw ContractError("bracelet leaf must not be the root");
  Graph g;
  std::vector<NodeId> rename(tree.size(), kNoNode);
  for (NodeId n = 0; n < tree.size(); ++n) {
    if (n == leaf) continue;
    rename[n] = g.add_node(std::to_string(n), tree.label(n));
  }
  for (NodeId n = 0; n < tree.size(); ++n) {
    if (n == leaf) continue;
    const auto& kids = tree.node(n).children;
    for (std::size_t j = 0; j < kids.size(); ++j) {
      NodeId dst = kids[j] == leaf ? rename[tree.root()] : rename[kids[j]];
      g.add_edge(rename[n], std::to_string(j + 1), dst);
    }
  }
  return g;
}

}  // namespace nestpeb
