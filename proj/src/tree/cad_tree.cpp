#include "mincad/tree/cad_tree.hpp"

#include <functional>

#include "mincad/errors.hpp"

namespace mincad {

std::string to_string(const Label& l) {
  std::string out = "(";
  for (size_t i = 0; i < l.size(); ++i) {
    if (i) out += ",";
    out += l[i] ? "1" : "0";
  }
  return out + ")";
}

const CadTree::Node* CadTree::find(const Index& I) const {
  const Node* n = &root_;
  for (int j : I) {
    if (j < 1 || static_cast<size_t>(j) > n->children.size()) return nullptr;
    n = &n->children[j - 1];
  }
  return n;
}

CadTree::Node* CadTree::find(const Index& I) {
  return const_cast<Node*>(static_cast<const CadTree*>(this)->find(I));
}

int CadTree::arity(const Index& I) const {
  const Node* n = find(I);
  if (!n) raise(ErrorKind::BadParameter, "no node " + to_string(I));
  return static_cast<int>(n->children.size()) / 2;
}

const Label& CadTree::leaf_label(const Index& I) const {
  const Node* n = find(I);
  if (!n || !n->children.empty()) raise(ErrorKind::BadParameter, "no leaf " + to_string(I));
  return n->label;
}

std::vector<Index> CadTree::nodes() const {
  std::vector<Index> out;
  Index cur;
  std::function<void(const Node&)> walk = [&](const Node& n) {
    out.push_back(cur);
    for (size_t j = 0; j < n.children.size(); ++j) {
      cur.push_back(static_cast<int>(j) + 1);
      walk(n.children[j]);
      cur.pop_back();
    }
  };
  walk(root_);
  return out;
}

std::vector<Index> CadTree::leaves() const {
  std::vector<Index> out;
  for (auto& I : nodes())
    if (find(I)->children.empty() && static_cast<int>(I.size()) == depth_) out.push_back(I);
  return out;
}

size_t CadTree::leaf_count() const { return leaves().size(); }

std::string CadTree::dump() const {
  std::string out;
  for (const auto& I : nodes()) {
    const Node* n = find(I);
    out += std::string(2 * I.size(), ' ') + to_string(I);
    if (n->children.empty() && static_cast<int>(I.size()) == depth_) out += " " + to_string(n->label);
    else out += " u=" + std::to_string(n->children.size() / 2);
    out += "\n";
  }
  return out;
}

std::string CadTree::dot(const std::string& header_comment) const {
  std::string out;
  if (!header_comment.empty()) out += "// " + header_comment + "\n";
  out += "digraph cadtree {\n  node [shape=box, fontname=\"monospace\"];\n";
  auto id = [](const Index& I) { return "\"" + to_string(I) + "\""; };
  for (const auto& I : nodes()) {
    const Node* n = find(I);
    if (n->children.empty()) {
      bool all1 = !n->label.empty(), all0 = true;
      for (auto b : n->label) {
        all1 = all1 && b;
        all0 = all0 && !b;
      }
      std::string color = all1 ? "green" : all0 ? "red" : "orange";
      out += "  " + id(I) + " [label=\"" + to_string(I) + "\\n" + to_string(n->label) + "\", color=" + color + "];\n";
    } else {
      out += "  " + id(I) + " [label=\"" + to_string(I) + "\"];\n";
    }
    if (!I.empty()) out += "  " + id(parent(I)) + " -> " + id(I) + ";\n";
  }
  return out + "}\n";
}

std::vector<std::string> validate_tree(const CadTree& t) {
  std::vector<std::string> issues;
  for (const auto& I : t.nodes()) {
    const auto* n = t.find(I);
    int lvl = level(I);
    if (n->children.empty()) {
      if (lvl < t.depth()) issues.push_back("short leaf at node " + to_string(I));
      else if (static_cast<int>(n->label.size()) != t.width())
        issues.push_back("label width " + std::to_string(n->label.size()) + " at leaf " + to_string(I));
    } else {
      if (n->children.size() % 2 == 0) issues.push_back("even arity at node " + to_string(I));
      if (lvl >= t.depth()) issues.push_back("node below depth at " + to_string(I));
      if (!n->label.empty()) issues.push_back("stored label on internal node " + to_string(I));
    }
  }
  return issues;
}

}  // namespace mincad
