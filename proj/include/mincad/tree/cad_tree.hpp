#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mincad/cad/index.hpp"

namespace mincad {

// Membership bits of one leaf, one entry per set of the family.
using Label = std::vector<std::uint8_t>;
std::string to_string(const Label& l);  // "(0,1,0)"

// Labelled rooted odd-ary tree. Children are stored explicitly; indices are
// positional and recomputed on every traversal. Internal labels are derived
// from the leaves and never stored.
class CadTree {
 public:
  struct Node {
    std::vector<Node> children;
    Label label;  // leaves only
    bool operator==(const Node& o) const { return children == o.children && label == o.label; }
  };

  CadTree() = default;
  CadTree(int depth, int width) : depth_(depth), width_(width) {}

  int depth() const { return depth_; }
  int width() const { return width_; }
  Node& root() { return root_; }
  const Node& root() const { return root_; }

  // nullptr when I is not a node.
  const Node* find(const Index& I) const;
  Node* find(const Index& I);
  bool contains(const Index& I) const { return find(I) != nullptr; }
  // u for a node with 2u+1 children.
  int arity(const Index& I) const;
  const Label& leaf_label(const Index& I) const;

  std::vector<Index> nodes() const;  // preorder, root first
  std::vector<Index> leaves() const;
  size_t leaf_count() const;

  // Indented dump: one line per node, "I u=m" for internal nodes and "I [bits]" for leaves.
  std::string dump() const;
  // DOT with green leaves when every bit is 1, red when every bit is 0.
  std::string dot(const std::string& header_comment = "") const;

  bool operator==(const CadTree& o) const {
    return depth_ == o.depth_ && width_ == o.width_ && root_ == o.root_;
  }

 private:
  int depth_ = 0;
  int width_ = 0;
  Node root_;
};

// Structural violations; empty when the tree is valid.
std::vector<std::string> validate_tree(const CadTree& t);

}  // namespace mincad
