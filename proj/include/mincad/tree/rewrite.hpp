#pragma once

#include <vector>

#include "mincad/tree/cad_tree.hpp"

namespace mincad {

// First k entries of I, or I itself when it is shorter.
Index prefix(const Index& I, int k);

// Relabelling map for the even pivot A of level k: I - e_k when p_k(I) = A,
// I - 2e_k when p_k(I) = A + m e_k for m >= 1, I otherwise.
Index psi(const Index& A, const Index& I);

struct TreeReduction {
  Index pivot;
  bool operator==(const TreeReduction& o) const { return pivot == o.pivot; }
  bool operator<(const TreeReduction& o) const { return pivot < o.pivot; }
};

// True when the three siblings A - e_k, A, A + e_k carry identical subtrees.
bool reduction_applies(const CadTree& t, const Index& A);

// Every even node satisfying the label condition, in preorder.
std::vector<TreeReduction> tree_reductions(const CadTree& t);

// Raises NotReducible when the condition fails at A.
CadTree apply_tree_reduction(const CadTree& t, const TreeReduction& r);

}  // namespace mincad
