#include "mincad/tree/rewrite.hpp"

#include "mincad/errors.hpp"

namespace mincad {

Index prefix(const Index& I, int k) {
  if (static_cast<int>(I.size()) <= k) return I;
  return Index(I.begin(), I.begin() + k);
}

Index psi(const Index& A, const Index& I) {
  int k = level(A);
  if (level(I) < k) return I;
  for (int i = 0; i < k - 1; ++i)
    if (I[i] != A[i]) return I;
  Index out = I;
  if (I[k - 1] == A[k - 1]) out[k - 1] -= 1;
  else if (I[k - 1] > A[k - 1]) out[k - 1] -= 2;
  return out;
}

bool reduction_applies(const CadTree& t, const Index& A) {
  if (A.empty() || A.back() % 2 != 0) return false;
  const auto* p = t.find(parent(A));
  if (!p) return false;
  size_t j = static_cast<size_t>(A.back());  // 1-based position of A
  if (j + 1 > p->children.size()) return false;
  return p->children[j - 2] == p->children[j - 1] && p->children[j - 1] == p->children[j];
}

std::vector<TreeReduction> tree_reductions(const CadTree& t) {
  std::vector<TreeReduction> out;
  for (const auto& I : t.nodes())
    if (reduction_applies(t, I)) out.push_back({I});
  return out;
}

CadTree apply_tree_reduction(const CadTree& t, const TreeReduction& r) {
  if (!reduction_applies(t, r.pivot)) raise(ErrorKind::NotReducible, "no tree reduction at " + to_string(r.pivot));
  CadTree out = t;
  auto* p = out.find(parent(r.pivot));
  auto pos = p->children.begin() + (r.pivot.back() - 1);
  p->children.erase(pos, pos + 2);
  return out;
}

}  // namespace mincad
