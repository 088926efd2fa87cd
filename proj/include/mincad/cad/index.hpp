#pragma once

#include <string>
#include <vector>

namespace mincad {

// Cell index (i1, ..., ik); the root is the empty index. An even last entry
// names a section, an odd one a sector.
using Index = std::vector<int>;

std::string to_string(const Index& I);  // "1.3.2", root "()"
Index parse_index(const std::string& text);
inline int level(const Index& I) { return static_cast<int>(I.size()); }
inline bool is_section(const Index& I) { return !I.empty() && I.back() % 2 == 0; }
inline bool is_sector(const Index& I) { return !I.empty() && I.back() % 2 == 1; }
inline Index parent(const Index& I) { return Index(I.begin(), I.end() - (I.empty() ? 0 : 1)); }
inline Index child(Index I, int j) {
  I.push_back(j);
  return I;
}

}  // namespace mincad
