#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mincad/algebra/expr.hpp"
#include "mincad/cad/index.hpp"

namespace mincad {

// Regularity class of the section functions: a finite r, infinity, or analytic.
struct RegClass {
  enum class Kind { Finite, Infinity, Omega };
  Kind kind = Kind::Finite;
  int r = 0;

  static RegClass finite(int r) { return {Kind::Finite, r}; }
  static RegClass infinity() { return {Kind::Infinity, 0}; }
  static RegClass omega() { return {Kind::Omega, 0}; }
  static RegClass parse(const std::string& text);  // "0", "2", "inf", "omega"
  std::string str() const;
  bool operator==(const RegClass& o) const { return kind == o.kind && r == o.r; }
};

// Geometric CAD of R^dim. Level-1 sections are exact values; every cell I of
// level 1..dim-1 owns the ordered section functions of the cylinder above it.
struct ConcreteCad {
  int dim = 1;
  RegClass cls;
  std::vector<ExtVal> level1;
  std::map<Index, std::vector<Expr>> sections;

  int u(const Index& base) const;  // number of sections above base; root gives level1.size()
  int child_count(const Index& base) const { return 2 * u(base) + 1; }
  bool valid_index(const Index& I) const;
  std::vector<Index> cells(int level) const;  // enumeration order
  std::vector<Index> leaves() const { return cells(dim); }
  size_t leaf_count() const { return leaves().size(); }
  // Raises InvalidCad when the base has no cylinder entry.
  const std::vector<Expr>& cylinder(const Index& base) const;
};

// Values of the sections above base at the point b (length = level(base)).
// Entries are Indeterminate when evaluation fails or is inexact.
std::vector<ExtVal> section_values(const ConcreteCad& cad, const Index& base, const Point& b);

// Ordered list of named semi-algebraic sets of a common ambient space.
struct Family {
  std::vector<std::string> names;
  std::vector<Predicate> sets;

  size_t size() const { return sets.size(); }
  Family complement() const;
};

// Parsed CADSPEC document: named CADs and named sets.
struct CadDocument {
  std::vector<std::pair<std::string, ConcreteCad>> cads;
  std::vector<std::pair<std::string, Predicate>> sets;

  bool has_cad(const std::string& name) const;
  const ConcreteCad& cad(const std::string& name) const;
  const Predicate& set(const std::string& name) const;
  // Empty names select every set in document order.
  Family family(const std::vector<std::string>& names = {}) const;
};

}  // namespace mincad
