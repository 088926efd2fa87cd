#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mincad/cad/concrete.hpp"
#include "mincad/cad/sampling.hpp"
#include "mincad/tree/cad_tree.hpp"

namespace mincad {

// One interval of the real line; a missing endpoint is infinite. A point is
// the closed interval [a, a].
struct Piece {
  std::optional<ExtVal> lo, hi;
  bool lo_closed = false, hi_closed = false;

  static Piece point(const ExtVal& v) { return {v, v, true, true}; }
  bool is_point() const;
};

// Finite union of disjoint, non-adjacent pieces in increasing order.
struct SaSet1D {
  std::vector<Piece> pieces;

  bool contains(const ExtVal& y) const;
  bool empty() const { return pieces.empty(); }
  SaSet1D complement() const;
  bool operator==(const SaSet1D& o) const;
};

// Canonical form: drops empty pieces, merges overlapping or touching ones.
// Raises IncomparableEndpoints for Indeterminate endpoints.
SaSet1D normalize_1d(std::vector<Piece> raw);
// Finite endpoints of the pieces, increasing, without duplicates.
std::vector<ExtVal> boundary(const SaSet1D& s);

// Membership predicate in x1.
Predicate to_predicate(const SaSet1D& s);

// Text form "[-2,0) u {1}", "(-inf,0]", "empty".
std::string to_string(const SaSet1D& s);
SaSet1D parse_set1d(const std::string& text);

// Minimum CAD of R adapted to the sets: sections at the union of the
// boundaries, labels by exact membership of one point per cell.
std::pair<ConcreteCad, CadTree> minimum_cad_1d(const std::vector<SaSet1D>& fam);

// Fiber {y : (x, y) in S}. Atoms must reduce to a + b*sqrt(q) with a, b, q
// univariate polynomials in y; the sign of such an atom is decided from the
// signs of a, b and a^2 - b^2 q (see fiber_sign). Atoms whose value is
// undefined at (x, y), such as a negative radicand or a zero divisor, are
// false. Raises NonPolynomialFiber for other shapes (nested radicals, radicals
// with different radicands, division by a polynomial in y) and
// IncomparableEndpoints when a boundary point is not in Q or Q(sqrt c).
SaSet1D fiber(const Predicate& pred, const Point& x);

// Sign of a + b*sqrt(q) for q >= 0 from sign(a), sign(b) and sign(a^2 - b^2 q).
int fiber_sign(int sa, int sb, int sd);

// Flat labels of the minimum CAD of the fibers above x.
using Behaviour = std::vector<Label>;
std::string to_string(const Behaviour& b);
Behaviour behaviour(const Family& fam, const Point& x);

struct ConstancyIssue {
  Index cell;
  std::vector<std::pair<Point, Behaviour>> seen;
};

struct BehaviourPartition {
  std::map<Behaviour, std::vector<Index>> classes;
  std::vector<ConstancyIssue> issues;
  bool constant() const { return issues.empty(); }
};

// Behaviour of every top cell of base at its first plan.audit samples; a cell
// is assigned the behaviour of its first sample and listed as an issue when
// later samples disagree.
BehaviourPartition behaviour_partition(const Family& fam, const ConcreteCad& base, const SamplePlan& plan = {});

}  // namespace mincad
