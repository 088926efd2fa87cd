#pragma once

#include <map>
#include <optional>
#include <vector>

#include "mincad/cad/concrete.hpp"

namespace mincad {

// Budget knobs shared by sampling, liftability and fingerprints.
struct SamplePlan {
  int audit = 3;                // samples checked per leaf when labelling
  int m_max = 20;               // approach offsets 2^-1 .. 2^-m_max
  Rat tau = Rat(1, 1) / Rat(mpz_class(1) << 40);  // divided-difference tolerance
  int d_max = 3;                // highest derivative order compared for finite classes
  int fingerprint_samples = 5;  // samples per base cell hashed into a fingerprint
  unsigned max_bits = 256;      // interval precision ceiling
  int pool_limit = 24;          // rational samples kept per cell

  std::vector<Rat> offsets() const;
};

// Rational coordinates strictly inside (lo, hi); absent bounds are infinite.
// The first entry is the preferred one: 0 on the whole line, bound -/+ 1 on a
// half line, midpoint or simplest rational otherwise.
std::vector<Rat> coordinate_candidates(const std::optional<ExtVal>& lo, const std::optional<ExtVal>& hi);

// Cached pools of rational points per cell. The referenced CAD must outlive it.
class Sampler {
 public:
  explicit Sampler(const ConcreteCad& cad, SamplePlan plan = {});

  const ConcreteCad& cad() const { return cad_; }
  const SamplePlan& plan() const { return plan_; }

  // Rational points of the cell, preferred point first; may be empty.
  const std::vector<Point>& pool(const Index& I);
  // First pool point; raises NoRationalWitness when the pool is empty.
  Point sample(const Index& I);

 private:
  std::vector<Point> build_pool(const Index& I);
  const ConcreteCad& cad_;
  SamplePlan plan_;
  std::map<Index, std::vector<Point>> cache_;
  std::optional<std::map<Index, std::vector<Point>>> grid_cells_;  // circle points by level-2 cell
};

// Cell of level |p| containing p; nullopt when some section value is undecidable there.
std::optional<Index> locate(const ConcreteCad& cad, const Point& p);

// Preferred rational point of I; raises NoRationalWitness.
Point cell_sample(const ConcreteCad& cad, const Index& I);

// Preferred rational point of I lying above the point base of parent(I).
std::optional<Point> point_over(const ConcreteCad& cad, const Index& I, const Point& base);

}  // namespace mincad
