#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mincad/cad/concrete.hpp"
#include "mincad/cad/sampling.hpp"
#include "mincad/tree/cad_tree.hpp"

namespace mincad {

struct StructureIssue {
  Index base;                   // cylinder base (root for level-1 values)
  std::optional<Point> sample;  // where the problem was observed
  std::string what;
};

// Sample-based audit: strictly increasing level-1 values, section arities, and
// decidable strictly ordered section values at audit samples of every base.
std::vector<StructureIssue> check_cad_structure(const ConcreteCad& cad, const SamplePlan& plan = {});

// Labelled tree of the CAD for a family. Each leaf is labelled at its first
// sample and checked at plan.audit samples. Raises AdaptednessViolation when
// the samples disagree and NoRationalWitness when a leaf has no rational point.
CadTree build_tree(const ConcreteCad& cad, const Family& fam, const SamplePlan& plan = {});

// Induced CAD of R^k; raises BadLevel unless 1 <= k <= dim.
ConcreteCad project(const ConcreteCad& cad, int k);

// CAD of R^(dim+1) with an empty cylinder over every leaf.
ConcreteCad cylinder_product(const ConcreteCad& cad);

// Splits sector I by a new section function. Raises SectionOutOfRange when the
// function leaves the sector at a sampled base point.
ConcreteCad refine_with_section(const ConcreteCad& cad, const Index& I, const Expr& f, const SamplePlan& plan = {});

}  // namespace mincad
