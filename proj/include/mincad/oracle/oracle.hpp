#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "mincad/cad/concrete.hpp"
#include "mincad/cad/sampling.hpp"
#include "mincad/reduction/reduction.hpp"

namespace mincad {

// K-th Bell number (number of set partitions of K elements).
mpz_class bell(int K);

// Partition of the leaves of a reference CAD, as a restricted growth string:
// block[i] is the block of leaf i in enumeration order, and every block id is
// at most one more than the largest id before it.
struct Coarsening {
  std::vector<int> block;

  size_t block_count() const;
  std::vector<std::vector<size_t>> blocks() const;  // leaf indices per block, in block order
  bool discrete() const { return block_count() == block.size(); }
  // Canonical key: blocks as sorted leaf lists, sorted.
  std::vector<std::vector<size_t>> canonical() const;
  bool operator==(const Coarsening& o) const { return block == o.block; }
};

// Whether every block of fine is inside a block of coarse.
bool refines(const Coarsening& fine, const Coarsening& coarse);

// Streams every set partition of the leaves except the discrete one, in
// restricted-growth order. sink returns false to stop. Without a cap, raises
// TooLarge above 12 leaves; with a cap, stops after cap partitions. Returns the
// number streamed.
size_t enumerate_coarsenings(const ConcreteCad& cad, const std::function<bool(const Coarsening&)>& sink,
                             std::optional<size_t> cap = std::nullopt);

struct CoarseningVerdict {
  bool accepted = false;
  bool flagged = false;  // rejected only because some gluing test was Unknown
  std::string reason;
};

// Whether the partition is the cell set of an adapted CAD coarser than cad:
// label homogeneity, cylindricity, cylinder shape and exact gluing.
CoarseningVerdict check_coarsening(const ConcreteCad& cad, const Coarsening& c, const Family& fam,
                                   const SamplePlan& plan = {});
bool is_cad_coarsening(const ConcreteCad& cad, const Coarsening& c, const Family& fam, const SamplePlan& plan = {});

// Coarse CAD whose cells are the blocks; section formulas over merged bases
// are glued with piecewise guards on the fine cells. Raises NotReducible when
// the partition has no CAD shape.
ConcreteCad materialize(const ConcreteCad& cad, const Coarsening& c);

// Partitions with CAD shape and label-homogeneous top blocks, built level by
// level (kept sections per column). Gluing is not checked here.
std::vector<Coarsening> structured_candidates(const ConcreteCad& cad, const Family& fam,
                                              size_t limit = 1000000);

enum class EnumerationMode { Auto, Exhaustive, Pruned };

struct Poset {
  std::vector<Coarsening> elements;  // elements[0] is the reference CAD itself
  std::vector<std::vector<bool>> leq;  // leq[i][j]: element j is coarser than or equal to element i
  std::vector<Coarsening> inconclusive;  // rejected only because of Unknown gluing
  size_t candidates = 0;
  bool pruned = false;

  std::vector<std::pair<size_t, size_t>> covers() const;  // transitive reduction of the strict order
  size_t find(const Coarsening& c) const;  // elements.size() when absent
};

// Exact poset of adapted CAD coarsenings below cad. Auto enumerates all set
// partitions up to 9 leaves and structured candidates above. Raises TooLarge
// above 12 leaves in Exhaustive mode.
Poset poset_below(const ConcreteCad& cad, const Family& fam, const SamplePlan& plan = {},
                  EnumerationMode mode = EnumerationMode::Auto);

struct CrossReport {
  bool nodes_agree = true;
  bool edges_agree = true;
  bool order_agree = true;
  size_t inconclusive = 0;
  std::vector<std::string> mismatches;
  bool agree() const { return nodes_agree && edges_agree && order_agree; }
};

// Compares a reduction DAG rooted at the poset's reference CAD with the
// poset: node sets, DAG edges against covering pairs, reachability against
// the order. Nodes matching an inconclusive partition are left out.
CrossReport cross_validate(const ReductionDag& dag, const Poset& poset);

// Coarsening of the start CAD reached by a DAG node.
Coarsening node_coarsening(const ReductionDag& dag, size_t node);

std::string poset_dot(const Poset& poset, const std::string& header_comment = "");

}  // namespace mincad
