#include <doctest.h>

#include "mincad/errors.hpp"
#include "mincad/tree/cad_tree.hpp"
#include "mincad/tree/rewrite.hpp"

using namespace mincad;

namespace {

CadTree::Node leaf(uint8_t bit) { return {{}, Label{bit}}; }

CadTree::Node node(std::vector<CadTree::Node> ch) { return {std::move(ch), {}}; }

// Depth-2 tree: level-1 children a, b, c; each child is a column (0,1,0).
CadTree columns() {
  CadTree t(2, 1);
  auto col = node({leaf(0), leaf(1), leaf(0)});
  t.root() = node({col, col, col});
  return t;
}

}  // namespace

TEST_CASE("indices print and parse") {
  CHECK(to_string(Index{1, 3, 2}) == "1.3.2");
  CHECK(to_string(Index{}) == "()");
  CHECK(parse_index("1.3.2") == Index{1, 3, 2});
  CHECK(is_section(Index{1, 2}));
  CHECK(is_sector(Index{3}));
}

TEST_CASE("tree navigation and dumps") {
  auto t = columns();
  CHECK(t.leaf_count() == 9);
  CHECK(t.arity({}) == 1);
  CHECK(t.leaf_label({2, 2}) == Label{1});
  CHECK(t.nodes().size() == 13);
  CHECK(validate_tree(t).empty());
  CHECK(t.dump().find("2.2 (1)") != std::string::npos);
  CHECK(t.dot().find("digraph") != std::string::npos);
}

TEST_CASE("validation reports malformed trees") {
  CadTree t(2, 1);
  t.root() = node({leaf(0), leaf(1)});
  auto msgs = validate_tree(t);
  CHECK_FALSE(msgs.empty());
}

TEST_CASE("psi relabels around a pivot") {
  CHECK(psi({2}, {1, 3}) == Index{1, 3});
  CHECK(psi({2}, {2, 3}) == Index{1, 3});
  CHECK(psi({2}, {3, 1}) == Index{1, 1});
  CHECK(psi({2}, {5}) == Index{3});
  CHECK(psi({1, 2}, {2, 4}) == Index{2, 4});
  CHECK(psi({1, 2}, {1, 4}) == Index{1, 2});
  CHECK(prefix({1, 2, 3}, 2) == Index{1, 2});
}

TEST_CASE("tree reductions apply to identical sibling triples") {
  auto t = columns();
  auto rs = tree_reductions(t);
  REQUIRE(rs.size() == 1);
  CHECK(rs[0].pivot == Index{2});
  auto r = apply_tree_reduction(t, rs[0]);
  CHECK(r.leaf_count() == 3);
  CHECK(tree_reductions(r).empty());
  CHECK_THROWS_AS(apply_tree_reduction(t, {{2, 2}}), Error);
}
