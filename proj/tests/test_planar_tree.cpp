#include "mcshane/planar_tree.hpp"

#include <algorithm>
#include <set>

#include "doctest.h"

using namespace mcshane;

namespace {

TreeShape plain_shape(int n) { return TreeShape{n, {}}; }

// N = 6 with a single right-blocked vertex at the first root edge.
TreeShape one_blocked_shape() {
  TreeShape s;
  s.root_degree = 6;
  s.block_predicate = [](const EdgeAddress& e) {
    if (e.root_index == 0 && e.word.empty()) return Blocking::right_blocked;
    return Blocking::none;
  };
  return s;
}

}  // namespace

TEST_CASE("edge address basics") {
  EdgeAddress root{2, ""};
  CHECK(root.depth() == 1);
  CHECK(root.key() == "2:");

  EdgeAddress e = root.child(Branch::L).child(Branch::R);
  CHECK(e.depth() == 3);
  CHECK(e.word == "LR");
  CHECK(e.key() == "2:LR");
  CHECK(e.parent() == root.child(Branch::L));
  CHECK(e.parent().parent() == root);
  CHECK_THROWS_AS(root.parent(), AddressError);
}

TEST_CASE("lexicographic order") {
  EdgeAddress a{0, "R"};
  EdgeAddress b{1, "L"};
  CHECK(lex_compare(a, b) == std::strong_ordering::less);
  CHECK(lex_compare(b, a) == std::strong_ordering::greater);
  CHECK(lex_compare(a, a) == std::strong_ordering::equal);

  // A proper prefix sorts before its extensions; L before R.
  CHECK(lex_compare({0, "L"}, {0, "LL"}) == std::strong_ordering::less);
  CHECK(lex_compare({0, "L"}, {0, "R"}) == std::strong_ordering::less);
  CHECK(lex_compare({0, "LR"}, {0, "RL"}) == std::strong_ordering::less);
}

TEST_CASE("validate_address and children on the unblocked tree") {
  TreeShape shape = plain_shape(6);
  CHECK_NOTHROW(validate_address(shape, {0, "LRLR"}));
  CHECK_NOTHROW(validate_address(shape, {5, ""}));
  CHECK_THROWS_AS(validate_address(shape, {6, ""}), AddressError);
  CHECK_THROWS_AS(validate_address(shape, {-1, ""}), AddressError);
  CHECK_THROWS_AS(validate_address(shape, {0, "LX"}), AddressError);

  auto kids = children(shape, {3, "R"});
  REQUIRE(kids.size() == 2);
  CHECK(kids[0].word == "RL");  // L child first
  CHECK(kids[1].word == "RR");
}

TEST_CASE("blocked branches are rejected and trimmed") {
  TreeShape shape;
  shape.root_degree = 4;
  shape.block_predicate = [](const EdgeAddress& e) {
    if (e.root_index == 0 && e.word.empty()) return Blocking::right_blocked;
    if (e.root_index == 1 && e.word.empty()) return Blocking::left_blocked;
    if (e.root_index == 2 && e.word == "L") return Blocking::both_blocked;
    return Blocking::none;
  };

  CHECK_NOTHROW(validate_address(shape, {0, "L"}));
  CHECK_THROWS_AS(validate_address(shape, {0, "R"}), AddressError);
  CHECK_THROWS_AS(validate_address(shape, {1, "L"}), AddressError);
  CHECK_NOTHROW(validate_address(shape, {1, "R"}));
  CHECK_THROWS_AS(validate_address(shape, {2, "LL"}), AddressError);
  CHECK_THROWS_AS(validate_address(shape, {2, "LR"}), AddressError);

  CHECK(children(shape, {0, ""}).size() == 1);
  CHECK(children(shape, {0, ""})[0].word == "L");
  CHECK(children(shape, {1, ""})[0].word == "R");
  CHECK(children(shape, {2, "L"}).empty());
  CHECK(children(shape, {3, ""}).size() == 2);
}

TEST_CASE("sphere sizes and planar order") {
  TreeShape shape = plain_shape(6);
  for (int n = 1; n <= 6; ++n) {
    auto level = sphere(shape, n);
    CHECK(static_cast<int>(level.size()) == 6 * (1 << (n - 1)));
    CHECK(std::is_sorted(level.begin(), level.end(),
                         [](const EdgeAddress& a, const EdgeAddress& b) {
                           return lex_compare(a, b) < 0;
                         }));
  }
  CHECK_THROWS_AS(sphere(shape, 0), AddressError);

  // One right-blocked depth-1 vertex removes exactly one depth-2 edge.
  CHECK(sphere(one_blocked_shape(), 2).size() == 11);
}

TEST_CASE("path_edge for root regions") {
  TreeShape shape = plain_shape(6);
  RationalPathSpec right{RegionId::root_region(2), Branch::R};
  RationalPathSpec left{RegionId::root_region(2), Branch::L};

  // Side R starts at the next root edge and turns L forever.
  CHECK(path_edge(shape, right, 1) == EdgeAddress{3, ""});
  CHECK(path_edge(shape, right, 3) == EdgeAddress{3, "LL"});
  // Side L starts at the region's own root edge and turns R forever.
  CHECK(path_edge(shape, left, 1) == EdgeAddress{2, ""});
  CHECK(path_edge(shape, left, 4) == EdgeAddress{2, "RRR"});

  // The cut region wraps back to root 0.
  RationalPathSpec wrap{RegionId::root_region(5), Branch::R};
  CHECK(path_edge(shape, wrap, 2) == EdgeAddress{0, "L"});

  CHECK_THROWS_AS(path_edge(shape, right, 0), AddressError);
  RationalPathSpec bad{RegionId::root_region(6), Branch::R};
  CHECK_THROWS_AS(path_edge(shape, bad, 1), AddressError);
}

TEST_CASE("path_edge for edge regions") {
  TreeShape shape = plain_shape(6);
  RegionId region = RegionId::edge_region({1, "LR"});
  RationalPathSpec right{region, Branch::R};
  RationalPathSpec left{region, Branch::L};

  // Prefixes first ...
  CHECK(path_edge(shape, right, 1) == EdgeAddress{1, ""});
  CHECK(path_edge(shape, right, 2) == EdgeAddress{1, "L"});
  CHECK(path_edge(shape, right, 3) == EdgeAddress{1, "LR"});
  // ... then one turn toward the side and constant turns away from it.
  CHECK(path_edge(shape, right, 4) == EdgeAddress{1, "LRR"});
  CHECK(path_edge(shape, right, 6) == EdgeAddress{1, "LRRLL"});
  CHECK(path_edge(shape, left, 4) == EdgeAddress{1, "LRL"});
  CHECK(path_edge(shape, left, 6) == EdgeAddress{1, "LRLRR"});
}

TEST_CASE("path_edge reports blocked rays") {
  TreeShape shape = one_blocked_shape();
  RationalPathSpec spec{RegionId::edge_region({0, ""}), Branch::R};
  CHECK_NOTHROW(path_edge(shape, spec, 1));
  CHECK_THROWS_AS(path_edge(shape, spec, 2), PathUndefinedError);
}

TEST_CASE("enumerate_regions") {
  TreeShape shape = plain_shape(6);
  auto regions = enumerate_regions(shape, 3);
  CHECK(regions.size() == 6u + 6u + 12u + 24u);

  // Root regions first, then edge regions sphere by sphere.
  for (int i = 0; i < 6; ++i) {
    CHECK(regions[static_cast<size_t>(i)].kind == RegionId::Kind::root);
    CHECK(regions[static_cast<size_t>(i)].root_index == i);
    CHECK(regions[static_cast<size_t>(i)].depth() == 0);
  }
  int prev_depth = 0;
  std::set<std::string> keys;
  for (const RegionId& r : regions) {
    CHECK(r.depth() >= prev_depth);
    prev_depth = r.depth();
    CHECK(keys.insert(r.key()).second);  // all distinct
  }
  CHECK(prev_depth == 3);

  CHECK(enumerate_regions(shape, 0).size() == 6u);
  CHECK_THROWS_AS(enumerate_regions(shape, -1), AddressError);
}
