#include "mcshane/flip_dynamics.hpp"

#include <array>
#include <string>
#include <variant>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"

using namespace mcshane;

using Vec = std::array<long long, 2>;

TEST_CASE("slope canonicalization") {
  Slope s = Slope::from_vector(-2, -3);
  CHECK(s.p == 2);
  CHECK(s.q == 3);
  CHECK(s.orientation == -1);
  CHECK(s.vector() == Vec{-2, -3});
  CHECK(s.to_string() == "2/3-");
  CHECK(s.same_line(Slope::from_vector(2, 3)));
  CHECK_FALSE(s == Slope::from_vector(2, 3));

  Slope horizontal = Slope::from_vector(-1, 0);
  CHECK(horizontal.p == 1);
  CHECK(horizontal.q == 0);
  CHECK(horizontal.orientation == -1);

  CHECK_THROWS_AS(Slope::from_vector(0, 0), SurfaceError);
  CHECK_THROWS_AS(Slope::from_vector(2, 4), SurfaceError);
}

TEST_CASE("intersection numbers") {
  CHECK(intersection_number(Slope::from_vector(1, 0),
                            Slope::from_vector(0, 1)) == 1);
  CHECK(intersection_number(Slope::from_vector(2, 3),
                            Slope::from_vector(1, 1)) == 1);
  CHECK(intersection_number(Slope::from_vector(2, 3),
                            Slope::from_vector(-2, -3)) == 0);
  CHECK(intersection_number(Slope::from_vector(3, 5),
                            Slope::from_vector(1, 0)) == 5);
}

TEST_CASE("torus tree roots in clockwise order") {
  TreeDynamics dyn(once_punctured_torus());
  REQUIRE(dyn.root_count() == 6);
  const std::vector<Vec> expected{{1, 2},   {2, 1},   {1, -1},
                                  {-1, -2}, {-2, -1}, {-1, 1}};
  for (int k = 0; k < 6; ++k) {
    MarkedTriangulation m = dyn.roots()[static_cast<size_t>(k)];
    CHECK(arc_slope(m).vector() == expected[static_cast<size_t>(k)]);
    CHECK(m.tri.origin(m.marked) == 0);
    CHECK(m.tri.head(m.marked) == 0);
  }
}

TEST_CASE("labels follow the mediant recursion") {
  TreeDynamics dyn(once_punctured_torus());
  CHECK(decode_address(dyn, {0, "R"}).vector() == Vec{2, 3});
  CHECK(decode_address(dyn, {0, "L"}).vector() == Vec{1, 3});

  // Independent oracle: coefficient pair built by mediant steps.
  for (int k = 0; k < 6; ++k)
    for (int len = 0; len <= 5; ++len)
      for (const std::string& w : oracle::words(len)) {
        EdgeAddress addr{k, w};
        CHECK(decode_address(dyn, addr).vector() == oracle::slope_vector(k, w));
      }
}

TEST_CASE("label argument validation") {
  TreeDynamics dyn(once_punctured_torus());
  CHECK_THROWS_AS(dyn.label({6, ""}), AddressError);
  CHECK_THROWS_AS(dyn.label({-1, ""}), AddressError);
  CHECK_THROWS_AS(dyn.label({0, "RXL"}), AddressError);
}

TEST_CASE("the punctured torus tree is never blocked") {
  TreeDynamics dyn(once_punctured_torus());
  TreeShape shape = dyn.tree_shape();
  for (int n = 1; n <= 4; ++n)
    for (const EdgeAddress& e : sphere(shape, n))
      CHECK(dyn.blocking(e) == Blocking::none);
}

TEST_CASE("mirrored labelling reverses roots and swaps moves") {
  TreeDynamics dyn(once_punctured_torus());
  TreeDynamics mir(once_punctured_torus(), true);
  CHECK(mir.mirrored());
  REQUIRE(mir.root_count() == 6);
  for (int k = 0; k < 6; ++k)
    CHECK(arc_slope(mir.roots()[static_cast<size_t>(k)]).vector() ==
          arc_slope(dyn.roots()[static_cast<size_t>(5 - k)]).vector());
  // Letter R acts by the left move under the mirror.
  CHECK(arc_slope(mir.label({0, "R"})) == arc_slope(dyn.label({5, "L"})));
  CHECK(arc_slope(mir.label({2, "LR"})) == arc_slope(dyn.label({3, "RL"})));
}

TEST_CASE("thrice-punctured sphere: two fully blocked roots") {
  TreeDynamics dyn(thrice_punctured_sphere());
  REQUIRE(dyn.root_count() == 2);
  for (int k = 0; k < 2; ++k) {
    CHECK(dyn.blocking({k, ""}) == Blocking::both_blocked);
    try {
      dyn.label({k, "R"});
      FAIL("right move should be blocked");
    } catch (const BlockedMoveError& err) {
      CHECK(err.side == Branch::R);
    }
    try {
      dyn.label({k, "L"});
      FAIL("left move should be blocked");
    } catch (const BlockedMoveError& err) {
      CHECK(err.side == Branch::L);
    }
  }
  // The whole tree is just the two root edges.
  TreeShape shape = dyn.tree_shape();
  CHECK(sphere(shape, 1).size() == 2);
  CHECK(sphere(shape, 2).empty());
}

TEST_CASE("twice-punctured torus roots and blocking") {
  Triangulation t2 = twice_punctured_torus();
  TreeDynamics dyn(t2);
  REQUIRE(dyn.root_count() == 8);
  const std::vector<int> slots{0, 3, 5, 1, 10, 2, 4, 11};
  for (int k = 0; k < 8; ++k)
    CHECK(dyn.roots()[static_cast<size_t>(k)].marked ==
          slots[static_cast<size_t>(k)]);

  // The state marked at the loop orientation l- can only move left.
  MarkedTriangulation fig{t2, 9};
  CHECK(blocking_state(fig) == Blocking::right_blocked);
  CHECK_THROWS_AS(right_move(fig), BlockedMoveError);
  CHECK_NOTHROW(left_move(fig));

  TreeShape shape = dyn.tree_shape();
  int blocked = 0;
  for (int n = 1; n <= 4; ++n)
    for (const EdgeAddress& e : sphere(shape, n)) {
      Blocking b = dyn.blocking(e);
      CHECK(b != Blocking::both_blocked);
      if (b != Blocking::none) ++blocked;
    }
  CHECK(blocked > 0);
}

TEST_CASE("circular order check passes on the torus") {
  TreeDynamics dyn(once_punctured_torus());
  OrderCheckReport rep = order_check(dyn, 6);
  CHECK(rep.pass);
  CHECK(rep.checked_depth == 6);
  CHECK(rep.comparisons > 100);
  CHECK(rep.first_counterexample.empty());
}

TEST_CASE("circular order check rejects the mirrored labelling") {
  TreeDynamics mir(once_punctured_torus(), true);
  OrderCheckReport rep = order_check(mir, 3);
  CHECK_FALSE(rep.pass);
  CHECK(rep.checked_depth == 1);
  CHECK_FALSE(rep.first_counterexample.empty());
}

TEST_CASE("base edges encode to themselves") {
  const std::vector<Vec> base{{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1},
                              {-1, -1}};
  for (int e = 0; e < 6; ++e) {
    EncodeResult r =
        encode_slope(Slope::from_vector(base[static_cast<size_t>(e)][0],
                                        base[static_cast<size_t>(e)][1]));
    REQUIRE(std::holds_alternative<int>(r));
    CHECK(std::get<int>(r) == e);
  }
}

TEST_CASE("encoding inverts the labelling") {
  TreeDynamics dyn(once_punctured_torus());
  CHECK(encode_slope(Slope::from_vector(2, 3)) ==
        EncodeResult{EdgeAddress{0, "R"}});
  CHECK(encode_slope(Slope::from_vector(1, 3)) ==
        EncodeResult{EdgeAddress{0, "L"}});
  for (int k = 0; k < 6; ++k)
    for (int len = 0; len <= 5; ++len)
      for (const std::string& w : oracle::words(len)) {
        EdgeAddress addr{k, w};
        EncodeResult r = encode_slope(decode_address(dyn, addr));
        REQUIRE(std::holds_alternative<EdgeAddress>(r));
        CHECK(std::get<EdgeAddress>(r) == addr);
      }
}

TEST_CASE("every primitive slope decodes back to itself") {
  TreeDynamics dyn(once_punctured_torus());
  int addresses = 0;
  for (const Vec& v : oracle::primitive_vectors(12)) {
    Slope s = Slope::from_vector(v[0], v[1]);
    EncodeResult r = encode_slope(s);
    if (std::holds_alternative<int>(r)) continue;
    ++addresses;
    CHECK(decode_address(dyn, std::get<EdgeAddress>(r)) == s);
  }
  CHECK(addresses > 50);
}

TEST_CASE("tree length stays within the affine intersection bound") {
  std::vector<Slope> sample;
  for (const Vec& v : oracle::primitive_vectors(10))
    sample.push_back(Slope::from_vector(v[0], v[1]));
  IntersectionBoundReport rep = tree_vs_intersection_bound(sample);
  CHECK(rep.pass);
  CHECK(rep.B == 1.0);
  CHECK(rep.A > 0.0);
  CHECK(rep.rows.size() == sample.size());
  for (const IntersectionBoundRow& row : rep.rows) {
    CHECK(row.intersection > 0);
    if (row.slope.same_line(Slope::from_vector(1, 0)))
      CHECK(row.tree_length == 0);
  }
}
