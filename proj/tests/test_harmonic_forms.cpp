#include "mcshane/harmonic_forms.hpp"

#include <cmath>
#include <sstream>

#include "doctest.h"

using namespace mcshane;

namespace {

TreeShape plain_shape(int n) { return TreeShape{n, {}}; }

std::vector<double> uniform_weights(int n) {
  return std::vector<double>(static_cast<size_t>(n), 1.0 / n);
}

RatioForm balanced6() { return RatioForm(plain_shape(6), uniform_weights(6), 0.5); }

}  // namespace

TEST_CASE("ratio form construction is validated") {
  CHECK_THROWS_AS(RatioForm(plain_shape(6), uniform_weights(5), 0.5),
                  FormInvalidError);
  CHECK_THROWS_AS(RatioForm(plain_shape(6), {1, 1, 1, 1, 1, 0}, 0.5),
                  FormInvalidError);
  CHECK_THROWS_AS(RatioForm(plain_shape(6), uniform_weights(6), 0.0),
                  FormInvalidError);
  CHECK_THROWS_AS(RatioForm(plain_shape(6), uniform_weights(6), 1.0),
                  FormInvalidError);
}

TEST_CASE("ratio form values and exact harmonicity") {
  RatioForm form = balanced6();
  CHECK(form.phi({3, ""}) == doctest::Approx(1.0 / 6).epsilon(1e-15));
  CHECK(form.phi({0, "LRL"}) == doctest::Approx(1.0 / 48).epsilon(1e-15));
  CHECK(form.boundary_mass() == doctest::Approx(1.0).epsilon(1e-15));

  RatioForm skew(plain_shape(6), uniform_weights(6), 0.3);
  for (const EdgeAddress& e : sphere(skew.shape(), 4)) {
    double lhs = skew.phi(e);
    double rhs = skew.phi(e.child(Branch::L)) + skew.phi(e.child(Branch::R));
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-14));
  }
}

TEST_CASE("green sums are conserved") {
  RatioForm form = balanced6();
  RatioForm skew(plain_shape(6), uniform_weights(6), 0.3);
  for (int n = 1; n <= 10; ++n) {
    CHECK(std::abs(green_sum(form, n) - 1.0) < 1e-13);
    CHECK(std::abs(green_sum(skew, n) - 1.0) < 1e-13);
  }
}

TEST_CASE("green sums pass through blocked vertices unchanged") {
  TreeShape shape;
  shape.root_degree = 6;
  shape.block_predicate = [](const EdgeAddress& e) {
    if (e.root_index == 0 && e.word.empty()) return Blocking::right_blocked;
    if (e.root_index == 2 && e.word == "L") return Blocking::left_blocked;
    return Blocking::none;
  };
  RatioForm form(shape, uniform_weights(6), 0.4);
  // The single child of a blocked vertex inherits the full mass.
  CHECK(form.phi({0, "L"}) == doctest::Approx(form.phi({0, ""})).epsilon(1e-15));
  for (int n = 1; n <= 9; ++n)
    CHECK(std::abs(green_sum(form, n) - 1.0) < 1e-13);
}

TEST_CASE("depth-dependent split stays harmonic") {
  auto split = [](const EdgeAddress& e) {
    return e.depth() % 2 == 0 ? 0.7 : 0.25;
  };
  RatioForm form(plain_shape(4), uniform_weights(4), split);
  for (int n = 1; n <= 8; ++n)
    CHECK(std::abs(green_sum(form, n) - 1.0) < 1e-13);
}

TEST_CASE("table form parses both line styles") {
  std::istringstream in(
      "# a comment line\n"
      "\n"
      "0: 0.5\n"
      "1:,0.5\n"
      "0 L 0.25\n"
      "0:R,0.25\n"
      "1: L 0.25\n"
      "1 R 0.25\n");
  TableForm t = TableForm::load(in, plain_shape(2), 1e-12);
  CHECK(t.phi({0, ""}) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(t.phi({1, ""}) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(t.phi({0, "R"}) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(t.covered_depth() == 2);
  CHECK_NOTHROW(t.validate());
  CHECK_THROWS_AS(t.phi({0, "LL"}), FormInvalidError);
  CHECK(std::abs(green_sum(t, 2) - 1.0) < 1e-15);
}

TEST_CASE("table form rejects malformed input") {
  auto load = [](const char* text) {
    std::istringstream in(text);
    return TableForm::load(in, plain_shape(2), 1e-12);
  };
  CHECK_THROWS_AS(load("x: 0.5\n"), FormInvalidError);       // bad root
  CHECK_THROWS_AS(load("0:LX,0.25\n"), FormInvalidError);    // bad word
  CHECK_THROWS_AS(load("0: L\n"), FormInvalidError);         // missing value
  CHECK_THROWS_AS(load("0 L 0.25 junk\n"), FormInvalidError);
  CHECK_THROWS_AS(load("7: 0.5\n"), FormInvalidError);       // root range
}

TEST_CASE("table form validation catches bad content") {
  std::istringstream in(
      "0: 0.5\n"
      "1: 0.5\n"
      "0 L 0.2\n"
      "0 R 0.2\n"   // parent 0.5 vs children 0.4
      "1 L 0.25\n"
      "1 R 0.25\n");
  TableForm t = TableForm::load(in, plain_shape(2), 1e-12);
  CHECK_THROWS_AS(t.validate(), FormInvalidError);

  std::istringstream neg(
      "0: 0.5\n"
      "1: -0.5\n");
  TableForm tn = TableForm::load(neg, plain_shape(2), 1e-12);
  CHECK_THROWS_AS(tn.validate(), FormInvalidError);
  CHECK_THROWS_AS(green_sum(tn, 1), FormInvalidError);
}

TEST_CASE("phi_infinity follows a ray down to its limit") {
  RatioForm form = balanced6();
  RationalPathSpec path{RegionId::edge_region({2, "R"}), Branch::L};
  LimitResult res = phi_infinity(form, path, 60, 1e-9);
  CHECK(res.converged);
  CHECK(res.value < 1e-8);
  CHECK(res.steps > 10);

  LimitResult stuck = phi_infinity(form, path, 5, 1e-12);
  CHECK_FALSE(stuck.converged);

  // A genuinely increasing table is reported as non-harmonic.
  std::istringstream in(
      "0: 0.5\n"
      "1: 0.5\n"
      "0 L 0.7\n"
      "0 R 0.25\n"
      "1 L 0.25\n"
      "1 R 0.25\n");
  TableForm bad = TableForm::load(in, plain_shape(2), 1e-12);
  RationalPathSpec downhill{RegionId::root_region(1), Branch::R};
  CHECK_THROWS_AS(phi_infinity(bad, downhill, 2, 1e-12), FormInvalidError);
}

TEST_CASE("gap_n of the balanced form") {
  RatioForm form = balanced6();
  // The n-th approximant of a depth-d region reads phi at tree depth d+n+1,
  // where the balanced form is 2^-(d+n) / 6.
  CHECK(gap_n(form, RegionId::root_region(0), 3) ==
        doctest::Approx(1.0 / 48).epsilon(1e-15));
  CHECK(gap_n(form, RegionId::edge_region({4, "L"}), 1) ==
        doctest::Approx(1.0 / 48).epsilon(1e-15));
  CHECK(gap_n(form, RegionId::edge_region({4, "L"}), 2) ==
        doctest::Approx(1.0 / 96).epsilon(1e-15));
  CHECK_THROWS_AS(gap_n(form, RegionId::root_region(0), 0), AddressError);
}

TEST_CASE("gap converges by the Cauchy rule") {
  RatioForm form = balanced6();
  GapReport rep = gap(form, RegionId::root_region(2), 100, 1e-8);
  CHECK(rep.converged);
  CHECK(rep.gap_estimate < 1e-7);
  CHECK(rep.gap_n_values.size() >= 2);

  GapReport cut = gap(form, RegionId::root_region(2), 3, 1e-12);
  CHECK_FALSE(cut.converged);
}

TEST_CASE("gap partition sum is the exact halved boundary mass") {
  RatioForm balanced = balanced6();
  RatioForm skew(plain_shape(6), uniform_weights(6), 0.3);
  for (int n = 1; n <= 10; ++n) {
    CHECK(std::abs(gap_partition_sum(balanced, n) - 0.5) < 1e-12);
    CHECK(std::abs(gap_partition_sum(skew, n) - 0.5) < 1e-12);
  }
}

TEST_CASE("partial gap sums of a ratio form vanish") {
  // Ratio forms have no point masses on the boundary: every gap estimate
  // tends to zero and the error estimate keeps the whole half mass.
  RatioForm form = balanced6();
  double pgs = partial_gap_sum(form, 2, 1e-9);
  CHECK(pgs >= 0.0);
  CHECK(pgs < 1e-5);
  CHECK(error_estimate(form, 2, 1e-9) == doctest::Approx(0.5).epsilon(1e-4));
}
