#pragma once

// Independent oracles for the test suite.  Everything here is derived by a
// route separate from the library: closed-form formulas, small integer
// recursions, or frozen reference numbers.  Tests compare library output
// against these, never the library against itself.

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace oracle {

// --- McShane summand, two closed forms -------------------------------------

// As a function of the trace x > 2.
inline double term_from_trace(double x) {
  return (1.0 - std::sqrt(1.0 - 4.0 / (x * x))) / 2.0;
}

// As 1/(e^len + 1) with len the geodesic length 2*acosh(x/2).
inline double term_from_length(double x) {
  return 1.0 / (std::exp(2.0 * std::acosh(x / 2.0)) + 1.0);
}

// --- frozen reference values ------------------------------------------------

// Summands for the traces that appear in the first tree levels.
inline constexpr double kTermTrace3 = 0.127322003750;
inline constexpr double kTermTrace6 = 0.028595479209;
inline constexpr double kTermTrace15 = 0.004464375089;
inline constexpr double kTermTrace39 = 0.000657895022;
inline constexpr double kTermTrace87 = 0.000132135309;
inline constexpr double kLengthTrace3 = 1.9248473002;

// Per-region limits (half-sums along the two rays).
inline constexpr double kRootRegionGap = 0.0636610019;    // term(3)/2
inline constexpr double kDepth1RegionGap = 0.0142977396;  // term(6)/2

// Oriented partial sums (twice the converged gap totals) for regions of
// depth <= d on the standard decorated torus.
inline constexpr double kOrientedPartial0 = 0.763932023;
inline constexpr double kOrientedPartial1 = 0.935504898;
inline constexpr double kOrientedPartial2 = 0.989077399;
inline constexpr double kOrientedPartial5 = 0.999971185;
inline constexpr double kUncovered2 = 0.010922601;

// --- integer triple tree ------------------------------------------------

// Lambda lengths (g, h, m) of a tree state on the standard decorated torus:
// clockwise parent, counterclockwise parent, marked arc.  Children follow
// the Vieta exchange: the new length is 3*(kept pair product) - discarded.
// Lengths grow doubly exponentially on alternating words (~1e42 by length
// 8), so the triple needs arbitrary precision; doubles of the exact values
// are still fine for comparisons.
struct Triple {
  boost::multiprecision::cpp_int g = 1, h = 1, m = 2;

  Triple right() const { return {g, m, 3 * g * m - h}; }
  Triple left() const { return {m, h, 3 * h * m - g}; }
};

inline Triple triple_at(const std::string& word) {
  Triple t;
  for (char ch : word) t = (ch == 'R') ? t.right() : t.left();
  return t;
}

// Tree-normalized phi of the state in terms of its triple (the horocycle
// around the puncture has total length 6 in this decoration).
inline double tree_phi(const Triple& t) {
  double g = t.g.convert_to<double>();
  double h = t.h.convert_to<double>();
  double m = t.m.convert_to<double>();
  return (g * g + h * h) / (6.0 * g * h * m);
}

// --- sector / mediant slope enumeration -----------------------------------

// Clockwise sector boundaries around the puncture anchored at (0,1); these
// are exactly the oriented base-edge directions.
inline constexpr std::array<std::array<long long, 2>, 6> kBoundary{
    {{0, 1}, {1, 1}, {1, 0}, {0, -1}, {-1, -1}, {-1, 0}}};

// Oriented slope vector of the tree edge (k, word): v = a*cw + b*ccw with
// cw = kBoundary[k+1], ccw = kBoundary[k]; (a, b) starts at (1, 1) and the
// letters act by the mediant steps a += b (R) and b += a (L), applied from
// the last letter back to the first (each move rebases the deeper subword).
inline std::array<long long, 2> slope_vector(int k, const std::string& word) {
  long long a = 1, b = 1;
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    if (*it == 'R')
      a += b;
    else
      b += a;
  }
  const auto& ccw = kBoundary[static_cast<size_t>(k)];
  const auto& cw = kBoundary[static_cast<size_t>((k + 1) % 6)];
  return {a * cw[0] + b * ccw[0], a * cw[1] + b * ccw[1]};
}

// All words of length len in lexicographic order (L < R).
inline std::vector<std::string> words(int len) {
  std::vector<std::string> out;
  out.reserve(1u << len);
  for (unsigned i = 0; i < (1u << len); ++i) {
    std::string w(static_cast<size_t>(len), 'L');
    for (int j = 0; j < len; ++j)
      if (i & (1u << (len - 1 - j))) w[static_cast<size_t>(j)] = 'R';
    out.push_back(std::move(w));
  }
  return out;
}

// All primitive integer vectors with |p| + |q| <= bound, both orientations.
inline std::vector<std::array<long long, 2>> primitive_vectors(int bound) {
  auto gcd = [](long long a, long long b) {
    while (b) {
      long long t = a % b;
      a = b;
      b = t;
    }
    return a < 0 ? -a : a;
  };
  std::vector<std::array<long long, 2>> out;
  for (long long p = -bound; p <= bound; ++p)
    for (long long q = -bound; q <= bound; ++q) {
      if (p == 0 && q == 0) continue;
      if (std::abs(p) + std::abs(q) > bound) continue;
      if (gcd(p, q) != 1) continue;
      out.push_back({p, q});
    }
  return out;
}

}  // namespace oracle
