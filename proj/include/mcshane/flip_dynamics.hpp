#pragma once

// Marked triangulation states, the right/left elementary moves, and the
// rooted labelling of the planar tree by states.  On the once-punctured
// torus the marked arc is tracked in primitive slope coordinates, which
// powers encoding (slope -> address), the circular-order check, and the
// tree-length vs intersection-number comparison.

#include <mutex>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "mcshane/planar_tree.hpp"
#include "mcshane/triangulation.hpp"

namespace mcshane {

// A move was requested on a state whose corresponding branch is blocked.
struct BlockedMoveError : Error {
  Branch side;
  BlockedMoveError(Branch s, const std::string& msg) : Error(msg), side(s) {}
};

// Primitive slope with a separate orientation sign.  Canonical form has
// q > 0, or q == 0 and p > 0; the oriented vector is orientation * (p, q).
struct Slope {
  long long p = 0;
  long long q = 0;
  int orientation = 1;

  static Slope from_vector(long long vp, long long vq);
  std::array<long long, 2> vector() const {
    return {orientation * p, orientation * q};
  }
  // Unoriented equality.
  bool same_line(const Slope& o) const { return p == o.p && q == o.q; }
  // "p/q+" or "p/q-".
  std::string to_string() const;

  bool operator==(const Slope&) const = default;
};

// Geometric intersection number of two slopes, |p1*q2 - q1*p2|.
long long intersection_number(const Slope& a, const Slope& b);

// A triangulation together with a marked oriented edge.
struct MarkedTriangulation {
  Triangulation tri;
  int marked = 0;

  const std::string& marked_name() const { return tri.name(marked); }
};

// Flip at the marked edge; the mark moves to the new diagonal.
MarkedTriangulation flip(const MarkedTriangulation& m);

// Blocking tests: the right move is blocked iff the successor arc closes up
// after one step (s(s(e)) == bar(s(e))), and symmetrically on the left.
// Always false on once-punctured surfaces.
bool is_right_blocked(const MarkedTriangulation& m);
bool is_left_blocked(const MarkedTriangulation& m);
Blocking blocking_state(const MarkedTriangulation& m);

// Elementary moves: flip at the successor of the marked edge and mark the
// new diagonal (with reversed orientation for the left move, so that both
// children's marks turn the same way around the puncture).  Throw
// BlockedMoveError when blocked.
MarkedTriangulation right_move(const MarkedTriangulation& m);
MarkedTriangulation left_move(const MarkedTriangulation& m);

// Slope of the marked arc (once-punctured torus only).
Slope arc_slope(const MarkedTriangulation& m);

// Labelling of the rooted planar tree by marked triangulations: root edge k
// carries the flip of the base triangulation at the k-th loop-producing
// oriented edge, and letters act by the elementary moves (R/L).
//
// Root order: oriented edges based at puncture 0 in clockwise link order
// starting from the lowest-numbered one, then the remaining oriented edges
// by index; an edge contributes a root iff its flip is defined and the new
// diagonal is a loop at puncture 0.
//
// `mirrored` reverses the root order and swaps the two moves - the
// orientation-reversed labelling, which must fail the circular-order check
// (negative control).
class TreeDynamics {
 public:
  explicit TreeDynamics(Triangulation base, bool mirrored = false);

  const Triangulation& base() const { return base_; }
  bool mirrored() const { return mirrored_; }
  int root_count() const { return static_cast<int>(roots_.size()); }
  const std::vector<MarkedTriangulation>& roots() const { return roots_; }

  // State at an address (memoized along prefixes).  Throws AddressError for
  // bad root indices and BlockedMoveError if the word crosses a blocked
  // branch.
  MarkedTriangulation label(const EdgeAddress& addr) const;
  Blocking blocking(const EdgeAddress& addr) const;

  // Tree shape whose block predicate queries this labelling.  The returned
  // shape refers back to this object, which must outlive it.
  TreeShape tree_shape() const;

 private:
  Triangulation base_;
  bool mirrored_ = false;
  std::vector<MarkedTriangulation> roots_;
  mutable std::unordered_map<std::string, MarkedTriangulation> memo_;
  mutable std::mutex mutex_;
};

// Result of encoding a slope: either an oriented edge of the base
// triangulation (the slope is already an arc of it) or a tree address.
using EncodeResult = std::variant<int, EdgeAddress>;

// Inverse of addr -> arc_slope(label(addr)) on the once-punctured torus,
// computed by sector location around the puncture followed by unimodular
// (Stern-Brocot) descent.  Total: every primitive oriented slope is either
// a base edge or reached by a unique address.
EncodeResult encode_slope(const Slope& s);

// Sugar: slope of the arc at addr (standard, unmirrored labelling).
Slope decode_address(const TreeDynamics& dyn, const EdgeAddress& addr);

struct OrderCheckReport {
  bool pass = true;
  int checked_depth = 0;
  long comparisons = 0;
  std::string first_counterexample;
};

// Verifies that lexicographic order of each sphere S(n), n <= depth, agrees
// with the clockwise circular order of the marked arcs around the puncture
// (anchored between the last and first root).  Works on the once-punctured
// torus; reports the first violation instead of throwing.
OrderCheckReport order_check(const TreeDynamics& dyn, int depth);

struct IntersectionBoundRow {
  Slope slope;
  int tree_length = 0;        // encode depth; 0 for base edges
  long long intersection = 0; // total crossings with the three base slopes
};

struct IntersectionBoundReport {
  std::vector<IntersectionBoundRow> rows;
  // Fitted affine bound tree_length <= A * intersection + B over the rows.
  double A = 0.0;
  double B = 0.0;
  double max_ratio = 0.0;
  bool pass = true;
};

// Compares tree length with intersection number for the given slopes and
// fits the affine bound (B fixed to 1, A minimal).
IntersectionBoundReport tree_vs_intersection_bound(
    const std::vector<Slope>& slopes);

}  // namespace mcshane
