#pragma once

#include <string>
#include <vector>

#include "mcshane/harmonic_forms.hpp"
#include "mcshane/planar_tree.hpp"

namespace mcshane {

// Point on the circle R / (boundary_mass) Z. value is normalized to
// [0, circumference).
struct CirclePoint {
  double value = 0.0;
  double circumference = 0.0;
};

// Closed arc [left, right] attached to a region; may wrap through 0 (the arc
// of the cut region does). Its arc length converges to twice the region's
// gap as depth_used grows.
struct GapInterval {
  RegionId region;
  CirclePoint left;
  CirclePoint right;
  int depth_used = 0;
  bool converged = false;

  double length() const;
};

struct OrderingReport {
  bool pass = true;
  long comparisons = 0;
  std::string first_counterexample;  // empty when pass
};

struct XLimit {
  CirclePoint point;
  bool converged = false;
  int steps = 0;
};

// Midpoint of e's cell in the depth-n partition of the circle:
// Y_n(e) = 1/2 phi(e) + sum of phi over the sphere edges before e. The cut
// anchoring the partition sits in the last root region (between root edges
// N-1 and 0), so Y is monotone in the address order at each depth.
CirclePoint y_n(const FormProvider& form, const EdgeAddress& e);

// Y_n of the path's n-th edge. Successive values satisfy the exact identity
// |X_{n+1} - X_n| = 1/2 phi(sibling of the (n+1)-st edge), with increment 0
// through a blocked (single-child) vertex.
CirclePoint x_n(const FormProvider& form, const RationalPathSpec& path,
                int n);

// Limit of x_n along the path. The tail variation after step n is bounded by
// 1/2 phi(n-th edge), which is the stopping criterion.
XLimit x_limits(const FormProvider& form, const RationalPathSpec& path,
                int max_n, double tol);

// One interval per region of depth <= depth: [X_inf(left ray) - 1/2 Phi_inf,
// X_inf(right ray) + 1/2 Phi_inf]. The widening adds the one-sided jumps of
// X_inf at the two boundary paths, so the arc length equals twice the
// region's gap. Throws ConsistencyError if two intervals overlap beyond
// numerical tolerance.
std::vector<GapInterval> gap_intervals(const FormProvider& form, int depth,
                                       int max_n, double tol);

// Circumference minus the total length of gap_intervals(depth): the measure
// not yet covered, converging to twice the residual error of the form.
double uncovered_measure(const FormProvider& form, int depth, int max_n,
                         double tol);

// Checks, for every consecutive pair f < e in the depth-n sphere,
//   Y_{n+1}(R f) <= Y_{n+1}(L e) <= Y_n(e) <= Y_{n+1}(R e)
// and per edge |Y_{n+1}(g) - Y_n(e)| <= 1/2 phi(h) for {g,h} = {Re, Le}.
// Blocked vertices contribute the exact equality Y_{n+1}(child) = Y_n(e)
// instead. Failures are reported, not thrown.
OrderingReport verify_yn_ordering(const FormProvider& form, int n);

}  // namespace mcshane
