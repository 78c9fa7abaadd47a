#pragma once

// Decorated hyperbolic structures: positive lambda lengths on the edges of
// an ideal triangulation, Ptolemy flips, horocyclic corner lengths, and the
// harmonic edge form Phi built from them.  Also the trace-side toolkit for
// the once-punctured torus (Markoff/Vieta triples, geodesic length and
// McShane summand from a trace) and an independent cross-ratio route to Phi
// for the modular torus.
//
// The decoration functions are templates over the scalar so the same code
// runs in double and in exact rational arithmetic.

#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "mcshane/flip_dynamics.hpp"
#include "mcshane/harmonic_forms.hpp"

namespace mcshane {

// Trace outside the hyperbolic range (x <= 2).
struct TraceDomainError : Error {
  using Error::Error;
};
// Ideal points collide (invalid cross-ratio configuration).
struct DegenerateConfigurationError : Error {
  using Error::Error;
};

// --- decorated structures ----------------------------------------------

template <typename R>
struct DecoratedT {
  Triangulation tri;
  std::vector<R> lambda;  // indexed by unoriented edge

  const R& lam(int oriented_edge) const {
    return lambda[static_cast<size_t>(oriented_edge >> 1)];
  }
};

using Decorated = DecoratedT<double>;

template <typename R>
void validate_decoration(const DecoratedT<R>& d) {
  if (static_cast<int>(d.lambda.size()) != d.tri.unoriented_edge_count())
    throw SurfaceError("decoration size must match the unoriented edge count");
  for (const R& v : d.lambda)
    if (!(v > 0)) throw SurfaceError("lambda lengths must be positive");
}

// Lambda length of the new diagonal of the quadrilateral around e
// (Ptolemy: lambda_e * lambda_e' = la*lc + lb*ld over opposite side pairs).
template <typename R>
R ptolemy_lambda(const DecoratedT<R>& d, int e) {
  const Triangulation& t = d.tri;
  if (!t.is_flip_defined(e))
    throw FlipUndefinedError("Ptolemy flip undefined at self-folded edge " +
                             t.name(e));
  int z = t.fnext(e), w = t.fnext(z);
  int x = t.fnext(Triangulation::bar(e)), y = t.fnext(x);
  return (d.lam(x) * d.lam(z) + d.lam(y) * d.lam(w)) / d.lam(e);
}

template <typename R>
DecoratedT<R> ptolemy_flip(const DecoratedT<R>& d, int e) {
  R fresh = ptolemy_lambda(d, e);
  DecoratedT<R> out{d.tri.flip(e), d.lambda};
  out.lambda[static_cast<size_t>(e >> 1)] = std::move(fresh);
  return out;
}

// h-length of the horocyclic corner opposite side e within the face of e:
// lambda_e / (lambda of the two adjacent sides).
template <typename R>
R corner_h_length(const DecoratedT<R>& d, int e) {
  const Triangulation& t = d.tri;
  return d.lam(e) / (d.lam(t.fnext(e)) * d.lam(t.fprev(e)));
}

// Total h-length of the horocycle around a cusp: one corner per incident
// face sector (the corner at origin(e) in the face of e, summed over the
// oriented edges e based at the cusp).
template <typename R>
R horocycle_length(const DecoratedT<R>& d, int cusp) {
  const Triangulation& t = d.tri;
  if (cusp < 0 || cusp >= t.num_punctures())
    throw SurfaceError("cusp index out of range");
  R total{};
  bool any = false;
  for (int e = 0; e < t.oriented_edge_count(); ++e) {
    if (t.origin(e) != cusp) continue;
    total += corner_h_length(d, t.fnext(e));
    any = true;
  }
  if (!any) throw SurfaceError("cusp has no incident corners");
  return total;
}

// Harmonic edge form: half the fraction of the horocycle at origin(e)
// covered by the two corners flanking the crossing point of e.  Summing
// over all oriented edges based at one cusp gives exactly 1.
template <typename R>
R phi_edge(const DecoratedT<R>& d, int e) {
  const Triangulation& t = d.tri;
  int eb = Triangulation::bar(e);
  R h_ccw = corner_h_length(d, t.fnext(e));   // corner toward rot_ccw(e)
  R h_cw = corner_h_length(d, t.fprev(eb));   // corner toward rot_cw(e)
  return (h_ccw + h_cw) / (2 * horocycle_length(d, t.origin(e)));
}

// --- the tree form from a decoration ------------------------------------

// Form provider on the rooted tree of a decorated surface: phi(addr) is the
// oriented-boundary value 2 * phi_edge of the labelled decorated state,
// with lambda lengths transported by Ptolemy flips along the address and
// memoized by prefix.
class LambdaForm : public FormProvider {
 public:
  LambdaForm(Triangulation base, std::vector<double> lambda0,
             double harmonicity_tol = 1e-10);

  double phi(const EdgeAddress& addr) const override;
  const TreeShape& shape() const override { return shape_; }
  double harmonicity_tolerance() const override { return tol_; }

  const TreeDynamics& dynamics() const { return dyn_; }
  const std::vector<double>& base_lambda() const { return lambda0_; }
  // Lambda length of the marked arc of the state at addr.
  double marked_lambda(const EdgeAddress& addr) const;

 private:
  // Lambda table of the state at addr (memoized along prefixes).
  std::vector<double> lambda_at(const EdgeAddress& addr) const;

  TreeDynamics dyn_;
  std::vector<double> lambda0_;
  TreeShape shape_;
  double tol_;
  mutable std::unordered_map<std::string, std::vector<double>> memo_;
  mutable std::mutex memo_mutex_;
};

std::unique_ptr<LambdaForm> lambda_form(const Triangulation& base,
                                        std::vector<double> lambda0);

// --- traces and McShane summands ----------------------------------------

// Traces (x, y, z) of a triple of simple closed curves on the cusped torus,
// z distinguished as the newest one; x^2 + y^2 + z^2 = x*y*z.
struct MarkoffTriple {
  double x = 3, y = 3, z = 3;
};

// Vieta exchange matching the two elementary moves: the right child keeps
// (x, z) and replaces y; the left child keeps (y, z) and replaces x; either
// way the discarded trace re-enters as x*z - y (resp. y*z - x) and the
// newest trace is last.
MarkoffTriple markoff_children(const MarkoffTriple& t, Branch side);

struct PantsGapTerm {
  double trace = 0;
  double length = 0;  // geodesic length, 2*acosh(trace/2)
  double term = 0;    // McShane summand 1/(e^length + 1)
  std::string warning;
};

// Throws TraceDomainError for x <= 2; traces in (2,3) carry a warning (not
// realized by a simple closed geodesic on a cusped torus).
PantsGapTerm mcshane_term(double x);

// --- cross-ratio route (modular torus) -----------------------------------

// Holonomy of the modular torus: the standard integer matrix pair with
// traces 3, 3, product trace 3 and commutator trace -2.  All asserted at
// construction; the cusp width is derived from the commutator (parabolic
// translation length), not hard-coded.
class ModularHolonomy {
 public:
  using Mat = std::array<std::array<long long, 2>, 2>;

  ModularHolonomy();

  const Mat& matrix_a() const { return a_; }
  const Mat& matrix_b() const { return b_; }
  long long cusp_width() const { return width_; }

 private:
  Mat a_{}, b_{};
  long long width_ = 0;
};

// Phi of a tree state computed purely from boundary cross ratios: the
// state's ideal lozenge is replayed (in exact rational arithmetic) from the
// Farey quadrilateral with its tangent horocycle family, and Phi is read off
// as the normalized horocyclic width of the lozenge seen from the cusp.
// Never consumes lambda lengths; agrees with 2*phi_edge's halved value
// (i.e. with phi_edge of the labelled state) on the modular decoration.
double cross_ratio_phi(const ModularHolonomy& hol, const EdgeAddress& addr);

// Same for the six unflipped base states (T0, e); each gives 1/6.
double cross_ratio_phi_base(const ModularHolonomy& hol, int oriented_edge);

// --- spiral observation ---------------------------------------------------

struct SpiralStep {
  int n = 0;
  EdgeAddress addr;
  double lambda = 0;
  double trace = 0;  // dictionary trace 3*lambda
  double phi = 0;
};

struct SpiralReport {
  RegionId region;
  std::vector<SpiralStep> left, right;  // along the two boundary paths
  std::vector<double> gap_values;       // gap_n for n = 1..n_max
  double gap_final = 0;
  double region_trace = 0;
  PantsGapTerm term;
  // |2 * gap_final - term.term|: the gaps live on oriented regions, the
  // McShane summand on unoriented geodesics.
  double doubled_gap_vs_term = 0;
  bool traces_strictly_increasing = true;
  bool phi_strictly_decreasing = true;
  bool increments_strictly_decreasing = true;
  double last_phi_increment = 0;
};

// Walks both boundary paths of the region for n_max turns, recording the
// marked lambda/trace and the tree phi at each step, plus the gap sequence
// and its comparison against the McShane summand of the region's trace.
SpiralReport spiral_observation(const Triangulation& t0,
                                const std::vector<double>& lambda0,
                                const RegionId& region, int n_max);

}  // namespace mcshane
