#pragma once

#include <iosfwd>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "mcshane/planar_tree.hpp"

namespace mcshane {

struct FormInvalidError : Error {
  using Error::Error;
};

// Nonnegative harmonic edge function on a tree shape: the value at an edge
// equals the sum over its children. Implementations must be immutable after
// construction; phi() must be pure and safe to call concurrently.
class FormProvider {
 public:
  virtual ~FormProvider() = default;

  virtual double phi(const EdgeAddress& e) const = 0;
  virtual const TreeShape& shape() const = 0;

  // Tolerance the provider guarantees for the harmonicity residual
  // |phi(e) - sum phi(children)|. Exact-by-construction providers return 0.
  virtual double harmonicity_tolerance() const = 0;

  // Total mass entering the tree: sum of phi over the root edges. Cached on
  // first use.
  double boundary_mass() const;

 private:
  mutable std::once_flag mass_once_;
  mutable double mass_ = 0.0;
};

// Harmonic by construction: root edge k carries weight w_k and every vertex
// splits its mass between the L and R child with ratio split(e) : 1-split(e).
// At a blocked vertex the single child inherits the full mass.
class RatioForm : public FormProvider {
 public:
  RatioForm(TreeShape shape, std::vector<double> root_weights,
            std::function<double(const EdgeAddress&)> split);

  // Convenience: constant split ratio (0 < ratio < 1); 0.5 is the balanced
  // form.
  RatioForm(TreeShape shape, std::vector<double> root_weights, double ratio);

  double phi(const EdgeAddress& e) const override;
  const TreeShape& shape() const override { return shape_; }
  double harmonicity_tolerance() const override { return 0.0; }

 private:
  TreeShape shape_;
  std::vector<double> weights_;
  std::function<double(const EdgeAddress&)> split_;
};

// Finite table of edge values, loaded from text. One entry per line,
// "root:word value" (colon form) or "root word value"; the word may be empty
// in the colon form ("2: 0.125" and "2:,0.125" both mean root edge 2).
// Blank lines and lines starting with '#' are skipped. Loading only parses;
// harmonicity is checked against the declared tolerance by validate() or on
// demand by the consumers.
class TableForm : public FormProvider {
 public:
  TableForm(TreeShape shape, std::map<std::string, double> values,
            double tolerance);

  static TableForm load(std::istream& in, TreeShape shape, double tolerance);
  static TableForm load_file(const std::string& path, TreeShape shape,
                             double tolerance);

  double phi(const EdgeAddress& e) const override;
  const TreeShape& shape() const override { return shape_; }
  double harmonicity_tolerance() const override { return tolerance_; }

  // Max depth fully present in the table (every address of that depth has an
  // entry).
  int covered_depth() const;

  // Checks positivity and harmonicity on every non-leaf entry; throws
  // FormInvalidError with the first offending address.
  void validate() const;

 private:
  TreeShape shape_;
  std::map<std::string, double> values_;
  double tolerance_ = 0.0;
};

struct LimitResult {
  double value = 0.0;
  bool converged = false;
  int steps = 0;
};

// Sum of phi over the sphere of radius n, accumulated in long double. For a
// harmonic form this equals boundary_mass() for every n; callers use the
// drift across n as the conservation check. Throws FormInvalidError on a
// non-positive edge value.
double green_sum(const FormProvider& form, int n);

// Value of phi along a rational boundary path, iterated until two successive
// path edges differ by less than tol or max_depth steps are exhausted.
// The sequence must be non-increasing up to the provider's harmonicity
// tolerance; a genuine increase throws FormInvalidError.
LimitResult phi_infinity(const FormProvider& form,
                         const RationalPathSpec& path, int max_depth,
                         double tol);

// n-th gap approximant of a region: half the sum of phi over the two edges
// reached by walking n steps down the region's two boundary rays.
double gap_n(const FormProvider& form, const RegionId& region, int n);

struct GapReport {
  RegionId region;
  std::vector<double> gap_n_values;
  double gap_estimate = 0.0;
  bool converged = false;
  double tolerance = 0.0;
};

// Iterates gap_n until successive values differ by less than tol (Cauchy
// stop) or max_n is reached.
GapReport gap(const FormProvider& form, const RegionId& region, int max_n,
              double tol);

// Exact finite decomposition: sum of gap_{n - depth(region)} over all regions
// of depth < n. Equals boundary_mass()/2 for every n >= 1 and every harmonic
// form; the identity is what the tests pin down.
double gap_partition_sum(const FormProvider& form, int n);

// Sum of converged gap estimates over all regions of depth <= depth.
// Increases with depth toward boundary_mass()/2.
double partial_gap_sum(const FormProvider& form, int depth, double tol);

// boundary_mass()/2 - partial_gap_sum: the mass not yet captured by regions
// of depth <= depth.
double error_estimate(const FormProvider& form, int depth, double tol);

}  // namespace mcshane
