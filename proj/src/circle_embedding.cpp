#include "mcshane/circle_embedding.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mcshane {

namespace {

double normalize(double v, double circumference) {
  double r = std::fmod(v, circumference);
  if (r < 0) r += circumference;
  return r;
}

// Walks the path and accumulates the exact increment recursion
// X_{k+1} = X_k +- 1/2 phi(sibling), starting from X_1 = Y_1(first edge).
// Returns the (possibly non-normalized) coordinate after step n.  By
// harmonicity the still-outstanding increments telescope to exactly
// 1/2 (phi(cur) - lim phi along the ray), so the walk may stop once phi(cur)
// approaches phi_limit; with phi_limit = 0 this is the plain phi(cur) bound.
double x_raw(const FormProvider& form, const RationalPathSpec& path, int n,
             int* steps_done, double stop_tol, double phi_limit) {
  const TreeShape& shape = form.shape();
  EdgeAddress cur = path_edge(shape, path, 1);
  long double x = 0.5L * form.phi(cur);
  for (int k = 0; k < cur.root_index; ++k) x += form.phi(EdgeAddress{k, ""});
  int k = 1;
  for (; k < n; ++k) {
    double cur_phi = form.phi(cur);
    if (!std::isfinite(cur_phi))
      throw FormInvalidError("phi is not finite at " + cur.key());
    if (stop_tol > 0.0 && 0.5 * (cur_phi - phi_limit) < stop_tol) break;
    EdgeAddress next = path_edge(shape, path, k + 1);
    char turn = next.word.back();
    if (shape.blocking_at(cur) == Blocking::none) {
      EdgeAddress sibling = next;
      sibling.word.back() = turn == 'R' ? 'L' : 'R';
      double half = 0.5 * form.phi(sibling);
      x += turn == 'R' ? half : -half;
    }
    // Through a blocked vertex the single child keeps the parent's midpoint.
    cur = std::move(next);
  }
  if (steps_done) *steps_done = k;
  return static_cast<double>(x);
}

}  // namespace

double GapInterval::length() const {
  double c = left.circumference;
  double raw = right.value - left.value;
  // A degenerate interval can land a rounding hair "backwards"; clamp that
  // to zero rather than wrapping it around the whole circle.
  if (raw < 0 && raw > -1e-9 * c) return 0.0;
  // Widened endpoints can wrap through the cut; report the forward arc.
  return normalize(raw, c);
}

CirclePoint y_n(const FormProvider& form, const EdgeAddress& e) {
  validate_address(form.shape(), e);
  long double acc = 0.0L;
  for (const EdgeAddress& f : sphere(form.shape(), e.depth())) {
    if (f == e)
      return CirclePoint{
          normalize(static_cast<double>(acc + 0.5L * form.phi(e)),
                    form.boundary_mass()),
          form.boundary_mass()};
    acc += form.phi(f);
  }
  throw AddressError("edge " + e.key() + " not found in its sphere");
}

CirclePoint x_n(const FormProvider& form, const RationalPathSpec& path,
                int n) {
  if (n < 1) throw AddressError("path step must be >= 1");
  double v = x_raw(form, path, n, nullptr, 0.0, 0.0);
  return CirclePoint{normalize(v, form.boundary_mass()),
                     form.boundary_mass()};
}

XLimit x_limits(const FormProvider& form, const RationalPathSpec& path,
                int max_n, double tol) {
  if (max_n < 2) throw AddressError("max_n must be >= 2");
  // phi along the ray tends to the region's gap value, which is positive for
  // geometric forms, so the tail bound must be measured against that limit;
  // without it the walk would run to max_n on lambda values that eventually
  // overflow a double.
  LimitResult lim = phi_infinity(form, path, max_n, tol);
  XLimit res;
  double v = x_raw(form, path, max_n, &res.steps, tol, lim.value);
  res.point = CirclePoint{normalize(v, form.boundary_mass()),
                          form.boundary_mass()};
  // The remaining tail is half of how far the last edge still sits above
  // the ray's phi limit.
  double bound = 0.5 * std::max(
      form.phi(path_edge(form.shape(), path, res.steps)) - lim.value, 0.0);
  res.converged = bound < tol && lim.converged;
  return res;
}

std::vector<GapInterval> gap_intervals(const FormProvider& form, int depth,
                                       int max_n, double tol) {
  const double C = form.boundary_mass();
  std::vector<GapInterval> out;
  for (const RegionId& region : enumerate_regions(form.shape(), depth)) {
    RationalPathSpec lpath{region, Branch::L};
    RationalPathSpec rpath{region, Branch::R};
    XLimit xl = x_limits(form, lpath, max_n, tol);
    XLimit xr = x_limits(form, rpath, max_n, tol);
    LimitResult pl = phi_infinity(form, lpath, max_n, tol);
    LimitResult pr = phi_infinity(form, rpath, max_n, tol);
    GapInterval gi;
    gi.region = region;
    gi.left = CirclePoint{normalize(xl.point.value - 0.5 * pl.value, C), C};
    gi.right = CirclePoint{normalize(xr.point.value + 0.5 * pr.value, C), C};
    gi.depth_used = std::max({xl.steps, xr.steps, pl.steps, pr.steps});
    gi.converged = xl.converged && xr.converged && pl.converged &&
                   pr.converged;
    out.push_back(std::move(gi));
  }

  // Disjointness sweep around the circle. Sort by left endpoint and require
  // each interval to end (going forward) before the next one starts.
  double slack = 16.0 * tol + 1e-12 * C;
  std::vector<const GapInterval*> order;
  order.reserve(out.size());
  for (const GapInterval& gi : out) order.push_back(&gi);
  std::sort(order.begin(), order.end(),
            [](const GapInterval* a, const GapInterval* b) {
              return a->left.value < b->left.value;
            });
  for (size_t i = 0; i + 1 < order.size(); ++i) {
    double end = order[i]->left.value + order[i]->length();
    if (end > order[i + 1]->left.value + slack)
      throw ConsistencyError("gap intervals of " + order[i]->region.key() +
                             " and " + order[i + 1]->region.key() +
                             " overlap");
  }
  if (order.size() > 1) {
    double end = order.back()->left.value + order.back()->length();
    if (end > order.front()->left.value + C + slack)
      throw ConsistencyError("gap interval of " + order.back()->region.key() +
                             " wraps onto " + order.front()->region.key());
  }
  return out;
}

double uncovered_measure(const FormProvider& form, int depth, int max_n,
                         double tol) {
  long double covered = 0.0L;
  for (const GapInterval& gi : gap_intervals(form, depth, max_n, tol))
    covered += gi.length();
  return static_cast<double>(form.boundary_mass() - covered);
}

OrderingReport verify_yn_ordering(const FormProvider& form, int n) {
  if (n < 1) throw AddressError("sphere radius must be >= 1");
  const TreeShape& shape = form.shape();
  OrderingReport rep;
  double slack = 1e-12 + 8.0 * form.harmonicity_tolerance();

  std::vector<EdgeAddress> level = sphere(shape, n);
  // Y values by a single cumulative pass per level; children of consecutive
  // parents are consecutive in the next level, so one index walks both.
  auto y_values = [&form](const std::vector<EdgeAddress>& edges) {
    std::vector<double> y;
    y.reserve(edges.size());
    long double acc = 0.0L;
    for (const EdgeAddress& e : edges) {
      double p = form.phi(e);
      y.push_back(static_cast<double>(acc + 0.5L * p));
      acc += p;
    }
    return y;
  };
  std::vector<double> yn = y_values(level);
  std::vector<EdgeAddress> next = sphere(shape, n + 1);
  std::vector<double> yn1 = y_values(next);

  auto fail = [&rep](const std::string& what) {
    if (rep.pass) {
      rep.pass = false;
      rep.first_counterexample = what;
    }
  };
  auto describe = [](const EdgeAddress& e, double v) {
    std::ostringstream os;
    os << e.key() << " (Y=" << v << ")";
    return os.str();
  };

  size_t c = 0;  // index into next/yn1
  // Per parent: indices of its children in `next`.
  std::vector<std::pair<long, long>> kids(level.size(), {-1, -1});
  for (size_t i = 0; i < level.size(); ++i) {
    Blocking b = shape.blocking_at(level[i]);
    long l = -1, r = -1;
    if (b != Blocking::left_blocked) l = static_cast<long>(c++);
    if (b != Blocking::right_blocked) r = static_cast<long>(c++);
    kids[i] = {l, r};
  }
  if (c != next.size())
    throw ConsistencyError("sphere sizes disagree with blocking data");

  for (size_t i = 0; i < level.size(); ++i) {
    auto [l, r] = kids[i];
    double y = yn[i];
    if (l >= 0 && r >= 0) {
      // |Y_{n+1}(g) - Y_n(e)| <= 1/2 phi(h) for {g,h} = {Re, Le}.
      rep.comparisons += 2;
      if (std::abs(yn1[static_cast<size_t>(l)] - y) >
          0.5 * form.phi(next[static_cast<size_t>(r)]) + slack)
        fail("midpoint jump to L child too large at " +
             describe(level[i], y));
      if (std::abs(yn1[static_cast<size_t>(r)] - y) >
          0.5 * form.phi(next[static_cast<size_t>(l)]) + slack)
        fail("midpoint jump to R child too large at " +
             describe(level[i], y));
      rep.comparisons += 2;
      if (!(yn1[static_cast<size_t>(l)] <= y + slack))
        fail("Y_{n+1}(L e) > Y_n(e) at " + describe(level[i], y));
      if (!(y <= yn1[static_cast<size_t>(r)] + slack))
        fail("Y_n(e) > Y_{n+1}(R e) at " + describe(level[i], y));
    } else {
      // Single child through a blocked vertex keeps the midpoint exactly.
      long only = l >= 0 ? l : r;
      rep.comparisons += 1;
      if (std::abs(yn1[static_cast<size_t>(only)] - y) > slack)
        fail("blocked vertex shifts midpoint at " + describe(level[i], y));
    }
    if (i + 1 < level.size()) {
      // Chain across the consecutive pair f = level[i] < e = level[i+1]:
      // Y_{n+1}(R f) <= Y_{n+1}(L e).
      long rf = kids[i].second;
      long le = kids[i + 1].first;
      if (rf >= 0 && le >= 0) {
        rep.comparisons += 1;
        if (!(yn1[static_cast<size_t>(rf)] <=
              yn1[static_cast<size_t>(le)] + slack))
          fail("Y_{n+1}(R f) > Y_{n+1}(L e) for consecutive " +
               describe(level[i], y) + " < " +
               describe(level[i + 1], yn[i + 1]));
      }
    }
  }
  return rep;
}

}  // namespace mcshane
