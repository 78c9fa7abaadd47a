#include "mcshane/cusp_geometry.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <limits>
#include <utility>

namespace mcshane {

// --- LambdaForm -----------------------------------------------------------

LambdaForm::LambdaForm(Triangulation base, std::vector<double> lambda0,
                       double harmonicity_tol)
    : dyn_(std::move(base)), lambda0_(std::move(lambda0)), tol_(harmonicity_tol) {
  if (static_cast<int>(lambda0_.size()) != dyn_.base().unoriented_edge_count())
    throw SurfaceError("decoration size must match the unoriented edge count");
  for (double v : lambda0_)
    if (!(v > 0)) throw SurfaceError("lambda lengths must be positive");
  if (!(tol_ > 0)) throw SurfaceError("harmonicity tolerance must be positive");
  shape_ = dyn_.tree_shape();
}

std::vector<double> LambdaForm::lambda_at(const EdgeAddress& addr) const {
  // Resolve the labels first (also validates the address and fills the
  // dynamics memo) so the lambda memo below can assume valid prefixes.
  dyn_.label(addr);

  std::lock_guard<std::mutex> lock(memo_mutex_);
  EdgeAddress prefix{addr.root_index, ""};
  std::vector<double> cur;
  if (auto it = memo_.find(prefix.key()); it != memo_.end()) {
    cur = it->second;
  } else {
    const MarkedTriangulation& root =
        dyn_.roots()[static_cast<size_t>(addr.root_index)];
    Decorated base_dec{dyn_.base(), lambda0_};
    double fresh = ptolemy_lambda(base_dec, root.marked);
    cur = lambda0_;
    cur[static_cast<size_t>(root.marked >> 1)] = fresh;
    memo_.emplace(prefix.key(), cur);
  }
  for (char ch : addr.word) {
    EdgeAddress parent = prefix;
    prefix.word.push_back(ch);
    if (auto it = memo_.find(prefix.key()); it != memo_.end()) {
      cur = it->second;
      continue;
    }
    MarkedTriangulation pstate = dyn_.label(parent);
    MarkedTriangulation cstate = dyn_.label(prefix);
    Decorated pdec{std::move(pstate.tri), std::move(cur)};
    double fresh = ptolemy_lambda(pdec, cstate.marked);
    cur = std::move(pdec.lambda);
    cur[static_cast<size_t>(cstate.marked >> 1)] = fresh;
    memo_.emplace(prefix.key(), cur);
  }
  return cur;
}

double LambdaForm::phi(const EdgeAddress& addr) const {
  MarkedTriangulation state = dyn_.label(addr);
  Decorated dec{std::move(state.tri), lambda_at(addr)};
  // Oriented-boundary normalization: both orientations of the unoriented
  // arc carry the state's horocyclic weight.
  return 2 * phi_edge(dec, state.marked);
}

double LambdaForm::marked_lambda(const EdgeAddress& addr) const {
  MarkedTriangulation state = dyn_.label(addr);
  return lambda_at(addr)[static_cast<size_t>(state.marked >> 1)];
}

std::unique_ptr<LambdaForm> lambda_form(const Triangulation& base,
                                        std::vector<double> lambda0) {
  return std::make_unique<LambdaForm>(base, std::move(lambda0));
}

// --- Markoff / McShane ------------------------------------------------------

MarkoffTriple markoff_children(const MarkoffTriple& t, Branch side) {
  double lhs = t.x * t.x + t.y * t.y + t.z * t.z;
  double rhs = t.x * t.y * t.z;
  if (std::abs(lhs - rhs) > 1e-6 * std::max(1.0, std::abs(rhs)))
    throw ConsistencyError("traces do not satisfy the Markoff relation");
  if (side == Branch::R) return {t.x, t.z, t.x * t.z - t.y};
  return {t.z, t.y, t.z * t.y - t.x};
}

PantsGapTerm mcshane_term(double x) {
  if (!(x > 2))
    throw TraceDomainError("trace " + std::to_string(x) +
                           " is not hyperbolic (need x > 2)");
  PantsGapTerm out;
  out.trace = x;
  out.length = 2 * std::acosh(x / 2);
  out.term = 1.0 / (std::exp(out.length) + 1.0);
  double dual = (1.0 - std::sqrt(1.0 - 4.0 / (x * x))) / 2.0;
  if (std::abs(out.term - dual) > 1e-12)
    throw ConsistencyError("McShane term forms disagree beyond 1e-12");
  if (x < 3)
    out.warning = "trace below 3: not the trace of a simple closed geodesic "
                  "on a cusped torus";
  return out;
}

// --- modular holonomy -------------------------------------------------------

namespace {

using Mat = ModularHolonomy::Mat;

Mat mat_mul(const Mat& m, const Mat& n) {
  Mat r{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      r[i][j] = m[i][0] * n[0][j] + m[i][1] * n[1][j];
  return r;
}

long long mat_tr(const Mat& m) { return m[0][0] + m[1][1]; }
long long mat_det(const Mat& m) { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }

Mat mat_inv_unimodular(const Mat& m) {
  return Mat{{{m[1][1], -m[0][1]}, {-m[1][0], m[0][0]}}};
}

}  // namespace

ModularHolonomy::ModularHolonomy() {
  a_ = Mat{{{1, 1}, {1, 2}}};
  b_ = Mat{{{1, -1}, {-1, 2}}};
  if (mat_det(a_) != 1 || mat_det(b_) != 1)
    throw ConsistencyError("holonomy generators must be unimodular");
  if (mat_tr(a_) != 3 || mat_tr(b_) != 3)
    throw ConsistencyError("generator traces must be 3");
  if (mat_tr(mat_mul(a_, b_)) != 3)
    throw ConsistencyError("product trace must be 3");
  Mat comm = mat_mul(mat_mul(a_, b_), mat_mul(mat_inv_unimodular(a_),
                                              mat_inv_unimodular(b_)));
  if (mat_tr(comm) != -2)
    throw ConsistencyError("commutator trace must be -2 (cusped torus)");
  // The cusp translation length: normalize the commutator to trace +2 and
  // read the parabolic translation off the conjugacy-normal form.
  Mat par = comm;
  if (mat_tr(par) == -2)
    for (auto& row : par)
      for (auto& v : row) v = -v;
  if (par[0][0] == 1 && par[1][1] == 1 && par[1][0] == 0)
    width_ = std::llabs(par[0][1]);
  else if (par[0][0] == 1 && par[1][1] == 1 && par[0][1] == 0)
    width_ = std::llabs(par[1][0]);
  else
    throw ConsistencyError("commutator is not in parabolic normal form");
  if (width_ == 0) throw ConsistencyError("cusp width must be positive");
}

// --- cross-ratio route ------------------------------------------------------

namespace {

using Rat = boost::multiprecision::cpp_rational;

// Ideal boundary point decorated with a horocycle; sigma is the square root
// of the horocycle's euclidean diameter (1/sqrt(height) at infinity).
struct RPoint {
  bool inf = false;
  Rat xi{};
  Rat sigma{1};
};

bool same_point(const RPoint& a, const RPoint& b) {
  if (a.inf || b.inf) return a.inf && b.inf;
  return a.xi == b.xi;
}

// Positively oriented (counterclockwise) triple on the boundary circle
// R u {inf}; counterclockwise runs along increasing reals.
bool ccw(const RPoint& a, const RPoint& b, const RPoint& c) {
  if (same_point(a, b) || same_point(b, c) || same_point(a, c))
    throw DegenerateConfigurationError("coincident ideal points");
  if (a.inf) return b.xi < c.xi;
  if (b.inf) return c.xi < a.xi;
  if (c.inf) return a.xi < b.xi;
  return (a.xi < b.xi && b.xi < c.xi) || (b.xi < c.xi && c.xi < a.xi) ||
         (c.xi < a.xi && a.xi < b.xi);
}

// r lies on the open arc between a and b that does not contain c.
bool in_arc_avoiding(const RPoint& r, const RPoint& a, const RPoint& b,
                     const RPoint& c) {
  return ccw(a, c, b) ? ccw(b, r, a) : ccw(a, r, b);
}

// Penner lambda length between two decorated points.
Rat lambda_of(const RPoint& a, const RPoint& b) {
  if (a.inf && b.inf)
    throw DegenerateConfigurationError("both endpoints at infinity");
  if (a.inf || b.inf) return Rat(1) / (a.sigma * b.sigma);
  Rat d = a.xi - b.xi;
  if (d < 0) d = -d;
  if (d == 0) throw DegenerateConfigurationError("coincident ideal points");
  return d / (a.sigma * b.sigma);
}

// The decorated point r with lambda(r, a) = ma and lambda(r, b) = mb lying
// on the arc (a, b) away from `exclude`.  Exactly one of the two tangency
// solutions lands on that arc.
RPoint solve_apex(const RPoint& a, const Rat& ma, const RPoint& b,
                  const Rat& mb, const RPoint& exclude) {
  std::vector<RPoint> found;
  auto consider = [&](const RPoint& r) {
    if (same_point(r, a) || same_point(r, b) || same_point(r, exclude)) return;
    if (in_arc_avoiding(r, a, b, exclude)) found.push_back(r);
  };
  if (!a.inf && !b.inf) {
    for (int e1 : {1, -1}) {
      for (int e2 : {1, -1}) {
        Rat denom = e1 * ma * a.sigma - e2 * mb * b.sigma;
        if (denom == 0) continue;
        Rat sr = (b.xi - a.xi) / denom;
        if (sr <= 0) continue;
        consider(RPoint{false, a.xi + e1 * ma * sr * a.sigma, sr});
      }
    }
  } else {
    const RPoint& fin = a.inf ? b : a;
    const Rat& mfin = a.inf ? mb : ma;
    const RPoint& at_inf = a.inf ? a : b;
    const Rat& minf = a.inf ? ma : mb;
    Rat sr = Rat(1) / (minf * at_inf.sigma);
    for (int e : {1, -1})
      consider(RPoint{false, fin.xi + e * mfin * sr * fin.sigma, sr});
  }
  if (found.size() != 1)
    throw ConsistencyError("apex solution is not unique on the target arc");
  if (lambda_of(found.front(), a) != ma || lambda_of(found.front(), b) != mb)
    throw ConsistencyError("apex does not reproduce the requested lambdas");
  return found.front();
}

// Ideal quadrilateral (u, p, v, q) in counterclockwise order with marked
// diagonal u -> v, together with the lambda triple of the state: g on sides
// (u,p), (v,q); h on sides (p,v), (q,u); m on the diagonal.
struct Lozenge {
  RPoint u, p, v, q;
  Rat g{1}, h{1}, m{1};
};

Lozenge right_child(const Lozenge& l) {
  // Flip the side (p, v): the outer triangle apex r has lambda(p, r) = m and
  // lambda(r, v) = g.  The cusp corner u is fixed; r becomes the far end of
  // the new marked diagonal and the old far end v turns into the apex q.
  RPoint r = solve_apex(l.p, l.m, l.v, l.g, l.u);
  Lozenge c;
  c.u = l.u;
  c.p = l.p;
  c.v = r;
  c.q = l.v;
  c.g = l.g;
  c.h = l.m;
  c.m = (l.g * l.g + l.m * l.m) / l.h;
  return c;
}

Lozenge left_child(const Lozenge& l) {
  // Flip the side (v, q): the outer apex r has lambda(v, r) = h and
  // lambda(r, q) = m.  The cusp corner u is fixed; r becomes the far end of
  // the new marked diagonal and the old far end v turns into the apex p.
  RPoint r = solve_apex(l.v, l.h, l.q, l.m, l.u);
  Lozenge c;
  c.u = l.u;
  c.p = l.v;
  c.v = r;
  c.q = l.q;
  c.g = l.m;
  c.h = l.h;
  c.m = (l.h * l.h + l.m * l.m) / l.g;
  return c;
}

// Phi of the state: send the marked diagonal's start u to infinity by a
// unimodular Mobius map; the two neighbor edges from u cut the horocycle at
// the images of p and q, and Phi is half that horocyclic width divided by
// the cusp width.
double lozenge_phi(const Lozenge& l, long long width) {
  Rat spread;
  if (l.u.inf) {
    if (l.p.inf || l.q.inf)
      throw DegenerateConfigurationError("two corners at infinity");
    Rat d = l.p.xi - l.q.xi;
    if (d < 0) d = -d;
    spread = d * l.u.sigma * l.u.sigma;
  } else {
    auto image = [&](const RPoint& t) {
      if (t.inf) return Rat(0);
      Rat d = t.xi - l.u.xi;
      if (d == 0)
        throw DegenerateConfigurationError("corner collides with the cusp");
      return Rat(-1) / d;
    };
    Rat d = image(l.p) - image(l.q);
    if (d < 0) d = -d;
    spread = d * l.u.sigma * l.u.sigma;
  }
  Rat val = spread / (2 * width);
  return val.convert_to<double>();
}

// Farey quadrilateral (-1, 0, 1, inf) with its tangent horocycle family
// (sigma = 1 everywhere): the all-ones decorated base triangulation.
Lozenge base_state_lozenge() {
  Lozenge l;
  l.u = RPoint{true, 0, 1};    // infinity
  l.p = RPoint{false, -1, 1};
  l.v = RPoint{false, 0, 1};
  l.q = RPoint{false, 1, 1};
  l.g = 1;
  l.h = 1;
  l.m = 1;
  return l;
}

// Flip of the base state: the root states of the tree.
Lozenge base_root_lozenge() {
  Lozenge l;
  l.u = RPoint{false, -1, 1};
  l.p = RPoint{false, 0, 1};
  l.v = RPoint{false, 1, 1};
  l.q = RPoint{true, 0, 1};
  l.g = 1;
  l.h = 1;
  l.m = 2;
  return l;
}

}  // namespace

double cross_ratio_phi(const ModularHolonomy& hol, const EdgeAddress& addr) {
  if (addr.root_index < 0 || addr.root_index >= 6)
    throw AddressError("modular torus tree has 6 roots");
  // The deck group acts transitively on the six root sectors, so one base
  // lozenge serves all roots: the value depends only on the word.
  Lozenge l = base_root_lozenge();
  for (char ch : addr.word) {
    if (ch == 'R')
      l = right_child(l);
    else if (ch == 'L')
      l = left_child(l);
    else
      throw AddressError("word contains letter '" + std::string(1, ch) + "'");
  }
  return lozenge_phi(l, hol.cusp_width());
}

double cross_ratio_phi_base(const ModularHolonomy& hol, int oriented_edge) {
  if (oriented_edge < 0 || oriented_edge >= 6)
    throw AddressError("base state index out of range");
  // All six unflipped states are equivalent under the deck group.
  return lozenge_phi(base_state_lozenge(), hol.cusp_width());
}

// --- spiral observation -----------------------------------------------------

SpiralReport spiral_observation(const Triangulation& t0,
                                const std::vector<double>& lambda0,
                                const RegionId& region, int n_max) {
  if (n_max < 1) throw AddressError("n_max must be >= 1");
  if (t0.num_punctures() != 1 || t0.genus() != 1)
    throw SurfaceError("spiral observation runs on the once-punctured torus");

  LambdaForm form(t0, lambda0);
  const TreeShape& shape = form.shape();

  SpiralReport rep;
  rep.region = region;
  const int total = region.depth() + n_max;

  auto walk = [&](Branch side, std::vector<SpiralStep>& out) {
    RationalPathSpec spec{region, side};
    for (int n = 1; n <= total; ++n) {
      SpiralStep st;
      st.n = n;
      st.addr = path_edge(shape, spec, n);
      st.lambda = form.marked_lambda(st.addr);
      st.trace = 3 * st.lambda;
      st.phi = form.phi(st.addr);
      out.push_back(std::move(st));
    }
  };
  walk(Branch::L, rep.left);
  walk(Branch::R, rep.right);

  // Monotonicity flags, asserted above double rounding noise: once the
  // sequence reaches its limit, phi wobbles by a last bit around it, so
  // sub-noise dips and exact ties are not violations (the true decrements
  // shrink below one ulp long before the walk ends).  Increment
  // monotonicity is a property of the spiral ray itself, so the descent
  // prefix down to the region (and the turn into the ray) is excluded from
  // that comparison.
  const size_t ray_from = static_cast<size_t>(region.depth());
  auto scan = [&](const std::vector<SpiralStep>& v) {
    double prev_inc = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i + 1 < v.size(); ++i) {
      if (!(v[i + 1].trace > v[i].trace))
        rep.traces_strictly_increasing = false;
      double inc = v[i].phi - v[i + 1].phi;
      double noise = 1e-14 * v[i].phi;
      if (inc < -noise) rep.phi_strictly_decreasing = false;
      if (i > ray_from && inc > prev_inc + noise)
        rep.increments_strictly_decreasing = false;
      prev_inc = inc;
    }
    if (v.size() >= 2)
      rep.last_phi_increment = std::max(
          rep.last_phi_increment, v[v.size() - 2].phi - v.back().phi);
  };
  scan(rep.left);
  scan(rep.right);

  rep.gap_values.reserve(static_cast<size_t>(n_max));
  for (int n = 1; n <= n_max; ++n)
    rep.gap_values.push_back(gap_n(form, region, n));
  rep.gap_final = rep.gap_values.back();

  double lam_region;
  if (region.kind == RegionId::Kind::root) {
    if (region.root_index < 0 ||
        region.root_index >= form.dynamics().root_count())
      throw AddressError("root region index out of range");
    int base_edge =
        form.dynamics().roots()[static_cast<size_t>(region.root_index)].marked;
    lam_region = form.base_lambda()[static_cast<size_t>(base_edge >> 1)];
  } else {
    lam_region = form.marked_lambda(region.addr);
  }
  rep.region_trace = 3 * lam_region;
  if (rep.region_trace > 2) {
    rep.term = mcshane_term(rep.region_trace);
    rep.doubled_gap_vs_term = std::abs(2 * rep.gap_final - rep.term.term);
  } else {
    rep.term.trace = rep.region_trace;
    rep.term.warning = "trace <= 2: no geodesic comparison available";
    rep.doubled_gap_vs_term = std::numeric_limits<double>::quiet_NaN();
  }
  return rep;
}

}  // namespace mcshane
