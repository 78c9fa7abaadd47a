#include "mcshane/flip_dynamics.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>

namespace mcshane {

namespace {

// Clockwise sector boundaries around the puncture, anchored at (0,1):
// sector k spans clockwise from B[k] (exclusive) to B[k+1 mod 6]
// (exclusive).  The boundaries are exactly the base-edge directions.
constexpr std::array<std::array<long long, 2>, 6> kSectorBoundary{{
    {0, 1}, {1, 1}, {1, 0}, {0, -1}, {-1, -1}, {-1, 0}}};

long long cross(const std::array<long long, 2>& a,
                const std::array<long long, 2>& b) {
  return a[0] * b[1] - a[1] * b[0];
}

// Sector of a primitive vector that is not a base-edge direction.
int sector_of(const std::array<long long, 2>& v) {
  for (int k = 0; k < 6; ++k) {
    const auto& lo = kSectorBoundary[static_cast<size_t>(k)];
    const auto& hi = kSectorBoundary[static_cast<size_t>((k + 1) % 6)];
    if (cross(lo, v) < 0 && cross(v, hi) < 0) return k;
  }
  throw ConsistencyError("vector lies on a sector boundary");
}

// Strictly-before in the clockwise circular order anchored at (0,1).
bool circ_less(const std::array<long long, 2>& a,
               const std::array<long long, 2>& b) {
  int sa = sector_of(a), sb = sector_of(b);
  if (sa != sb) return sa < sb;
  return cross(a, b) < 0;
}

}  // namespace

Slope Slope::from_vector(long long vp, long long vq) {
  if (vp == 0 && vq == 0) throw SurfaceError("zero slope vector");
  if (std::gcd(std::llabs(vp), std::llabs(vq)) != 1)
    throw SurfaceError("slope vector (" + std::to_string(vp) + "," +
                       std::to_string(vq) + ") is not primitive");
  Slope s;
  if (vq > 0 || (vq == 0 && vp > 0)) {
    s.p = vp;
    s.q = vq;
    s.orientation = 1;
  } else {
    s.p = -vp;
    s.q = -vq;
    s.orientation = -1;
  }
  return s;
}

std::string Slope::to_string() const {
  return std::to_string(p) + "/" + std::to_string(q) +
         (orientation > 0 ? "+" : "-");
}

long long intersection_number(const Slope& a, const Slope& b) {
  return std::llabs(a.p * b.q - a.q * b.p);
}

MarkedTriangulation flip(const MarkedTriangulation& m) {
  return {m.tri.flip(m.marked), m.marked};
}

bool is_right_blocked(const MarkedTriangulation& m) {
  int s1 = m.tri.succ_right(m.marked);
  return m.tri.succ_right(s1) == Triangulation::bar(s1);
}

bool is_left_blocked(const MarkedTriangulation& m) {
  int s1 = m.tri.succ_left(m.marked);
  return m.tri.succ_left(s1) == Triangulation::bar(s1);
}

Blocking blocking_state(const MarkedTriangulation& m) {
  bool r = is_right_blocked(m), l = is_left_blocked(m);
  if (r && l) return Blocking::both_blocked;
  if (r) return Blocking::right_blocked;
  if (l) return Blocking::left_blocked;
  return Blocking::none;
}

MarkedTriangulation right_move(const MarkedTriangulation& m) {
  if (is_right_blocked(m))
    throw BlockedMoveError(Branch::R, "right move blocked at state marked " +
                                          m.marked_name());
  int d = m.tri.succ_right(m.marked);
  return {m.tri.flip(d), d};
}

MarkedTriangulation left_move(const MarkedTriangulation& m) {
  if (is_left_blocked(m))
    throw BlockedMoveError(Branch::L, "left move blocked at state marked " +
                                          m.marked_name());
  int d = m.tri.succ_left(m.marked);
  // The left move marks the new diagonal with the reversed orientation.
  return {m.tri.flip(d), Triangulation::bar(d)};
}

Slope arc_slope(const MarkedTriangulation& m) {
  auto v = m.tri.slope_vec(m.marked);
  return Slope::from_vector(v[0], v[1]);
}

TreeDynamics::TreeDynamics(Triangulation base, bool mirrored)
    : base_(std::move(base)), mirrored_(mirrored) {
  const int n = base_.oriented_edge_count();
  // Clockwise link walk around puncture 0 first, remaining edges by index.
  std::vector<int> order;
  int start = -1;
  for (int e = 0; e < n && start < 0; ++e)
    if (base_.origin(e) == 0) start = e;
  if (start < 0) throw SurfaceError("puncture 0 has no incident edges");
  int e = start;
  do {
    order.push_back(e);
    e = base_.rot_cw(e);
  } while (e != start);
  for (int f = 0; f < n; ++f)
    if (base_.origin(f) != 0) order.push_back(f);

  for (int d : order) {
    if (!base_.is_flip_defined(d)) continue;
    Triangulation t = base_.flip(d);
    if (t.origin(d) == 0 && t.head(d) == 0) roots_.push_back({std::move(t), d});
  }
  if (roots_.empty())
    throw SurfaceError("no root states: no flip produces a loop at puncture 0");
  if (mirrored_) std::reverse(roots_.begin(), roots_.end());
}

MarkedTriangulation TreeDynamics::label(const EdgeAddress& addr) const {
  if (addr.root_index < 0 || addr.root_index >= root_count())
    throw AddressError("root index " + std::to_string(addr.root_index) +
                       " out of range [0," + std::to_string(root_count()) +
                       ")");
  for (char ch : addr.word)
    if (ch != 'L' && ch != 'R')
      throw AddressError("word contains letter '" + std::string(1, ch) + "'");

  std::lock_guard<std::mutex> lock(mutex_);
  MarkedTriangulation cur = roots_[static_cast<size_t>(addr.root_index)];
  std::string prefix;
  prefix.reserve(addr.word.size());
  for (char ch : addr.word) {
    prefix.push_back(ch);
    std::string key = std::to_string(addr.root_index) + ":" + prefix;
    auto it = memo_.find(key);
    if (it != memo_.end()) {
      cur = it->second;
      continue;
    }
    bool go_right = (ch == 'R') != mirrored_;
    cur = go_right ? right_move(cur) : left_move(cur);
    memo_.emplace(std::move(key), cur);
  }
  return cur;
}

Blocking TreeDynamics::blocking(const EdgeAddress& addr) const {
  MarkedTriangulation m = label(addr);
  bool r = is_right_blocked(m), l = is_left_blocked(m);
  // Under the mirrored labelling letter R applies the left move, so the
  // tree-side blocking swaps.
  if (mirrored_) std::swap(r, l);
  if (r && l) return Blocking::both_blocked;
  if (r) return Blocking::right_blocked;
  if (l) return Blocking::left_blocked;
  return Blocking::none;
}

TreeShape TreeDynamics::tree_shape() const {
  TreeShape shape;
  shape.root_degree = root_count();
  shape.block_predicate = [this](const EdgeAddress& a) { return blocking(a); };
  return shape;
}

EncodeResult encode_slope(const Slope& s) {
  const auto v = s.vector();
  // Base edges of the once-punctured torus, by oriented index.
  static constexpr std::array<std::array<long long, 2>, 6> base{{
      {1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {-1, -1}}};
  for (int e = 0; e < 6; ++e)
    if (v == base[static_cast<size_t>(e)]) return EncodeResult{std::in_place_index<0>, e};

  int k = sector_of(v);
  const auto& ccw = kSectorBoundary[static_cast<size_t>(k)];
  const auto& cw = kSectorBoundary[static_cast<size_t>((k + 1) % 6)];
  long long det = cross(cw, ccw);  // +-1 by construction
  long long a = cross(v, ccw) / det;
  long long b = cross(cw, v) / det;
  if (a < 1 || b < 1)
    throw ConsistencyError("sector decomposition failed for " + s.to_string());
  std::string word;
  while (a != b) {
    if (a > b) {
      long long steps = (a - 1) / b;
      word.append(static_cast<size_t>(steps), 'R');
      a -= steps * b;
    } else {
      long long steps = (b - 1) / a;
      word.append(static_cast<size_t>(steps), 'L');
      b -= steps * a;
    }
  }
  if (a != 1)
    throw ConsistencyError("descent did not reach the sector root (gcd " +
                           std::to_string(a) + ")");
  return EncodeResult{std::in_place_index<1>, EdgeAddress{k, std::move(word)}};
}

Slope decode_address(const TreeDynamics& dyn, const EdgeAddress& addr) {
  return arc_slope(dyn.label(addr));
}

OrderCheckReport order_check(const TreeDynamics& dyn, int depth) {
  if (!dyn.base().has_slopes())
    throw SurfaceError("order check needs slope coordinates");
  OrderCheckReport rep;
  TreeShape shape = dyn.tree_shape();
  for (int d = 1; d <= depth; ++d) {
    rep.checked_depth = d;  // on failure: the depth of the counterexample
    std::vector<EdgeAddress> level = sphere(shape, d);
    for (size_t i = 0; i + 1 < level.size(); ++i) {
      auto va = arc_slope(dyn.label(level[i])).vector();
      auto vb = arc_slope(dyn.label(level[i + 1])).vector();
      ++rep.comparisons;
      if (!circ_less(va, vb)) {
        rep.pass = false;
        if (rep.first_counterexample.empty())
          rep.first_counterexample =
              level[i].key() + " !< " + level[i + 1].key() + " (vectors " +
              Slope::from_vector(va[0], va[1]).to_string() + ", " +
              Slope::from_vector(vb[0], vb[1]).to_string() + ")";
        return rep;
      }
    }
  }
  return rep;
}

IntersectionBoundReport tree_vs_intersection_bound(
    const std::vector<Slope>& slopes) {
  static const std::array<Slope, 3> base_slopes{
      Slope{1, 0, 1}, Slope{0, 1, 1}, Slope{1, 1, 1}};
  IntersectionBoundReport rep;
  const double B = 1.0;
  double A = 0.0, max_ratio = 0.0;
  for (const Slope& s : slopes) {
    IntersectionBoundRow row;
    row.slope = s;
    EncodeResult enc = encode_slope(s);
    row.tree_length =
        std::holds_alternative<int>(enc) ? 0 : std::get<EdgeAddress>(enc).depth();
    for (const Slope& t : base_slopes)
      row.intersection += intersection_number(s, t);
    A = std::max(A, (row.tree_length - B) / static_cast<double>(row.intersection));
    max_ratio = std::max(
        max_ratio, row.tree_length / static_cast<double>(row.intersection));
    rep.rows.push_back(std::move(row));
  }
  rep.A = A;
  rep.B = B;
  rep.max_ratio = max_ratio;
  for (const auto& row : rep.rows)
    if (row.tree_length >
        rep.A * static_cast<double>(row.intersection) + rep.B + 1e-9)
      rep.pass = false;
  return rep;
}

}  // namespace mcshane
