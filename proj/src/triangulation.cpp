#include "mcshane/triangulation.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace mcshane {

namespace {

long long gcd_ll(long long a, long long b) { return std::gcd(a, b); }

}  // namespace

Triangulation::Triangulation(std::vector<int> fnext, std::vector<int> origin,
                             std::vector<std::string> names, int num_punctures,
                             std::vector<std::array<long long, 2>> slopes)
    : fnext_(std::move(fnext)),
      origin_(std::move(origin)),
      names_(std::move(names)),
      slopes_(std::move(slopes)),
      num_punctures_(num_punctures) {
  validate();
}

int Triangulation::check(int e) const {
  if (e < 0 || e >= oriented_edge_count())
    throw SurfaceError("oriented edge index out of range: " +
                       std::to_string(e));
  return e;
}

int Triangulation::euler_characteristic() const {
  return num_punctures_ - unoriented_edge_count() + face_count();
}

std::array<long long, 2> Triangulation::slope_vec(int e) const {
  if (!has_slopes())
    throw SurfaceError("surface carries no slope coordinates");
  return slopes_[check(e)];
}

std::vector<std::array<int, 3>> Triangulation::faces() const {
  std::vector<std::array<int, 3>> out;
  std::vector<bool> seen(fnext_.size(), false);
  for (int e = 0; e < oriented_edge_count(); ++e) {
    if (seen[e]) continue;
    int a = e, b = fnext(e), c = fnext(b);
    seen[a] = seen[b] = seen[c] = true;
    out.push_back({a, b, c});
  }
  return out;
}

bool Triangulation::is_flip_defined(int e) const {
  int z = fnext(e);
  int w = fnext(z);
  return z != bar(e) && w != bar(e);
}

Triangulation Triangulation::flip(int e) const {
  check(e);
  int z = fnext(e), w = fnext(z);  // face (e, z, w)
  int x = fnext(bar(e)), y = fnext(x);  // face (bar e, x, y)
  if (z == bar(e) || w == bar(e))
    throw FlipUndefinedError("flip undefined at self-folded edge " + name(e));

  Triangulation t = *this;
  // The quadrilateral boundary is z, w, x, y; the new diagonal joins the
  // corner between y and z to the corner between w and x, reusing slot e.
  t.origin_[e] = head(x);
  t.origin_[bar(e)] = head(z);
  t.fnext_[x] = e;
  t.fnext_[e] = w;
  t.fnext_[w] = x;
  t.fnext_[y] = z;
  t.fnext_[z] = bar(e);
  t.fnext_[bar(e)] = y;
  if (has_slopes()) {
    std::array<long long, 2> v{};
    for (int i : {0, 1}) {
      long long s = 0;
      if (__builtin_add_overflow(slopes_[y][i], slopes_[z][i], &s))
        throw SurfaceError("slope coordinate overflow during flip");
      v[i] = s;
    }
    t.slopes_[e] = v;
    t.slopes_[bar(e)] = {-v[0], -v[1]};
  }
  // Mark the slot as a fresh arc in the display name.
  std::string base = names_[e];
  if (!base.empty() && (base.back() == '+' || base.back() == '-'))
    base.pop_back();
  t.names_[e] = base + "'+";
  t.names_[bar(e)] = base + "'-";
  return t;
}

void Triangulation::validate() const {
  const int n = oriented_edge_count();
  if (n == 0 || n % 6 != 0)
    throw SurfaceError("oriented edge count must be a positive multiple of 6");
  if (static_cast<int>(origin_.size()) != n ||
      static_cast<int>(names_.size()) != n)
    throw SurfaceError("edge table sizes disagree");
  if (!slopes_.empty() && static_cast<int>(slopes_.size()) != n)
    throw SurfaceError("slope table size disagrees");
  if (num_punctures_ <= 0) throw SurfaceError("need at least one puncture");

  std::vector<int> hits(n, 0);
  for (int e = 0; e < n; ++e) {
    if (fnext_[e] < 0 || fnext_[e] >= n)
      throw SurfaceError("fnext out of range");
    ++hits[fnext_[e]];
  }
  for (int e = 0; e < n; ++e)
    if (hits[e] != 1) throw SurfaceError("fnext is not a permutation");
  for (int e = 0; e < n; ++e) {
    int b = fnext_[e], c = fnext_[b];
    if (b == e || c == e || fnext_[c] != e)
      throw SurfaceError("faces must be directed triangles");
  }

  std::vector<bool> used(num_punctures_, false);
  for (int e = 0; e < n; ++e) {
    if (origin_[e] < 0 || origin_[e] >= num_punctures_)
      throw SurfaceError("puncture index out of range");
    used[origin_[e]] = true;
    // Face cycles run head to tail.
    if (origin_[fnext_[e]] != origin_[bar(e)])
      throw SurfaceError("face cycle breaks at edge " + names_[e]);
  }
  for (int p = 0; p < num_punctures_; ++p)
    if (!used[p])
      throw SurfaceError("puncture " + std::to_string(p) + " is isolated");

  int chi = euler_characteristic();
  if (chi > 2 || chi % 2 != 0)
    throw SurfaceError("Euler characteristic " + std::to_string(chi) +
                       " is not that of a closed orientable surface");

  if (has_slopes()) {
    for (int e = 0; e < n; e += 2) {
      auto v = slopes_[e], w = slopes_[e + 1];
      if (v[0] != -w[0] || v[1] != -w[1])
        throw SurfaceError("slopes of paired orientations must negate");
      if (v[0] == 0 && v[1] == 0) throw SurfaceError("zero slope");
      if (gcd_ll(std::abs(v[0]), std::abs(v[1])) != 1)
        throw SurfaceError("slope not primitive");
    }
    for (const auto& f : faces()) {
      for (int i : {0, 1})
        if (slopes_[f[0]][i] + slopes_[f[1]][i] + slopes_[f[2]][i] != 0)
          throw SurfaceError("face slopes must sum to zero");
    }
  }
}

std::string Triangulation::to_text() const {
  std::ostringstream os;
  for (int e = 0; e < oriented_edge_count(); ++e)
    os << names_[e] << ' ' << names_[bar(e)] << ' ' << names_[fnext_[e]] << ' '
       << origin_[e] << '\n';
  return os.str();
}

Triangulation once_punctured_torus() {
  // Oriented edges: 0 e1+, 1 e1-, 2 e2+, 3 e2-, 4 e3+, 5 e3-.
  // Faces: (e1+, e2+, e3-) and (e3+, e1-, e2-).
  std::vector<int> fnext{2, 3, 5, 4, 1, 0};
  std::vector<int> origin(6, 0);
  std::vector<std::string> names{"e1+", "e1-", "e2+", "e2-", "e3+", "e3-"};
  std::vector<std::array<long long, 2>> slopes{{1, 0},  {-1, 0}, {0, 1},
                                               {0, -1}, {1, 1},  {-1, -1}};
  return Triangulation(std::move(fnext), std::move(origin), std::move(names),
                       1, std::move(slopes));
}

Triangulation thrice_punctured_sphere() {
  // Punctures P0, P1, P2; edges u: P0-P1, v: P1-P2, w: P2-P0, each bounding
  // the two triangles (u+, v+, w+) and (w-, v-, u-).
  std::vector<int> fnext{2, 5, 4, 1, 0, 3};
  std::vector<int> origin{0, 1, 1, 2, 2, 0};
  std::vector<std::string> names{"u+", "u-", "v+", "v-", "w+", "w-"};
  return Triangulation(std::move(fnext), std::move(origin), std::move(names),
                       3);
}

Triangulation twice_punctured_torus() {
  // Puncture 0 is the distinguished one; puncture 1 sits inside the loop l,
  // joined to it by the self-folded spoke f.  Torus-like edges a, b, c and
  // the meridian m all start and end at puncture 0.
  // Faces: (f+, f-, l+), (l-, a+, m+), (m-, b+, c-), (c+, a-, b-).
  // Oriented ids: 0 a+, 1 a-, 2 b+, 3 b-, 4 c+, 5 c-, 6 f+, 7 f-, 8 l+,
  // 9 l-, 10 m+, 11 m-.
  std::vector<int> fnext{10, 3, 5, 4, 1, 11, 7, 8, 6, 0, 9, 2};
  std::vector<int> origin{0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0};
  std::vector<std::string> names{"a+", "a-", "b+", "b-", "c+", "c-",
                                 "f+", "f-", "l+", "l-", "m+", "m-"};
  return Triangulation(std::move(fnext), std::move(origin), std::move(names),
                       2);
}

Triangulation build_surface(int genus, int punctures) {
  if (genus == 1 && punctures == 1) return once_punctured_torus();
  if (genus == 0 && punctures == 3) return thrice_punctured_sphere();
  if (genus == 1 && punctures == 2) return twice_punctured_torus();
  throw SurfaceError("no shipped triangulation for genus " +
                     std::to_string(genus) + ", " +
                     std::to_string(punctures) + " punctures");
}

}  // namespace mcshane
