#pragma once

// Combinatorial ideal triangulations of punctured surfaces, stored as
// half-edge (oriented edge) tables.  Oriented edges are dense ints; the two
// orientations of an unoriented edge are paired as 2k / 2k+1, so reversal is
// `e ^ 1`.  `fnext` walks one step counterclockwise around the face to the
// left of the edge; faces are directed triangle boundaries, head to tail.
//
// Triangulations are immutable values: `flip` returns a new triangulation.

#include <array>
#include <string>
#include <vector>

#include "mcshane/planar_tree.hpp"

namespace mcshane {

// Unsupported or structurally broken surface data.
struct SurfaceError : Error {
  using Error::Error;
};

// Requested flip has the same triangle on both sides (self-folded edge).
struct FlipUndefinedError : Error {
  using Error::Error;
};

class Triangulation {
 public:
  Triangulation() = default;

  // Builds from raw tables.  All vectors are indexed by oriented edge.
  // `slopes` may be empty (no homology tracking) or one vector per oriented
  // edge with slope(e^1) == -slope(e).
  Triangulation(std::vector<int> fnext, std::vector<int> origin,
                std::vector<std::string> names, int num_punctures,
                std::vector<std::array<long long, 2>> slopes = {});

  // --- basic queries ----------------------------------------------------
  int oriented_edge_count() const { return static_cast<int>(fnext_.size()); }
  int unoriented_edge_count() const { return oriented_edge_count() / 2; }
  int face_count() const { return oriented_edge_count() / 3; }
  int num_punctures() const { return num_punctures_; }
  // Euler characteristic of the closed surface (punctures as vertices).
  int euler_characteristic() const;
  int genus() const { return (2 - euler_characteristic()) / 2; }

  static int bar(int e) { return e ^ 1; }
  int fnext(int e) const { return fnext_[check(e)]; }
  int fprev(int e) const { return fnext(fnext(e)); }
  int origin(int e) const { return origin_[check(e)]; }
  int head(int e) const { return origin_[bar(check(e))]; }
  const std::string& name(int e) const { return names_[check(e)]; }

  // Successor arcs of an oriented edge: the arc from head(e) to the apex
  // of the flanking triangle (right triangle for succ_right, left for
  // succ_left).  These are the arcs the right/left moves step onto.
  int succ_right(int e) const { return bar(fprev(bar(e))); }
  int succ_left(int e) const { return fnext(e); }
  // One step clockwise / counterclockwise around origin(e).
  int rot_cw(int e) const { return fnext(bar(e)); }
  int rot_ccw(int e) const { return bar(fprev(e)); }

  bool has_slopes() const { return !slopes_.empty(); }
  std::array<long long, 2> slope_vec(int e) const;

  // All faces as directed triangles (each once, lowest edge first).
  std::vector<std::array<int, 3>> faces() const;

  // --- flips ------------------------------------------------------------
  // True iff the two sides of e are distinct triangles.
  bool is_flip_defined(int e) const;

  // Replaces edge e by the other diagonal of the surrounding quadrilateral.
  // The new diagonal reuses the slot pair of e; its orientation follows the
  // fixed convention that (old diagonal, new diagonal) is positively
  // oriented.  Throws FlipUndefinedError on a self-folded edge.
  Triangulation flip(int e) const;

  // --- validation / serialization ---------------------------------------
  // Checks the half-edge axioms: fnext is a permutation whose orbits are
  // directed triangles, origins cohere along face cycles, every puncture is
  // used, and slope data (if any) is primitive, odd under reversal, and sums
  // to zero around each face.  Throws SurfaceError on violation.
  void validate() const;

  // One line per oriented edge: "name bar succ origin_puncture" where succ
  // is the face-cycle successor.
  std::string to_text() const;

 private:
  int check(int e) const;

  std::vector<int> fnext_;
  std::vector<int> origin_;
  std::vector<std::string> names_;
  std::vector<std::array<long long, 2>> slopes_;
  int num_punctures_ = 0;
};

// --- shipped surfaces ----------------------------------------------------
// Once-punctured torus: edges e1, e2, e3 with slopes (1,0), (0,1), (1,1).
Triangulation once_punctured_torus();
// Thrice-punctured sphere: edges u (P0-P1), v (P1-P2), w (P2-P0), doubled.
Triangulation thrice_punctured_sphere();
// Twice-punctured torus: the Figure-5 style triangulation with a loop l
// around the second puncture, a self-folded spoke f inside it, and torus
// edges a, b, c, m at the main puncture.
Triangulation twice_punctured_torus();

// Dispatch by topology; throws SurfaceError for anything not shipped.
Triangulation build_surface(int genus, int punctures);

}  // namespace mcshane
