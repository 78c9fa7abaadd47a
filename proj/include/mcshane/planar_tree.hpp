#pragma once

#include <compare>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mcshane {

// Errors thrown by the tree/address layer. Everything derives from Error so
// callers can catch the library root if they do not care about the kind.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct AddressError : Error {
  using Error::Error;
};
struct PathUndefinedError : Error {
  using Error::Error;
};
// A computed structure violates an invariant that the inputs promised
// (for example, overlapping gap intervals).
struct ConsistencyError : Error {
  using Error::Error;
};

enum class Branch : char { L = 'L', R = 'R' };

// A vertex of the infinite tree can forbid one or both of the descending
// branches (valence-2 "blocked" vertex, or a leaf). Both branches blocked
// happens only on the thrice-punctured sphere, whose tree is two bare roots.
enum class Blocking { none, left_blocked, right_blocked, both_blocked };

// Tree edge as a value: index of the root edge plus a word over {L,R}.
// Depth of a root edge is 1; each letter adds one.
struct EdgeAddress {
  int root_index = 0;
  std::string word;

  int depth() const { return 1 + static_cast<int>(word.size()); }

  EdgeAddress child(Branch b) const {
    EdgeAddress c{root_index, word};
    c.word.push_back(static_cast<char>(b));
    return c;
  }
  // Parent of a non-root edge; root edges have no parent.
  EdgeAddress parent() const {
    if (word.empty()) throw AddressError("root edge has no parent");
    EdgeAddress p{root_index, word};
    p.word.pop_back();
    return p;
  }

  std::string key() const { return std::to_string(root_index) + ":" + word; }

  bool operator==(const EdgeAddress&) const = default;
};

// Total order: root index first, then the word lexicographically with
// L < R (plain char order). A proper prefix sorts before its extensions,
// so the order restricted to any sphere S(n) is the planar left-to-right
// order cut between the last and the first root edge.
std::strong_ordering lex_compare(const EdgeAddress& a, const EdgeAddress& b);

// Rooted planar tree with N root edges; interior vertices are trivalent
// unless the block predicate removes one branch.
struct TreeShape {
  int root_degree = 0;
  // May be empty: the unblocked tree.
  std::function<Blocking(const EdgeAddress&)> block_predicate;

  Blocking blocking_at(const EdgeAddress& e) const {
    return block_predicate ? block_predicate(e) : Blocking::none;
  }
};

// Throws AddressError unless e's root index is in range and no prefix of the
// word takes a forbidden branch.
void validate_address(const TreeShape& shape, const EdgeAddress& e);

// Complementary region of the planar tree: either one of the N innermost
// regions around the root (between consecutive root edges i and i+1 mod N),
// or the region attached to a tree edge.
struct RegionId {
  enum class Kind { root, edge };
  Kind kind = Kind::root;
  int root_index = 0;  // meaningful when kind == root
  EdgeAddress addr;    // meaningful when kind == edge

  static RegionId root_region(int i) {
    RegionId r;
    r.kind = Kind::root;
    r.root_index = i;
    return r;
  }
  static RegionId edge_region(EdgeAddress a) {
    RegionId r;
    r.kind = Kind::edge;
    r.addr = std::move(a);
    return r;
  }

  // Root regions sit at depth 0; an edge region at the depth of its edge.
  int depth() const { return kind == Kind::root ? 0 : addr.depth(); }

  std::string key() const {
    return kind == Kind::root ? "root:" + std::to_string(root_index)
                              : "edge:" + addr.key();
  }

  bool operator==(const RegionId&) const = default;
};

// One of the two infinite boundary paths of a region: side L runs along the
// left edge of the region and then turns right forever, side R symmetrically.
struct RationalPathSpec {
  RegionId region;
  Branch side = Branch::R;
};

// Children of e in canonical order (L before R), minus blocked branches.
std::vector<EdgeAddress> children(const TreeShape& shape, const EdgeAddress& e);

// All addresses of depth n in planar order. For the unblocked tree the count
// is N * 2^(n-1).
std::vector<EdgeAddress> sphere(const TreeShape& shape, int n);

// n-th edge (1-based, counted from the root) of a rational boundary path.
//
// For EdgeRegion(e) the path runs through the prefixes of e, then turns once
// away from the region and keeps turning back toward it:
//   side R: e|1, e|2, ..., e, eR, eRL, eRLL, ...
//   side L: e|1, ..., e, eL, eLR, eLRR, ...
// For RootRegion(i), side R starts at root (i+1) mod N and turns L forever;
// side L starts at root i and turns R forever.
// Throws PathUndefinedError when a blocked branch is required.
EdgeAddress path_edge(const TreeShape& shape, const RationalPathSpec& spec,
                      int n);

// All regions of depth <= max_depth, each exactly once, in (depth, planar)
// order: the N root regions first, then edge regions sphere by sphere.
std::vector<RegionId> enumerate_regions(const TreeShape& shape, int max_depth);

}  // namespace mcshane
