#include "mcshane/planar_tree.hpp"

namespace mcshane {

std::strong_ordering lex_compare(const EdgeAddress& a, const EdgeAddress& b) {
  if (auto c = a.root_index <=> b.root_index; c != 0) return c;
  return a.word.compare(b.word) <=> 0;
}

void validate_address(const TreeShape& shape, const EdgeAddress& e) {
  if (e.root_index < 0 || e.root_index >= shape.root_degree)
    throw AddressError("root index " + std::to_string(e.root_index) +
                       " out of range [0," +
                       std::to_string(shape.root_degree) + ")");
  for (char ch : e.word)
    if (ch != 'L' && ch != 'R')
      throw AddressError("word contains letter '" + std::string(1, ch) +
                         "'; only L and R are allowed");
  if (!shape.block_predicate) return;
  EdgeAddress prefix{e.root_index, ""};
  for (char ch : e.word) {
    Blocking b = shape.block_predicate(prefix);
    bool blocked = b == Blocking::both_blocked ||
                   (b == Blocking::left_blocked && ch == 'L') ||
                   (b == Blocking::right_blocked && ch == 'R');
    if (blocked)
      throw AddressError("address " + e.key() + " takes blocked branch " +
                         std::string(1, ch) + " at " + prefix.key());
    prefix.word.push_back(ch);
  }
}

std::vector<EdgeAddress> children(const TreeShape& shape,
                                  const EdgeAddress& e) {
  validate_address(shape, e);
  std::vector<EdgeAddress> out;
  Blocking b = shape.blocking_at(e);
  if (b == Blocking::both_blocked) return out;
  if (b != Blocking::left_blocked) out.push_back(e.child(Branch::L));
  if (b != Blocking::right_blocked) out.push_back(e.child(Branch::R));
  return out;
}

std::vector<EdgeAddress> sphere(const TreeShape& shape, int n) {
  if (n < 1) throw AddressError("sphere radius must be >= 1");
  std::vector<EdgeAddress> level;
  level.reserve(shape.root_degree);
  for (int k = 0; k < shape.root_degree; ++k) level.push_back({k, ""});
  for (int d = 1; d < n; ++d) {
    std::vector<EdgeAddress> next;
    next.reserve(level.size() * 2);
    for (const EdgeAddress& e : level)
      for (EdgeAddress& c : children(shape, e)) next.push_back(std::move(c));
    level = std::move(next);
  }
  return level;
}

EdgeAddress path_edge(const TreeShape& shape, const RationalPathSpec& spec,
                      int n) {
  if (n < 1) throw AddressError("path step must be >= 1");
  const char toward = spec.side == Branch::R ? 'R' : 'L';
  const char away = spec.side == Branch::R ? 'L' : 'R';
  EdgeAddress e;
  if (spec.region.kind == RegionId::Kind::root) {
    int i = spec.region.root_index;
    if (i < 0 || i >= shape.root_degree)
      throw AddressError("root region index out of range");
    // Side R of root region i is the left boundary of root edge i+1; side L
    // is the right boundary of root edge i.
    int root = spec.side == Branch::R ? (i + 1) % shape.root_degree : i;
    e = EdgeAddress{root, std::string(static_cast<size_t>(n - 1), away)};
  } else {
    const EdgeAddress& f = spec.region.addr;
    int d = f.depth();
    if (n <= d) {
      e = EdgeAddress{f.root_index, f.word.substr(0, static_cast<size_t>(n - 1))};
    } else {
      e = f;
      e.word.push_back(toward);
      e.word.append(static_cast<size_t>(n - d - 1), away);
    }
  }
  try {
    validate_address(shape, e);
  } catch (const AddressError& err) {
    throw PathUndefinedError(std::string("path hits a blocked branch: ") +
                             err.what());
  }
  return e;
}

std::vector<RegionId> enumerate_regions(const TreeShape& shape,
                                        int max_depth) {
  if (max_depth < 0) throw AddressError("max_depth must be >= 0");
  std::vector<RegionId> out;
  for (int i = 0; i < shape.root_degree; ++i)
    out.push_back(RegionId::root_region(i));
  for (int d = 1; d <= max_depth; ++d)
    for (EdgeAddress& e : sphere(shape, d))
      out.push_back(RegionId::edge_region(std::move(e)));
  return out;
}

}  // namespace mcshane
