#include "mcshane/harmonic_forms.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace mcshane {

double FormProvider::boundary_mass() const {
  std::call_once(mass_once_, [this] {
    long double sum = 0.0L;
    for (int k = 0; k < shape().root_degree; ++k)
      sum += phi(EdgeAddress{k, ""});
    mass_ = static_cast<double>(sum);
  });
  return mass_;
}

RatioForm::RatioForm(TreeShape shape, std::vector<double> root_weights,
                     std::function<double(const EdgeAddress&)> split)
    : shape_(std::move(shape)),
      weights_(std::move(root_weights)),
      split_(std::move(split)) {
  if (static_cast<int>(weights_.size()) != shape_.root_degree)
    throw FormInvalidError("need one root weight per root edge");
  for (double w : weights_)
    if (!(w > 0.0)) throw FormInvalidError("root weights must be positive");
  if (!split_) throw FormInvalidError("split function must be set");
}

RatioForm::RatioForm(TreeShape shape, std::vector<double> root_weights,
                     double ratio)
    : RatioForm(std::move(shape), std::move(root_weights),
                [ratio](const EdgeAddress&) { return ratio; }) {
  if (!(ratio > 0.0 && ratio < 1.0))
    throw FormInvalidError("split ratio must lie in (0,1)");
}

double RatioForm::phi(const EdgeAddress& e) const {
  validate_address(shape_, e);
  double v = weights_[static_cast<size_t>(e.root_index)];
  EdgeAddress prefix{e.root_index, ""};
  for (char ch : e.word) {
    Blocking b = shape_.blocking_at(prefix);
    if (b == Blocking::none) {
      double s = split_(prefix);
      if (!(s > 0.0 && s < 1.0))
        throw FormInvalidError("split ratio out of (0,1) at " + prefix.key());
      v *= ch == 'L' ? s : 1.0 - s;
    }
    // At a blocked vertex the single child carries the full mass; the
    // forbidden branch was already rejected by validate_address.
    prefix.word.push_back(ch);
  }
  return v;
}

TableForm::TableForm(TreeShape shape, std::map<std::string, double> values,
                     double tolerance)
    : shape_(std::move(shape)),
      values_(std::move(values)),
      tolerance_(tolerance) {}

TableForm TableForm::load(std::istream& in, TreeShape shape,
                          double tolerance) {
  std::map<std::string, double> values;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    // Normalize separators so "0:RL,0.25" and "0 RL 0.25" parse the same.
    for (char& c : line)
      if (c == ',' || c == '\t') c = ' ';
    size_t first = line.find_first_not_of(' ');
    if (first == std::string::npos) continue;
    if (line[first] == '#') continue;

    const std::string where = " (line " + std::to_string(lineno) + ")";
    std::istringstream ss(line);
    int root = -1;
    std::string word;
    double value = 0.0;
    size_t colon = line.find(':');
    if (colon != std::string::npos) {
      std::istringstream head(line.substr(0, colon));
      if (!(head >> root))
        throw FormInvalidError("bad root index" + where);
      std::istringstream tail(line.substr(colon + 1));
      std::string tok;
      std::vector<std::string> toks;
      while (tail >> tok) toks.push_back(tok);
      if (toks.size() == 1) {
        word.clear();
        tok = toks[0];
      } else if (toks.size() == 2) {
        word = toks[0];
        tok = toks[1];
      } else {
        throw FormInvalidError("expected 'root:word value'" + where);
      }
      try {
        size_t used = 0;
        value = std::stod(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw FormInvalidError("bad value '" + tok + "'" + where);
      }
    } else {
      if (!(ss >> root >> word >> value))
        throw FormInvalidError("expected 'root word value'" + where);
      std::string rest;
      if (ss >> rest)
        throw FormInvalidError("trailing tokens '" + rest + "'" + where);
      if (word == "-") word.clear();
    }
    EdgeAddress e{root, word};
    // Parse-only sanity: the address must be well formed. Whether the values
    // make a harmonic form is deferred to validate().
    for (char ch : e.word)
      if (ch != 'L' && ch != 'R')
        throw FormInvalidError("bad word '" + word + "'" + where);
    if (root < 0 || (shape.root_degree > 0 && root >= shape.root_degree))
      throw FormInvalidError("root index out of range" + where);
    values[e.key()] = value;
  }
  return TableForm(std::move(shape), std::move(values), tolerance);
}

TableForm TableForm::load_file(const std::string& path, TreeShape shape,
                               double tolerance) {
  std::ifstream in(path);
  if (!in) throw FormInvalidError("cannot open table file " + path);
  return load(in, std::move(shape), tolerance);
}

double TableForm::phi(const EdgeAddress& e) const {
  validate_address(shape_, e);
  auto it = values_.find(e.key());
  if (it == values_.end())
    throw FormInvalidError("no table entry for " + e.key());
  return it->second;
}

int TableForm::covered_depth() const {
  int d = 0;
  try {
    for (d = 1;; ++d) {
      for (const EdgeAddress& e : sphere(shape_, d))
        if (!values_.count(e.key())) return d - 1;
    }
  } catch (const Error&) {
    return d - 1;
  }
}

void TableForm::validate() const {
  int depth = covered_depth();
  if (depth < 1) throw FormInvalidError("table covers no complete sphere");
  for (int d = 1; d <= depth; ++d) {
    for (const EdgeAddress& e : sphere(shape_, d)) {
      double v = phi(e);
      if (!(v > 0.0))
        throw FormInvalidError("non-positive value at " + e.key());
      if (d == depth) continue;
      double csum = 0.0;
      for (const EdgeAddress& c : children(shape_, e)) csum += phi(c);
      if (std::abs(v - csum) > tolerance_)
        throw FormInvalidError("harmonicity fails at " + e.key() +
                               ": parent " + std::to_string(v) +
                               " vs children " + std::to_string(csum));
    }
  }
}

double green_sum(const FormProvider& form, int n) {
  long double sum = 0.0L;
  for (const EdgeAddress& e : sphere(form.shape(), n)) {
    double v = form.phi(e);
    if (!(v > 0.0))
      throw FormInvalidError("non-positive phi at " + e.key());
    sum += v;
  }
  return static_cast<double>(sum);
}

LimitResult phi_infinity(const FormProvider& form,
                         const RationalPathSpec& path, int max_depth,
                         double tol) {
  if (max_depth < 2) throw AddressError("max_depth must be >= 2");
  LimitResult res;
  double prev = form.phi(path_edge(form.shape(), path, 1));
  double slack = form.harmonicity_tolerance();
  for (int n = 2; n <= max_depth; ++n) {
    double cur = form.phi(path_edge(form.shape(), path, n));
    if (!std::isfinite(cur))
      throw FormInvalidError("phi is not finite along the path");
    if (cur > prev + slack + 1e-15 * std::abs(prev))
      throw FormInvalidError(
          "phi increases along a path; form is not harmonic");
    res.steps = n;
    res.value = cur;
    if (std::abs(cur - prev) < tol) {
      res.converged = true;
      return res;
    }
    prev = cur;
  }
  res.converged = false;
  return res;
}

double gap_n(const FormProvider& form, const RegionId& region, int n) {
  if (n < 1) throw AddressError("gap index must be >= 1");
  const TreeShape& shape = form.shape();
  // The two rays bounding the region, n steps past the turn: the edges
  // L^n R . f and R^n L . f. With this step count every term of
  // gap_partition_sum(n) sits at depth n+1 and each depth-(n+1) edge is hit
  // exactly once through the maximal constant tail of its word, which is
  // what makes the partition identity exact.
  RationalPathSpec left{region, Branch::L};
  RationalPathSpec right{region, Branch::R};
  int base = region.depth();
  double l = form.phi(path_edge(shape, left, base + n + 1));
  double r = form.phi(path_edge(shape, right, base + n + 1));
  return 0.5 * (l + r);
}

GapReport gap(const FormProvider& form, const RegionId& region, int max_n,
              double tol) {
  if (max_n < 1) throw AddressError("max_n must be >= 1");
  GapReport rep;
  rep.region = region;
  rep.tolerance = tol;
  double prev = 0.0;
  for (int n = 1; n <= max_n; ++n) {
    double g = gap_n(form, region, n);
    rep.gap_n_values.push_back(g);
    rep.gap_estimate = g;
    if (n > 1 && std::abs(g - prev) < tol) {
      rep.converged = true;
      return rep;
    }
    prev = g;
  }
  rep.converged = false;
  return rep;
}

double gap_partition_sum(const FormProvider& form, int n) {
  if (n < 1) throw AddressError("partition index must be >= 1");
  long double sum = 0.0L;
  for (const RegionId& region : enumerate_regions(form.shape(), n - 1)) {
    int p = region.depth();
    if (p >= n) continue;
    sum += gap_n(form, region, n - p);
  }
  return static_cast<double>(sum);
}

double partial_gap_sum(const FormProvider& form, int depth, double tol) {
  constexpr int kMaxIterations = 400;
  long double sum = 0.0L;
  for (const RegionId& region : enumerate_regions(form.shape(), depth))
    sum += gap(form, region, kMaxIterations, tol).gap_estimate;
  return static_cast<double>(sum);
}

double error_estimate(const FormProvider& form, int depth, double tol) {
  return form.boundary_mass() / 2.0 - partial_gap_sum(form, depth, tol);
}

}  // namespace mcshane
