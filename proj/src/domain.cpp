#include "monoroot/domain.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "monoroot/errors.hpp"

namespace monoroot {

bool is_zero(const SignVector& v) {
  for (Sign s : v) {
    if (s != 0) return false;
  }
  return true;
}

std::string to_string(const GridPoint& p) {
  std::ostringstream os;
  os << '(';
  for (std::size_t j = 0; j < p.dim(); ++j) os << (j ? "," : "") << p[j];
  os << ')';
  return os.str();
}

BoxDomain::BoxDomain(RealVector lower, RealVector upper) : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.empty()) throw DomainError("box must have positive dimension");
  if (lower_.size() != upper_.size()) throw DomainError("box corner dimensions differ");
  for (std::size_t j = 0; j < lower_.size(); ++j) {
    if (!std::isfinite(lower_[j]) || !std::isfinite(upper_[j]) || !(lower_[j] < upper_[j])) {
      throw DomainError("box requires lower < upper in every coordinate");
    }
  }
}

BoxDomain BoxDomain::unit(std::size_t dim) { return BoxDomain(RealVector(dim, 0.0), RealVector(dim, 1.0)); }

GridSpec::GridSpec(std::vector<Dyadic> lower, int delta_exponent, std::vector<std::int64_t> cells)
    : lower_(std::move(lower)), delta_exponent_(delta_exponent), cells_(std::move(cells)) {}

GridSpec GridSpec::create(const BoxDomain& box, int delta_exponent) {
  std::vector<Dyadic> lower;
  std::vector<std::int64_t> cells;
  for (std::size_t j = 0; j < box.dim(); ++j) {
    const Dyadic a = Dyadic::from_double(box.lower()[j]);
    const Dyadic b = Dyadic::from_double(box.upper()[j]);
    const Dyadic side = b - a;
    int side_exp = 0;
    if (!side.is_power_of_two(&side_exp)) {
      throw DomainError("box side " + std::to_string(j) + " is not a power of two; normalize the box first");
    }
    if (side_exp < delta_exponent) throw DomainError("delta exceeds the box side length");
    if (side_exp - delta_exponent > 62) throw DomainError("grid too fine for 64-bit indices");
    lower.push_back(a);
    cells.push_back(std::int64_t{1} << (side_exp - delta_exponent));
  }
  return GridSpec(std::move(lower), delta_exponent, std::move(cells));
}

GridSpec GridSpec::unit(std::size_t dim, int delta_exponent) { return create(BoxDomain::unit(dim), delta_exponent); }

GridSpec GridSpec::from_parts(std::vector<Dyadic> lower, int delta_exponent, std::vector<std::int64_t> cells) {
  if (lower.empty() || lower.size() != cells.size()) throw DomainError("grid parts have mismatched dimensions");
  for (auto n : cells) {
    if (n < 1) throw DomainError("grid needs at least one cell per axis");
  }
  return GridSpec(std::move(lower), delta_exponent, std::move(cells));
}

Dyadic GridSpec::upper(std::size_t j) const { return lower_[j] + Dyadic(cells_[j], delta_exponent_); }

BoxDomain GridSpec::box() const {
  RealVector lo, hi;
  for (std::size_t j = 0; j < dim(); ++j) {
    lo.push_back(lower_[j].to_double());
    hi.push_back(upper(j).to_double());
  }
  return BoxDomain(std::move(lo), std::move(hi));
}

bool GridSpec::has_power_of_two_cells() const {
  for (auto n : cells_) {
    if (!is_power_of_two(n)) return false;
  }
  return true;
}

bool GridSpec::contains(const GridPoint& p) const {
  if (p.dim() != dim()) return false;
  for (std::size_t j = 0; j < dim(); ++j) {
    if (p[j] < 0 || p[j] > cells_[j]) return false;
  }
  return true;
}

void GridSpec::validate(const GridPoint& p) const {
  if (!contains(p)) throw DomainError("grid index " + to_string(p) + " out of range");
}

std::uint64_t GridSpec::point_count() const {
  std::uint64_t total = 1;
  for (auto n : cells_) {
    const auto side = static_cast<std::uint64_t>(n) + 1;
    if (total > std::numeric_limits<std::uint64_t>::max() / side) return std::numeric_limits<std::uint64_t>::max();
    total *= side;
  }
  return total;
}

Dyadic GridSpec::coordinate(const GridPoint& p, std::size_t j) const {
  return lower_[j] + Dyadic(p[j], delta_exponent_);
}

RealVector to_coords(const GridPoint& p, const GridSpec& g) {
  g.validate(p);
  RealVector x(g.dim());
  for (std::size_t j = 0; j < g.dim(); ++j) x[j] = g.coordinate(p, j).to_double();
  return x;
}

void for_each_index(const std::vector<std::int64_t>& lo, const std::vector<std::int64_t>& hi,
                    const std::function<void(const GridPoint&)>& fn) {
  const std::size_t d = lo.size();
  for (std::size_t j = 0; j < d; ++j) {
    if (hi[j] < lo[j]) return;
  }
  GridPoint p{lo};
  while (true) {
    fn(p);
    std::size_t j = d;
    while (true) {
      if (j == 0) return;
      --j;
      if (p[j] < hi[j]) {
        ++p[j];
        break;
      }
      p[j] = lo[j];
    }
  }
}

void for_each_point(const GridSpec& g, const std::function<void(const GridPoint&)>& fn) {
  for_each_index(g.lower_corner().index, g.cells(), fn);
}

RealVector Normalization::to_original(const RealVector& unit_point) const {
  RealVector x(unit_point.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double a = original.lower()[j];
    const double b = original.upper()[j];
    x[j] = a + unit_point[j] * (b - a);
  }
  return x;
}

RealVector Normalization::to_original(const GridPoint& p) const { return to_original(to_coords(p, unit_grid)); }

Normalization normalize_box(const BoxDomain& box, std::int64_t min_cells) {
  if (min_cells < 1) throw DomainError("resolution must be at least one cell");
  const int level = ceil_log2(static_cast<std::uint64_t>(min_cells));
  return Normalization{box, GridSpec::unit(box.dim(), -level)};
}

RealOracle::RealOracle(std::size_t dim, Evaluator evaluator) : dim_(dim), evaluator_(std::move(evaluator)) {
  if (dim_ == 0) throw DomainError("oracle dimension must be positive");
}

RealVector RealOracle::operator()(const RealVector& x) {
  if (x.size() != dim_) throw DomainError("real oracle input has wrong dimension");
  ++count_;
  RealVector y = evaluator_(x);
  if (y.size() != dim_) throw EvaluationError("real oracle returned a vector of wrong dimension");
  return y;
}

SignOracle::SignOracle(std::size_t dim, Evaluator evaluator) : dim_(dim), evaluator_(std::move(evaluator)) {
  if (dim_ == 0) throw DomainError("oracle dimension must be positive");
}

void SignOracle::set_memoization(bool enabled) {
  memoize_ = enabled;
  if (!enabled) cache_.clear();
}

SignVector SignOracle::operator()(const GridPoint& p) {
  if (p.dim() != dim_) throw DomainError("sign oracle input has wrong dimension");
  if (memoize_) {
    if (auto it = cache_.find(p); it != cache_.end()) return it->second;
  }
  ++count_;
  SignVector s = evaluator_(p);
  if (s.size() != dim_) throw EvaluationError("sign oracle returned a vector of wrong dimension");
  for (Sign v : s) {
    if (v < -1 || v > 1) throw EvaluationError("sign oracle returned an entry outside {-1,0,1}");
  }
  if (memoize_) cache_.emplace(p, s);
  return s;
}

LineFunction::LineFunction(SignOracle& oracle, const GridSpec& grid, std::size_t component, std::size_t axis,
                           GridPoint base)
    : oracle_(&oracle), component_(component), axis_(axis), base_(std::move(base)) {
  if (component >= grid.dim() || axis >= grid.dim()) throw DomainError("component or axis out of range");
  grid.validate(base_);
  length_ = grid.cells(axis);
}

Sign LineFunction::operator()(std::int64_t t) const {
  if (t < 0 || t > length_) throw DomainError("line index out of range");
  GridPoint p = base_;
  p[axis_] = t;
  return (*oracle_)(p)[component_];
}

LineFunction restrict_component(SignOracle& o, std::size_t component, std::size_t axis, const GridPoint& base,
                                const GridSpec& g) {
  return LineFunction(o, g, component, axis, base);
}

std::vector<GridPoint> enumerate_roots(SignOracle& o, const GridSpec& g, std::uint64_t cap) {
  if (g.point_count() > cap) {
    throw SizeError("grid has " + std::to_string(g.point_count()) + " points, above the cap of " +
                    std::to_string(cap));
  }
  std::vector<GridPoint> roots;
  for_each_point(g, [&](const GridPoint& p) {
    if (is_zero(o(p))) roots.push_back(p);
  });
  return roots;
}

const char* to_string(Monotone m) {
  switch (m) {
    case Monotone::none: return "none";
    case Monotone::increasing: return "increasing";
    case Monotone::decreasing: return "decreasing";
  }
  return "none";
}

MonotoneProfile::MonotoneProfile(std::size_t dim) : dim_(dim), entries_(dim * dim, Monotone::none) {}

MonotoneProfile MonotoneProfile::diagonal_increasing(std::size_t dim) {
  MonotoneProfile p(dim);
  for (std::size_t i = 0; i < dim; ++i) p.set(i, i, Monotone::increasing);
  return p;
}

MonotoneProfile MonotoneProfile::exdiagonal_decreasing(std::size_t dim) {
  MonotoneProfile p(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      if (i != j) p.set(i, j, Monotone::decreasing);
    }
  }
  return p;
}

MonotoneProfile MonotoneProfile::alternating(std::size_t dim) {
  MonotoneProfile p = diagonal_increasing(dim);
  for (std::size_t i = 1; i < dim; ++i) p.set(i, i - 1, Monotone::decreasing);
  return p;
}

std::size_t MonotoneProfile::declared_count() const {
  std::size_t n = 0;
  for (auto m : entries_) n += (m != Monotone::none);
  return n;
}

}  // namespace monoroot
