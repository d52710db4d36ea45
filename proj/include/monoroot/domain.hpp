#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "monoroot/dyadic.hpp"

namespace monoroot {

using Sign = std::int8_t;
using SignVector = std::vector<Sign>;
using RealVector = std::vector<double>;

/// Default point budget for exhaustive grid routines.
inline constexpr std::uint64_t kDefaultPointCap = std::uint64_t{1} << 24;

inline Sign sign_of(std::int64_t v) { return static_cast<Sign>((v > 0) - (v < 0)); }
bool is_zero(const SignVector& v);

/// Integer coordinates of a grid point; coordinate j is lower[j] + index[j] * delta.
struct GridPoint {
  std::vector<std::int64_t> index;

  std::size_t dim() const { return index.size(); }
  std::int64_t operator[](std::size_t j) const { return index[j]; }
  std::int64_t& operator[](std::size_t j) { return index[j]; }

  friend bool operator==(const GridPoint&, const GridPoint&) = default;
  friend auto operator<=>(const GridPoint&, const GridPoint&) = default;
};

std::string to_string(const GridPoint& p);

/// The d-box [lower, upper] with lower < upper componentwise.
class BoxDomain {
 public:
  BoxDomain(RealVector lower, RealVector upper);
  static BoxDomain unit(std::size_t dim);

  std::size_t dim() const { return lower_.size(); }
  const RealVector& lower() const { return lower_; }
  const RealVector& upper() const { return upper_; }

 private:
  RealVector lower_;
  RealVector upper_;
};

/// A delta-grid on a box. Coordinates are exact dyadics; delta = 2^delta_exponent.
///
/// Grids built with `create` satisfy the dyadic assumption (every cell count a power of
/// two). Padded grids and sub-boxes produced internally may have arbitrary positive
/// cell counts; `has_power_of_two_cells` reports which kind a grid is.
class GridSpec {
 public:
  static GridSpec create(const BoxDomain& box, int delta_exponent);
  static GridSpec unit(std::size_t dim, int delta_exponent);
  static GridSpec from_parts(std::vector<Dyadic> lower, int delta_exponent,
                             std::vector<std::int64_t> cells);

  std::size_t dim() const { return lower_.size(); }
  int delta_exponent() const { return delta_exponent_; }
  Dyadic delta() const { return Dyadic::power_of_two(delta_exponent_); }
  double delta_value() const { return delta().to_double(); }
  const std::vector<std::int64_t>& cells() const { return cells_; }
  std::int64_t cells(std::size_t j) const { return cells_[j]; }
  Dyadic lower(std::size_t j) const { return lower_[j]; }
  Dyadic upper(std::size_t j) const;
  BoxDomain box() const;

  bool has_power_of_two_cells() const;
  bool contains(const GridPoint& p) const;
  /// Throws DomainError unless p is a valid index of this grid.
  void validate(const GridPoint& p) const;
  /// Number of grid points, saturating at UINT64_MAX.
  std::uint64_t point_count() const;
  Dyadic coordinate(const GridPoint& p, std::size_t j) const;
  GridPoint lower_corner() const { return GridPoint{std::vector<std::int64_t>(dim(), 0)}; }
  GridPoint upper_corner() const { return GridPoint{cells_}; }

 private:
  GridSpec(std::vector<Dyadic> lower, int delta_exponent, std::vector<std::int64_t> cells);

  std::vector<Dyadic> lower_;
  int delta_exponent_ = 0;
  std::vector<std::int64_t> cells_;
};

/// Exact real coordinates a[j] + index[j] * delta.
RealVector to_coords(const GridPoint& p, const GridSpec& g);

/// Calls fn(p) for every grid point in lexicographic index order.
void for_each_point(const GridSpec& g, const std::function<void(const GridPoint&)>& fn);

/// Calls fn(p) for every index vector with lo <= p <= hi componentwise, lexicographically.
void for_each_index(const std::vector<std::int64_t>& lo, const std::vector<std::int64_t>& hi,
                    const std::function<void(const GridPoint&)>& fn);

/// Affine rescale of an arbitrary box onto [0,1]^d with a power-of-two resolution.
struct Normalization {
  BoxDomain original;
  GridSpec unit_grid;

  RealVector to_original(const RealVector& unit_point) const;
  RealVector to_original(const GridPoint& p) const;
};

/// Chooses the smallest power-of-two cell count >= min_cells for every axis.
Normalization normalize_box(const BoxDomain& box, std::int64_t min_cells);

/// Counted evaluation oracle over real points.
class RealOracle {
 public:
  using Evaluator = std::function<RealVector(const RealVector&)>;

  RealOracle(std::size_t dim, Evaluator evaluator);

  RealVector operator()(const RealVector& x);
  std::size_t dim() const { return dim_; }
  std::uint64_t evaluations() const { return count_; }
  void reset_counter() { count_ = 0; }

 private:
  std::size_t dim_;
  Evaluator evaluator_;
  std::uint64_t count_ = 0;
};

/// Counted evaluation oracle over grid points.
///
/// The counter equals the number of evaluator invocations. With memoization enabled,
/// repeated queries are served from a cache and do not reach the evaluator, so only
/// cache misses are counted. Memoization is off by default.
class SignOracle {
 public:
  using Evaluator = std::function<SignVector(const GridPoint&)>;

  SignOracle(std::size_t dim, Evaluator evaluator);

  SignVector operator()(const GridPoint& p);
  std::size_t dim() const { return dim_; }
  std::uint64_t evaluations() const { return count_; }
  void reset_counter() { count_ = 0; }
  void set_memoization(bool enabled);

 private:
  std::size_t dim_;
  Evaluator evaluator_;
  std::uint64_t count_ = 0;
  bool memoize_ = false;
  std::map<GridPoint, SignVector> cache_;
};

/// f_i as a function of the single index along axis j, other indices fixed to `base`.
/// Holds a reference to the oracle; every call is one oracle evaluation.
class LineFunction {
 public:
  LineFunction(SignOracle& oracle, const GridSpec& grid, std::size_t component, std::size_t axis,
               GridPoint base);

  Sign operator()(std::int64_t t) const;
  std::int64_t length() const { return length_; }

 private:
  SignOracle* oracle_;
  std::size_t component_;
  std::size_t axis_;
  GridPoint base_;
  std::int64_t length_;
};

LineFunction restrict_component(SignOracle& o, std::size_t component, std::size_t axis,
                                const GridPoint& base, const GridSpec& g);

/// Every grid point where all components vanish, in lexicographic order.
std::vector<GridPoint> enumerate_roots(SignOracle& o, const GridSpec& g,
                                       std::uint64_t cap = kDefaultPointCap);

enum class Monotone : std::uint8_t { none, increasing, decreasing };

const char* to_string(Monotone m);

/// Declared monotonicity of f_i in x_j for every (i, j).
class MonotoneProfile {
 public:
  explicit MonotoneProfile(std::size_t dim);

  static MonotoneProfile diagonal_increasing(std::size_t dim);
  static MonotoneProfile exdiagonal_decreasing(std::size_t dim);
  /// All diagonal conditions increasing plus f_i decreasing in x_{i-1}.
  static MonotoneProfile alternating(std::size_t dim);

  std::size_t dim() const { return dim_; }
  Monotone at(std::size_t i, std::size_t j) const { return entries_[i * dim_ + j]; }
  void set(std::size_t i, std::size_t j, Monotone m) { entries_[i * dim_ + j] = m; }
  std::size_t declared_count() const;

  friend bool operator==(const MonotoneProfile&, const MonotoneProfile&) = default;

 private:
  std::size_t dim_;
  std::vector<Monotone> entries_;
};

}  // namespace monoroot
