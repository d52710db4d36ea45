#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "monoroot/domain.hpp"
#include "monoroot/root2d.hpp"

namespace monoroot {

/// h(p) = p - f(p) in grid indices. One oracle evaluation per map evaluation.
class LatticeMap {
 public:
  LatticeMap(SignOracle& oracle, GridSpec grid) : oracle_(&oracle), grid_(std::move(grid)) {}

  GridPoint operator()(const GridPoint& p) const;
  SignOracle& oracle() const { return *oracle_; }
  const GridSpec& grid() const { return grid_; }

 private:
  SignOracle* oracle_;
  GridSpec grid_;
};

LatticeMap tarski_map(SignOracle& o, const GridSpec& g);

struct LatticeReport {
  /// Adjacent pairs p <= q with h(p) not <= h(q).
  std::vector<std::pair<GridPoint, GridPoint>> order_violations;
  /// Points whose image leaves the grid.
  std::vector<GridPoint> escapes;
  std::uint64_t pairs_checked = 0;

  bool passed() const { return order_violations.empty() && escapes.empty(); }
};

/// Exhaustive check over adjacent pairs (p, p + e_j). Refuses above `cap` points.
LatticeReport check_lattice_claims(const LatticeMap& m, std::uint64_t cap = kDefaultPointCap,
                                   std::size_t max_reported = 64);

struct RecursiveOptions {
  /// Recurse all the way to one dimension instead of stopping at the planar solver.
  bool one_dimensional_base = false;
  /// Receives every sub-box solved, as (dimension, lower corner, upper corner).
  std::function<void(std::size_t, const std::vector<std::int64_t>&, const std::vector<std::int64_t>&)> trace;
};

/// Root of a delta-continuous positive-switching map with every f_i weakly decreasing in
/// every x_j, j != i.
GridPoint find_root_recursive(SignOracle& o, const GridSpec& g, const RecursiveOptions& options = {});

/// Root of f on the box [lo, hi] over axes 0..t-1, with axes t..d-1 fixed at `base`.
Root solve_subbox(SignOracle& o, std::size_t t, std::vector<std::int64_t> lo, std::vector<std::int64_t> hi,
                  GridPoint base, const RecursiveOptions& options = {});

/// A point with h(p) = p.
GridPoint find_tarski_fixed_point(const LatticeMap& m, const RecursiveOptions& options = {});

}  // namespace monoroot
