#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "monoroot/domain.hpp"

namespace monoroot {

/// A root together with the full sign vector observed when it was found.
struct Root {
  GridPoint point;
  SignVector value;
};

struct OuterProbe {
  std::int64_t at;
  /// Inner root (or clamped value) of the first component along the other axis.
  std::int64_t inner;
  Sign h;
  std::uint64_t inner_evaluations;
};

struct Root2DTrace {
  std::string solver;
  std::vector<OuterProbe> outer;
  /// direct | zipper | case1 | case2 | case3
  std::string terminal;
  std::uint64_t evaluations = 0;

  nlohmann::json to_json() const;
};

/// Two axes of a d-dimensional box, everything else fixed at `base`.
///
/// Coordinate u runs along axes[0], v along axes[1]; the relevant components are
/// f_{axes[0]} and f_{axes[1]}. With `padded` set, the view is extended by one layer
/// on each side (u in [lo0-1, hi0+1]) with the strict padding rule applied.
struct PlaneView {
  SignOracle* oracle;
  GridPoint base;
  std::array<std::size_t, 2> axes{0, 1};
  std::array<std::int64_t, 2> lo{};
  std::array<std::int64_t, 2> hi{};
  bool padded = false;

  std::int64_t first(std::size_t k) const { return padded ? lo[k] - 1 : lo[k]; }
  std::int64_t last(std::size_t k) const { return padded ? hi[k] + 1 : hi[k]; }
  /// Evaluates at (u, v); returns the point in original grid indices and the (padded) values.
  Root eval(std::int64_t u, std::int64_t v) const;
};

PlaneView whole_plane(SignOracle& o, const GridSpec& g);

/// Root of a delta-continuous positive-switching map with f_1 weakly increasing in x_1.
GridPoint find_root_diag(SignOracle& o, const GridSpec& g, Root2DTrace* trace = nullptr);

/// Root of a delta-continuous strictly positive-switching map with f_1 weakly decreasing
/// in x_2. The grid is padded by one layer internally so plain positive switching suffices.
GridPoint find_root_exdiag(SignOracle& o, const GridSpec& g, Root2DTrace* trace = nullptr);

/// As find_root_diag, for sum-switching maps.
GridPoint find_root_sum(SignOracle& o, const GridSpec& g, Root2DTrace* trace = nullptr);

/// Walks columns between y1 and z1 on rows y2, y2+1 until f = (0,0).
/// Requires f_1(y1,y2) = 0, f_2(y1,y2) = -1, f_1(z1,y2+1) = 0, f_2(z1,y2+1) = +1.
GridPoint zipper_search(SignOracle& o, const GridSpec& g, std::int64_t y1, std::int64_t z1, std::int64_t y2,
                        Root2DTrace* trace = nullptr);

Root solve_plane_diag(const PlaneView& view, bool sum_switching, Root2DTrace* trace = nullptr);
Root solve_plane_exdiag(PlaneView view, Root2DTrace* trace = nullptr);

/// Zipper on a plane. Columns run along `path` (0 for u, 1 for v) between neg_col and
/// pos_col; rows are row_lo and row_lo+1 on the other axis. f_{axes[0]} vanishes on the
/// endpoints, f_{axes[1]} is -1 at neg_col and +1 at pos_col.
Root zipper_on_plane(const PlaneView& view, std::size_t path, std::int64_t neg_col, std::int64_t pos_col,
                     std::int64_t row_lo);

}  // namespace monoroot
