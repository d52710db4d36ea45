#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "json.hpp"

#include "monoroot/domain.hpp"

namespace monoroot {

using Rational = boost::multiprecision::cpp_rational;

/// The exact value of a finite double.
Rational exact_rational(double v);

/// v(a, b) for 0 <= a <= b <= 1.
using Valuation = std::function<Rational(const Rational& a, const Rational& b)>;

/// Constant density densities[k] on [breakpoints[k], breakpoints[k+1]].
Valuation piecewise_constant(std::vector<Rational> breakpoints, std::vector<Rational> densities);
/// Density linear between its values at the breakpoints.
Valuation piecewise_linear(std::vector<Rational> breakpoints, std::vector<Rational> densities);

/// A valuation with a query counter.
class CakeAgent {
 public:
  explicit CakeAgent(Valuation v) : valuation_(std::move(v)) {}

  Rational value(const Rational& a, const Rational& b);
  std::uint64_t queries() const { return queries_; }
  void reset_queries() { queries_ = 0; }
  const Valuation& valuation() const { return valuation_; }

 private:
  Valuation valuation_;
  std::uint64_t queries_ = 0;
};

struct Piece {
  Rational lo;
  Rational hi;
  bool empty() const { return lo >= hi; }
};

using Partition = std::vector<Piece>;

/// Cut i at max_{j <= i} x_j; pieces [0,c_1], [c_1,c_2], ..., [c_d,1].
Partition partition_from_point(const std::vector<Rational>& x);
std::vector<Rational> cuts_from_point(const std::vector<Rational>& x);

/// Lowest-index non-empty piece of maximal value. One query per piece.
std::size_t preferred_piece(CakeAgent& agent, const Partition& partition);

class CakeInstance {
 public:
  /// r = 2^r_exponent. Requires every group size >= 1, sizes summing to the number of agents,
  /// and every agent valuing the whole cake positively.
  CakeInstance(std::vector<CakeAgent> agents, std::vector<std::int64_t> groups, int r_exponent);

  std::size_t n() const { return agents_.size(); }
  std::size_t m() const { return groups_.size(); }
  std::size_t d() const { return groups_.size() - 1; }
  int r_exponent() const { return r_exponent_; }
  Rational r() const;
  /// Cells of the r-grid per axis.
  std::int64_t cells() const { return std::int64_t{1} << -r_exponent_; }
  std::vector<CakeAgent>& agents() { return agents_; }
  const std::vector<std::int64_t>& groups() const { return groups_; }
  std::uint64_t total_queries() const;
  void reset_queries();

 private:
  std::vector<CakeAgent> agents_;
  std::vector<std::int64_t> groups_;
  int r_exponent_;
};

/// {agents: [{type, breakpoints, densities}], groups: [...], r: "2^-k"}.
CakeInstance cake_instance_from_json(const nlohmann::json& j);

/// Random piecewise-constant agents.
CakeInstance random_cake_instance(std::size_t n, std::vector<std::int64_t> groups, int r_exponent,
                                  std::uint64_t seed);

/// r-grid point q (indices in [0, 1/r]) as exact coordinates.
std::vector<Rational> r_grid_coords(const GridPoint& q, const CakeInstance& inst);

/// Preferred piece of every agent at r-grid point q. n * m queries.
std::vector<std::size_t> preferences_on_grid(const GridPoint& q, CakeInstance& inst);
/// Number of agents preferring each piece at r-grid point q. n * m queries.
std::vector<std::int64_t> g_on_grid(const GridPoint& q, CakeInstance& inst);

/// Barycentric decomposition of x within its Freudenthal simplex; zero-weight corners omitted.
struct Simplex {
  std::vector<GridPoint> corners;
  std::vector<Rational> weights;
};

/// Coordinates are divided by r = 1 / cells; the cell is clamped so x_j = 1 uses the last cell.
Simplex freudenthal_simplex(const std::vector<Rational>& x, std::int64_t cells);

using CornerCounts = std::function<std::vector<std::int64_t>(const GridPoint&)>;

std::vector<Rational> interpolate(const Simplex& s, const CornerCounts& corner);
std::vector<Rational> interpolate_g(const std::vector<Rational>& x, CakeInstance& inst);
/// g_i - k_i for i < m - 1 (the last component is dropped).
std::vector<Rational> f_from_g(const std::vector<Rational>& g, const std::vector<std::int64_t>& k);

/// The discretized cake map on the delta-grid, with per-corner preference caching.
class CakeProblem {
 public:
  explicit CakeProblem(CakeInstance& inst);

  int delta_exponent() const { return delta_exponent_; }
  const GridSpec& grid() const { return grid_; }
  RealOracle& real() { return *real_; }
  SignOracle& sign() { return *sign_; }
  double epsilon() const { return 0.125; }
  /// Cached preferences at an r-grid corner.
  const std::vector<std::size_t>& preferences(const GridPoint& q);
  std::size_t corners_evaluated() const { return cache_.size(); }
  /// Exact coordinates of a delta-grid point.
  std::vector<Rational> coords(const GridPoint& p) const;

 private:
  CakeInstance* inst_;
  int delta_exponent_;
  GridSpec grid_;
  std::map<GridPoint, std::vector<std::size_t>> cache_;
  std::unique_ptr<RealOracle> real_;
  std::unique_ptr<SignOracle> sign_;
};

struct HallResult {
  std::vector<std::size_t> assignment;
  /// Corner at which each agent prefers its piece.
  std::vector<GridPoint> certificates;
};

/// Capacity matching: agent a may take piece j if it prefers j at one of the corners.
/// prefs[c][a] is agent a's preferred piece at corners[c]. Throws ReductionViolation if
/// no assignment fills every piece to its size.
HallResult hall_assignment(const std::vector<GridPoint>& corners, const std::vector<std::vector<std::size_t>>& prefs,
                           const std::vector<std::int64_t>& k);
/// Matching over the support corners of the simplex containing x.
HallResult hall_assignment(const std::vector<Rational>& x, CakeInstance& inst);

struct Allocation {
  std::vector<Rational> point;
  std::vector<Rational> cuts;
  std::vector<std::size_t> assignment;
  std::vector<GridPoint> certificates;

  nlohmann::json to_json() const;
};

struct CakeSolveStats {
  GridPoint root;
  int delta_exponent = 0;
  std::uint64_t evaluations = 0;
  std::uint64_t queries = 0;
  std::uint64_t corners = 0;
};

/// r-near envy-free allocation for three groups.
Allocation solve_three_groups(CakeInstance& inst, CakeSolveStats* stats = nullptr);

struct AgentReport {
  std::size_t agent;
  bool ok;
  std::string reason;
};

struct EnvyReport {
  bool ok = true;
  bool capacities_ok = true;
  std::vector<AgentReport> agents;

  nlohmann::json to_json() const;
};

EnvyReport verify_near_envy_free(const Allocation& alloc, CakeInstance& inst);

}  // namespace monoroot
