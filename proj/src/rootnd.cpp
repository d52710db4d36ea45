#include "monoroot/rootnd.hpp"

#include "monoroot/bisection.hpp"
#include <map>
#include <optional>

#include "monoroot/errors.hpp"

namespace monoroot {

GridPoint LatticeMap::operator()(const GridPoint& p) const {
  const SignVector f = (*oracle_)(p);
  GridPoint q = p;
  for (std::size_t j = 0; j < q.dim(); ++j) q[j] -= f[j];
  return q;
}

LatticeMap tarski_map(SignOracle& o, const GridSpec& g) {
  if (o.dim() != g.dim()) throw DomainError("oracle and grid dimensions differ");
  return LatticeMap(o, g);
}

LatticeReport check_lattice_claims(const LatticeMap& m, std::uint64_t cap, std::size_t max_reported) {
  const GridSpec& g = m.grid();
  if (g.point_count() > cap) {
    throw SizeError("lattice check needs " + std::to_string(g.point_count()) + " points, above the cap");
  }
  LatticeReport report;
  std::map<GridPoint, GridPoint> image;
  for_each_point(g, [&](const GridPoint& p) {
    GridPoint hp = m(p);
    if (!g.contains(hp) && report.escapes.size() < max_reported) report.escapes.push_back(p);
    image.emplace(p, std::move(hp));
  });
  for (const auto& [p, hp] : image) {
    for (std::size_t j = 0; j < g.dim(); ++j) {
      if (p[j] == g.cells(j)) continue;
      GridPoint q = p;
      ++q[j];
      ++report.pairs_checked;
      const GridPoint& hq = image.at(q);
      for (std::size_t k = 0; k < g.dim(); ++k) {
        if (hp[k] > hq[k]) {
          if (report.order_violations.size() < max_reported) report.order_violations.emplace_back(p, q);
          break;
        }
      }
    }
  }
  return report;
}

Root solve_subbox(SignOracle& o, std::size_t t, std::vector<std::int64_t> lo, std::vector<std::int64_t> hi,
                  GridPoint base, const RecursiveOptions& options) {
  if (t == 0 || t > o.dim()) throw DomainError("sub-box dimension out of range");
  if (options.trace) options.trace(t, lo, hi);
  const std::size_t axis = t - 1;
  if (t == 1) {
    std::optional<Root> last;
    auto f = [&](std::int64_t x) {
      GridPoint p = base;
      p[0] = x;
      last = Root{p, o(p)};
      return last->value[0];
    };
    const std::int64_t x = bisect_root_1d(f, lo[0], hi[0]);
    if (last && last->point[0] == x) return *last;
    base[0] = x;
    return Root{base, o(base)};
  }
  if (t == 2 && !options.one_dimensional_base) {
    return solve_plane_exdiag(PlaneView{&o, base, {0, 1}, {lo[0], lo[1]}, {hi[0], hi[1]}, false});
  }
  while (true) {
    if (lo[axis] > hi[axis]) {
      throw HypothesisViolation(Hypothesis::monotonicity,
                                "sub-box along axis " + std::to_string(axis + 1) + " became empty");
    }
    const std::int64_t y = lo[axis] + (hi[axis] - lo[axis]) / 2;
    base[axis] = y;
    Root r = solve_subbox(o, t - 1, lo, hi, base, options);
    const Sign s = r.value[axis];
    if (s == 0) return r;
    if (lo[axis] == hi[axis]) {
      throw HypothesisViolation(Hypothesis::positive_switching,
                                "component " + std::to_string(axis + 1) + " nonzero on a one-layer sub-box at " +
                                    to_string(r.point));
    }
    // The face through the sub-root, shifted one layer, keeps the switching signs.
    if (s < 0) {
      for (std::size_t j = 0; j < axis; ++j) lo[j] = r.point[j];
      lo[axis] = y + 1;
    } else {
      for (std::size_t j = 0; j < axis; ++j) hi[j] = r.point[j];
      hi[axis] = y - 1;
    }
  }
}

GridPoint find_root_recursive(SignOracle& o, const GridSpec& g, const RecursiveOptions& options) {
  if (o.dim() != g.dim()) throw DomainError("oracle and grid dimensions differ");
  return solve_subbox(o, g.dim(), std::vector<std::int64_t>(g.dim(), 0), g.cells(), g.lower_corner(), options)
      .point;
}

GridPoint find_tarski_fixed_point(const LatticeMap& m, const RecursiveOptions& options) {
  const GridSpec& g = m.grid();
  SignOracle f(g.dim(), [&m](const GridPoint& p) {
    const GridPoint hp = m(p);
    SignVector s(p.dim());
    for (std::size_t j = 0; j < p.dim(); ++j) {
      const std::int64_t d = p[j] - hp[j];
      if (d < -1 || d > 1) throw EvaluationError("lattice map moves a point by more than one cell");
      s[j] = static_cast<Sign>(d);
    }
    return s;
  });
  const GridPoint p = find_root_recursive(f, g, options);
  if (m(p) != p) throw HypothesisViolation(Hypothesis::monotonicity, "returned point is not fixed");
  return p;
}

}  // namespace monoroot
