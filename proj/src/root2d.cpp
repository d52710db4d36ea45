#include "monoroot/root2d.hpp"

#include <algorithm>
#include <map>
#include <optional>

#include "monoroot/bisection.hpp"
#include "monoroot/errors.hpp"

namespace monoroot {

namespace {

struct Counter {
  const SignOracle* oracle;
  std::uint64_t start;
  std::uint64_t used() const { return oracle->evaluations() - start; }
};

std::int64_t midpoint(std::int64_t a, std::int64_t b) { return a + (b - a) / 2; }

HypothesisViolation continuity_error(const GridPoint& p, const GridPoint& q) {
  return HypothesisViolation(Hypothesis::delta_continuity,
                             "neighbors " + to_string(p) + " and " + to_string(q) + " have opposite signs");
}

// g(v) for the diagonal solver: root of u -> f_a(u, v).
struct InnerDiag {
  std::int64_t u;
  Root at;
};

class DiagSolver {
 public:
  DiagSolver(const PlaneView& view, bool sum, Root2DTrace* trace)
      : view_(view), sum_(sum), trace_(trace), counter_{view.oracle, view.oracle->evaluations()} {}

  Root run() {
    auto h = [this](std::int64_t v) { return inner(v).at.value[view_.axes[1]]; };
    const Bracket b = bisect_bracket(h, view_.lo[1], view_.hi[1]);
    if (b.exact_root) return finish(probes_.at(*b.exact_root).at, "direct");

    const InnerDiag& lo = inner(b.lo);
    const Sign hlo = lo.at.value[view_.axes[1]];
    if (hlo == 0) return finish(lo.at, "direct");
    if (hlo > 0) {
      throw HypothesisViolation(Hypothesis::positive_switching,
                                "second component positive on its lower face at " + to_string(lo.at.point));
    }
    if (b.hi == b.lo) {
      throw HypothesisViolation(Hypothesis::positive_switching, "degenerate range has a nonzero value");
    }
    const InnerDiag& hi = inner(b.hi);
    const Sign hhi = hi.at.value[view_.axes[1]];
    if (hhi == 0) return finish(hi.at, "direct");
    if (hhi < 0) {
      throw HypothesisViolation(sum_ ? Hypothesis::sum_switching : Hypothesis::positive_switching,
                                "second component negative where the first vanishes on the upper face at " +
                                    to_string(hi.at.point));
    }
    return finish(zipper_on_plane(view_, 0, lo.u, hi.u, b.lo), "zipper");
  }

 private:
  const InnerDiag& inner(std::int64_t v) {
    if (auto it = probes_.find(v); it != probes_.end()) return it->second;
    const std::uint64_t before = view_.oracle->evaluations();
    std::map<std::int64_t, Root> seen;
    auto f1 = [&](std::int64_t u) {
      Root r = view_.eval(u, v);
      const Sign s = r.value[view_.axes[0]];
      seen.insert_or_assign(u, std::move(r));
      return s;
    };
    const std::int64_t u = bisect_root_1d(f1, view_.lo[0], view_.hi[0]);
    auto it = seen.find(u);
    Root at = it != seen.end() ? it->second : view_.eval(u, v);
    const auto& stored = probes_.emplace(v, InnerDiag{u, std::move(at)}).first->second;
    if (trace_) {
      trace_->outer.push_back(
          {v, u, stored.at.value[view_.axes[1]], view_.oracle->evaluations() - before});
    }
    return stored;
  }

  Root finish(Root r, const char* tag) {
    if (trace_) {
      trace_->terminal = tag;
      trace_->evaluations = counter_.used();
    }
    return r;
  }

  const PlaneView& view_;
  bool sum_;
  Root2DTrace* trace_;
  Counter counter_;
  std::map<std::int64_t, InnerDiag> probes_;
};

// g(u) for the ex-diagonal solver: root of v -> f_a(u, v) (decreasing), or a clamped end.
struct InnerExdiag {
  enum Kind { root, clamped_low, clamped_high } kind;
  std::int64_t v;
  Root at;
};

class ExdiagSolver {
 public:
  ExdiagSolver(PlaneView view, Root2DTrace* trace)
      : view_(std::move(view)), trace_(trace), counter_{view_.oracle, view_.oracle->evaluations()} {}

  Root run() {
    const std::size_t c = view_.axes[1];
    auto h = [this, c](std::int64_t u) { return inner(u).at.value[c]; };
    const std::int64_t ulo = view_.first(0);
    const std::int64_t uhi = view_.last(0);
    const Bracket b = bisect_bracket(h, ulo, uhi);
    if (b.exact_root) return finish(probes_.at(*b.exact_root).at, "direct");

    const InnerExdiag lo = inner(b.lo);
    if (lo.at.value[c] == 0) return finish(lo.at, "direct");
    if (lo.at.value[c] > 0) {
      throw HypothesisViolation(Hypothesis::positive_switching, "outer function positive at its lower end");
    }
    if (b.hi == b.lo) {
      throw HypothesisViolation(Hypothesis::positive_switching, "degenerate range has a nonzero value");
    }
    const InnerExdiag hi = inner(b.hi);
    if (hi.at.value[c] == 0) return finish(hi.at, "direct");
    if (hi.at.value[c] < 0) {
      throw HypothesisViolation(Hypothesis::positive_switching, "outer function negative at its upper end");
    }
    // h(lo) = -1 rules out clamping to the top, h(hi) = +1 rules out clamping to the bottom.
    if (lo.kind == InnerExdiag::clamped_high || hi.kind == InnerExdiag::clamped_low) {
      throw HypothesisViolation(Hypothesis::positive_switching,
                                "second component has the wrong sign on a face where the first is nonzero");
    }
    const std::int64_t vlo = view_.first(1);
    const std::int64_t vhi = view_.last(1);
    if (lo.kind == InnerExdiag::root && hi.kind == InnerExdiag::root) {
      return finish(zipper_on_plane(view_, 1, lo.v, hi.v, b.lo), "case1");
    }
    if (lo.kind == InnerExdiag::clamped_low && hi.kind == InnerExdiag::root) {
      // f_a vanishes on column b.hi below hi.v.
      return finish(column_search(b.hi, vlo, hi.v, std::nullopt, hi.at.value[c]), "case2");
    }
    if (lo.kind == InnerExdiag::root && hi.kind == InnerExdiag::clamped_high) {
      // f_a vanishes on column b.lo above lo.v.
      return finish(column_search(b.lo, lo.v, vhi, lo.at.value[c], std::nullopt), "case3");
    }
    throw continuity_error(view_.eval(b.lo, vlo).point, view_.eval(b.hi, vlo).point);
  }

 private:
  Root column_search(std::int64_t u, std::int64_t from, std::int64_t to, std::optional<Sign> from_value,
                     std::optional<Sign> to_value) {
    const std::size_t a = view_.axes[0];
    const std::size_t c = view_.axes[1];
    std::optional<Root> found;
    auto f2 = [&](std::int64_t v) {
      Root r = view_.eval(u, v);
      const Sign s = r.value[c];
      if (r.value[a] != 0) {
        throw HypothesisViolation(Hypothesis::delta_continuity,
                                  "first component nonzero on the segment where it must vanish at " +
                                      to_string(r.point));
      }
      if (s == 0) found = std::move(r);
      return s;
    };
    BisectionOptions opts;
    opts.lo_value = from_value;
    opts.hi_value = to_value;
    const std::int64_t v = bisect_root_1d(f2, from, to, opts);
    if (found && found->value[c] == 0) return *found;
    return view_.eval(u, v);
  }

  InnerExdiag inner(std::int64_t u) {
    if (auto it = probes_.find(u); it != probes_.end()) return it->second;
    const std::size_t a = view_.axes[0];
    const std::uint64_t before = view_.oracle->evaluations();
    const std::int64_t vlo = view_.first(1);
    const std::int64_t vhi = view_.last(1);
    std::map<std::int64_t, Root> seen;
    auto f1 = [&](std::int64_t v) {
      Root r = view_.eval(u, v);
      const Sign s = r.value[a];
      seen.insert_or_assign(v, std::move(r));
      return s;
    };
    InnerExdiag result{InnerExdiag::root, vlo, {}};
    const Sign bottom = f1(vlo);
    if (bottom < 0) {
      result = {InnerExdiag::clamped_low, vlo, seen.at(vlo)};
    } else {
      const Sign top = f1(vhi);
      if (top > 0) {
        result = {InnerExdiag::clamped_high, vhi, seen.at(vhi)};
      } else {
        BisectionOptions opts;
        opts.orientation = Orientation::negative;
        opts.lo_value = bottom;
        opts.hi_value = top;
        const std::int64_t v = bisect_root_1d(f1, vlo, vhi, opts);
        auto it = seen.find(v);
        result = {InnerExdiag::root, v, it != seen.end() ? it->second : view_.eval(u, v)};
      }
    }
    if (trace_) {
      trace_->outer.push_back({u, result.v, result.at.value[view_.axes[1]], view_.oracle->evaluations() - before});
    }
    return probes_.emplace(u, std::move(result)).first->second;
  }

  Root finish(Root r, const char* tag) {
    if (trace_) {
      trace_->terminal = tag;
      trace_->evaluations = counter_.used();
    }
    return r;
  }

  PlaneView view_;
  Root2DTrace* trace_;
  Counter counter_;
  std::map<std::int64_t, InnerExdiag> probes_;
};

void check_plane(const GridSpec& g, SignOracle& o) {
  if (g.dim() != 2 || o.dim() != 2) throw DomainError("two-dimensional solver needs a two-dimensional grid and oracle");
}

}  // namespace

nlohmann::json Root2DTrace::to_json() const {
  nlohmann::json probes = nlohmann::json::array();
  for (const auto& p : outer) {
    probes.push_back({{"at", p.at}, {"inner", p.inner}, {"h", p.h}, {"inner_evaluations", p.inner_evaluations}});
  }
  return {{"solver", solver}, {"outer", probes}, {"terminal", terminal}, {"evaluations", evaluations}};
}

Root PlaneView::eval(std::int64_t u, std::int64_t v) const {
  const std::array<std::int64_t, 2> q{u, v};
  GridPoint p = base;
  for (std::size_t k = 0; k < 2; ++k) {
    if (q[k] < first(k) || q[k] > last(k)) throw DomainError("plane index out of range");
    p[axes[k]] = std::clamp(q[k], lo[k], hi[k]);
  }
  SignVector value = (*oracle)(p);
  if (padded) {
    for (std::size_t k = 0; k < 2; ++k) {
      if (q[k] < lo[k]) value[axes[k]] = -1;
      if (q[k] > hi[k]) value[axes[k]] = 1;
    }
  }
  return Root{std::move(p), std::move(value)};
}

PlaneView whole_plane(SignOracle& o, const GridSpec& g) {
  check_plane(g, o);
  return PlaneView{&o, g.lower_corner(), {0, 1}, {0, 0}, {g.cells(0), g.cells(1)}, false};
}

Root zipper_on_plane(const PlaneView& view, std::size_t path, std::int64_t neg_col, std::int64_t pos_col,
                     std::int64_t row_lo) {
  const std::size_t zero = view.axes[0];
  const std::size_t target = view.axes[1];
  auto at = [&](std::int64_t col, std::int64_t row) {
    return path == 0 ? view.eval(col, row) : view.eval(row, col);
  };
  std::optional<GridPoint> neg_point, pos_point;
  while (std::abs(pos_col - neg_col) > 1) {
    const std::int64_t m = midpoint(neg_col, pos_col);
    Root r = at(m, row_lo);
    if (r.value[zero] != 0) {
      Root upper = at(m, row_lo + 1);
      if (upper.value[zero] != 0) {
        throw HypothesisViolation(Hypothesis::delta_continuity,
                                  "first component nonzero on both rows at " + to_string(r.point) + " and " +
                                      to_string(upper.point));
      }
      r = std::move(upper);
    }
    const Sign s = r.value[target];
    if (s == 0) return r;
    if (s < 0) {
      neg_col = m;
      neg_point = r.point;
    } else {
      pos_col = m;
      pos_point = r.point;
    }
  }
  // Adjacent end columns already contradict continuity; report a root on the cross diagonal if there is one.
  for (auto [col, row] : {std::pair{neg_col, row_lo + 1}, std::pair{pos_col, row_lo}}) {
    Root r = at(col, row);
    if (is_zero(SignVector{r.value[zero], r.value[target]})) return r;
  }
  const GridPoint p = neg_point ? *neg_point : at(neg_col, row_lo).point;
  const GridPoint q = pos_point ? *pos_point : at(pos_col, row_lo + 1).point;
  throw continuity_error(p, q);
}

Root solve_plane_diag(const PlaneView& view, bool sum_switching, Root2DTrace* trace) {
  if (trace) trace->solver = sum_switching ? "sum" : "diag";
  return DiagSolver(view, sum_switching, trace).run();
}

Root solve_plane_exdiag(PlaneView view, Root2DTrace* trace) {
  if (trace) trace->solver = "exdiag";
  view.padded = true;
  return ExdiagSolver(std::move(view), trace).run();
}

GridPoint find_root_diag(SignOracle& o, const GridSpec& g, Root2DTrace* trace) {
  return solve_plane_diag(whole_plane(o, g), false, trace).point;
}

GridPoint find_root_sum(SignOracle& o, const GridSpec& g, Root2DTrace* trace) {
  return solve_plane_diag(whole_plane(o, g), true, trace).point;
}

GridPoint find_root_exdiag(SignOracle& o, const GridSpec& g, Root2DTrace* trace) {
  return solve_plane_exdiag(whole_plane(o, g), trace).point;
}

GridPoint zipper_search(SignOracle& o, const GridSpec& g, std::int64_t y1, std::int64_t z1, std::int64_t y2,
                        Root2DTrace* trace) {
  const PlaneView view = whole_plane(o, g);
  if (y2 < 0 || y2 + 1 > g.cells(1)) throw DomainError("zipper rows out of range");
  const std::uint64_t before = o.evaluations();
  Root r = zipper_on_plane(view, 0, y1, z1, y2);
  if (trace) {
    trace->solver = "zipper";
    trace->terminal = "zipper";
    trace->evaluations = o.evaluations() - before;
  }
  return r.point;
}

}  // namespace monoroot
