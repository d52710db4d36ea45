#include "monoroot/discretize.hpp"

#include <cmath>
#include <functional>

#include "monoroot/errors.hpp"
#include "monoroot/random.hpp"

namespace monoroot {

namespace {

// Real-valued tables are kept smaller than sign tables; above this they are sampled.
constexpr std::uint64_t kRealTableCap = std::uint64_t{1} << 22;

template <class T>
using Fetch = std::function<std::vector<T>(const GridPoint&)>;

Fetch<Sign> fetch_signs(SignOracle& o) {
  return [&o](const GridPoint& p) { return o(p); };
}

Fetch<double> fetch_reals(RealOracle& o, const GridSpec& g) {
  return [&o, &g](const GridPoint& p) {
    RealVector v = o(to_coords(p, g));
    for (double x : v) {
      if (!std::isfinite(x)) throw EvaluationError("real oracle returned a non-finite value at " + to_string(p));
    }
    return v;
  };
}

// Row-major table of every grid point's values.
template <class T>
class GridTable {
 public:
  GridTable(const GridSpec& g, const Fetch<T>& fetch) : g_(g), strides_(g.dim()) {
    std::uint64_t stride = 1;
    for (std::size_t j = g.dim(); j-- > 0;) {
      strides_[j] = stride;
      stride *= static_cast<std::uint64_t>(g.cells(j)) + 1;
    }
    data_.resize(stride * g.dim());
    for_each_point(g, [&](const GridPoint& p) {
      const auto v = fetch(p);
      std::copy(v.begin(), v.end(), data_.begin() + static_cast<std::ptrdiff_t>(offset(p)));
    });
  }

  T at(const GridPoint& p, std::size_t component) const { return data_[offset(p) + component]; }

 private:
  std::uint64_t offset(const GridPoint& p) const {
    std::uint64_t o = 0;
    for (std::size_t j = 0; j < p.dim(); ++j) o += static_cast<std::uint64_t>(p[j]) * strides_[j];
    return o * g_.dim();
  }

  const GridSpec& g_;
  std::vector<std::uint64_t> strides_;
  std::vector<T> data_;
};

GridPoint random_point(const GridSpec& g, Rng& rng) {
  GridPoint p = g.lower_corner();
  for (std::size_t j = 0; j < g.dim(); ++j) p[j] = rng.integer(0, g.cells(j));
  return p;
}

void add_violation(CheckReport& r, const CheckOptions& options, Violation v) {
  if (r.violations.size() < options.max_violations) r.violations.push_back(std::move(v));
}

std::uint64_t face_point_count(const GridSpec& g, std::size_t axis) {
  return g.point_count() / (static_cast<std::uint64_t>(g.cells(axis)) + 1);
}

// Calls fn on every point of face x_axis = value (or a deterministic sample of it).
void visit_face(const GridSpec& g, std::size_t axis, std::int64_t value, const CheckOptions& options, Rng& rng,
                bool sampled, const std::function<void(const GridPoint&)>& fn) {
  if (!sampled) {
    std::vector<std::int64_t> lo(g.dim(), 0), hi = g.cells();
    lo[axis] = hi[axis] = value;
    for_each_index(lo, hi, fn);
    return;
  }
  for (std::uint64_t s = 0; s < options.samples; ++s) {
    GridPoint p = random_point(g, rng);
    p[axis] = value;
    fn(p);
  }
}

template <class T>
CheckReport switching_check(const Fetch<T>& fetch, const GridSpec& g, bool strict, bool sum,
                            const CheckOptions& options) {
  CheckReport r;
  r.property = sum ? "sum-switching" : (strict ? "strict-positive-switching" : "positive-switching");
  const std::size_t d = g.dim();
  bool sampled = false;
  for (std::size_t i = 0; i < d; ++i) sampled = sampled || face_point_count(g, i) > options.cap;
  r.mode = sampled ? CheckMode::sampled : CheckMode::exhaustive;
  r.component_passed.assign(d, true);
  Rng rng(options.seed);
  for (std::size_t i = 0; i < d; ++i) {
    visit_face(g, i, 0, options, rng, sampled, [&](const GridPoint& p) {
      ++r.points_checked;
      const T v = fetch(p)[i];
      if (strict ? !(v < 0) : !(v <= 0)) {
        r.component_passed[i] = false;
        add_violation(r, options, {{p}, i, "lower face value must be " + std::string(strict ? "< 0" : "<= 0")});
      }
    });
    visit_face(g, i, g.cells(i), options, rng, sampled, [&](const GridPoint& p) {
      ++r.points_checked;
      const auto values = fetch(p);
      double v = 0;
      if (sum) {
        for (std::size_t j = 0; j <= i; ++j) v += static_cast<double>(values[j]);
      } else {
        v = static_cast<double>(values[i]);
      }
      if (strict ? !(v > 0) : !(v >= 0)) {
        r.component_passed[i] = false;
        add_violation(r, options,
                      {{p}, i, sum ? "prefix sum on upper face must be >= 0"
                                   : "upper face value must be " + std::string(strict ? "> 0" : ">= 0")});
      }
    });
  }
  return r;
}

struct PairVerdict {
  bool increasing_ok = true;
  bool decreasing_ok = true;
};

// Visits every pair (p, p + e_j) exhaustively, or a sample of them.
template <class T>
void visit_axis_pairs(const Fetch<T>& fetch, const GridSpec& g, std::uint64_t table_cap, const CheckOptions& options,
                      CheckMode& mode,
                      const std::function<void(const GridPoint&, const GridPoint&, std::size_t axis,
                                               const std::function<T(const GridPoint&, std::size_t)>&)>& fn) {
  const std::size_t d = g.dim();
  if (g.point_count() <= std::min(options.cap, table_cap)) {
    mode = CheckMode::exhaustive;
    GridTable<T> table(g, fetch);
    auto value = [&table](const GridPoint& p, std::size_t c) { return table.at(p, c); };
    for_each_point(g, [&](const GridPoint& p) {
      for (std::size_t j = 0; j < d; ++j) {
        if (p[j] == g.cells(j)) continue;
        GridPoint q = p;
        ++q[j];
        fn(p, q, j, value);
      }
    });
    return;
  }
  mode = CheckMode::sampled;
  Rng rng(options.seed);
  for (std::uint64_t s = 0; s < options.samples; ++s) {
    GridPoint p = random_point(g, rng);
    const auto vp = fetch(p);
    for (std::size_t j = 0; j < d; ++j) {
      if (p[j] == g.cells(j)) continue;
      GridPoint q = p;
      ++q[j];
      const auto vq = fetch(q);
      auto value = [&](const GridPoint& x, std::size_t c) { return x == p ? vp[c] : vq[c]; };
      fn(p, q, j, value);
    }
  }
}

template <class T>
CheckReport monotonicity_check(const Fetch<T>& fetch, const MonotoneProfile& profile, const GridSpec& g,
                               std::uint64_t table_cap, const CheckOptions& options) {
  if (profile.dim() != g.dim()) throw DomainError("profile dimension does not match the grid");
  CheckReport r;
  r.property = "monotone-profile";
  const std::size_t d = g.dim();
  visit_axis_pairs<T>(fetch, g, table_cap, options, r.mode,
                      [&](const GridPoint& p, const GridPoint& q, std::size_t j, const auto& value) {
                        ++r.points_checked;
                        for (std::size_t i = 0; i < d; ++i) {
                          const Monotone m = profile.at(i, j);
                          if (m == Monotone::none) continue;
                          const T a = value(p, i);
                          const T b = value(q, i);
                          const bool bad = (m == Monotone::increasing) ? (b < a) : (b > a);
                          if (bad) {
                            add_violation(r, options,
                                          {{p, q}, i,
                                           "f_" + std::to_string(i + 1) + " not " + to_string(m) + " in x_" +
                                               std::to_string(j + 1)});
                          }
                        }
                      });
  return r;
}

template <class T>
MonotoneProfile observed(const Fetch<T>& fetch, const GridSpec& g, std::uint64_t table_cap,
                         const CheckOptions& options) {
  const std::size_t d = g.dim();
  std::vector<PairVerdict> verdicts(d * d);
  CheckMode mode;
  visit_axis_pairs<T>(fetch, g, table_cap, options, mode,
                      [&](const GridPoint& p, const GridPoint& q, std::size_t j, const auto& value) {
                        for (std::size_t i = 0; i < d; ++i) {
                          const T a = value(p, i);
                          const T b = value(q, i);
                          if (b < a) verdicts[i * d + j].increasing_ok = false;
                          if (b > a) verdicts[i * d + j].decreasing_ok = false;
                        }
                      });
  MonotoneProfile result(d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      const auto& v = verdicts[i * d + j];
      if (v.increasing_ok) {
        result.set(i, j, Monotone::increasing);
      } else if (v.decreasing_ok) {
        result.set(i, j, Monotone::decreasing);
      }
    }
  }
  return result;
}

// Offsets in {-1,0,1}^d that are lexicographically positive, so each neighbor pair is seen once.
std::vector<std::vector<int>> positive_offsets(std::size_t d) {
  std::vector<std::vector<int>> out;
  std::vector<std::int64_t> lo(d, -1), hi(d, 1);
  for_each_index(lo, hi, [&](const GridPoint& p) {
    for (std::size_t j = 0; j < d; ++j) {
      if (p[j] == 0) continue;
      if (p[j] > 0) out.emplace_back(p.index.begin(), p.index.end());
      return;
    }
  });
  return out;
}

}  // namespace

DiscretizationParams DiscretizationParams::choose(double epsilon, double lipschitz, const BoxDomain& box) {
  if (!(epsilon > 0) || !(lipschitz > 0)) throw DomainError("epsilon and the Lipschitz constant must be positive");
  int exponent = static_cast<int>(std::floor(std::log2(epsilon / lipschitz)));
  while (std::ldexp(1.0, exponent) > epsilon / lipschitz) --exponent;
  for (std::size_t j = 0; j < box.dim(); ++j) {
    int side_exp = 0;
    if (!Dyadic::from_double(box.upper()[j] - box.lower()[j]).is_power_of_two(&side_exp)) {
      throw DomainError("box side is not a power of two; normalize the box first");
    }
    exponent = std::min(exponent, side_exp);
  }
  return DiscretizationParams{epsilon, lipschitz, exponent};
}

const char* to_string(CheckMode m) { return m == CheckMode::exhaustive ? "exhaustive" : "sampled"; }

Sign discretize_value(double v, double epsilon) {
  if (v < -epsilon) return -1;
  if (v > epsilon) return 1;
  return 0;
}

SignOracle discretize(RealOracle& o, double epsilon, const GridSpec& g) {
  if (o.dim() != g.dim()) throw DomainError("oracle and grid dimensions differ");
  if (!(epsilon >= 0)) throw DomainError("epsilon must be non-negative");
  return SignOracle(g.dim(), [&o, g, epsilon](const GridPoint& p) {
    const RealVector v = o(to_coords(p, g));
    SignVector s(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!std::isfinite(v[i])) throw EvaluationError("real oracle returned a non-finite value at " + to_string(p));
      s[i] = discretize_value(v[i], epsilon);
    }
    return s;
  });
}

SignOracle discretize(RealOracle& o, const DiscretizationParams& params, const GridSpec& g) {
  if (g.delta_exponent() != params.delta_exponent) throw DomainError("grid spacing does not match the parameters");
  if (std::ldexp(1.0, params.delta_exponent) > params.epsilon / params.lipschitz) {
    throw DomainError("delta exceeds epsilon / L");
  }
  return discretize(o, params.epsilon, g);
}

CheckReport check_delta_continuity(SignOracle& o, const GridSpec& g, const CheckOptions& options) {
  CheckReport r;
  r.property = "delta-continuity";
  const std::size_t d = g.dim();
  const auto offsets = positive_offsets(d);
  auto compare = [&](const GridPoint& p, const SignVector& vp, const GridPoint& q, const SignVector& vq) {
    for (std::size_t i = 0; i < d; ++i) {
      if (vp[i] * vq[i] == -1) add_violation(r, options, {{p, q}, i, "opposite signs on neighboring points"});
    }
  };
  if (g.point_count() <= options.cap) {
    r.mode = CheckMode::exhaustive;
    GridTable<Sign> table(g, fetch_signs(o));
    for_each_point(g, [&](const GridPoint& p) {
      ++r.points_checked;
      for (const auto& off : offsets) {
        GridPoint q = p;
        for (std::size_t j = 0; j < d; ++j) q[j] += off[j];
        if (!g.contains(q)) continue;
        for (std::size_t i = 0; i < d; ++i) {
          if (table.at(p, i) * table.at(q, i) == -1) {
            add_violation(r, options, {{p, q}, i, "opposite signs on neighboring points"});
          }
        }
      }
    });
    return r;
  }
  r.mode = CheckMode::sampled;
  Rng rng(options.seed);
  for (std::uint64_t s = 0; s < options.samples; ++s) {
    const GridPoint p = random_point(g, rng);
    const auto& off = offsets[static_cast<std::size_t>(rng.integer(0, static_cast<std::int64_t>(offsets.size()) - 1))];
    GridPoint q = p;
    for (std::size_t j = 0; j < d; ++j) q[j] += off[j];
    if (!g.contains(q)) continue;
    ++r.points_checked;
    compare(p, o(p), q, o(q));
  }
  return r;
}

CheckReport check_positive_switching(SignOracle& o, const GridSpec& g, bool strict, const CheckOptions& options) {
  return switching_check<Sign>(fetch_signs(o), g, strict, false, options);
}

CheckReport check_positive_switching(RealOracle& o, const GridSpec& g, bool strict, const CheckOptions& options) {
  return switching_check<double>(fetch_reals(o, g), g, strict, false, options);
}

CheckReport check_sum_switching(SignOracle& o, const GridSpec& g, const CheckOptions& options) {
  return switching_check<Sign>(fetch_signs(o), g, false, true, options);
}

CheckReport check_sum_switching(RealOracle& o, const GridSpec& g, const CheckOptions& options) {
  return switching_check<double>(fetch_reals(o, g), g, false, true, options);
}

CheckReport check_monotonicity(SignOracle& o, const MonotoneProfile& profile, const GridSpec& g,
                               const CheckOptions& options) {
  return monotonicity_check<Sign>(fetch_signs(o), profile, g, options.cap, options);
}

CheckReport check_monotonicity(RealOracle& o, const MonotoneProfile& profile, const GridSpec& g,
                               const CheckOptions& options) {
  return monotonicity_check<double>(fetch_reals(o, g), profile, g, kRealTableCap, options);
}

MonotoneProfile observed_monotonicity(SignOracle& o, const GridSpec& g, const CheckOptions& options) {
  return observed<Sign>(fetch_signs(o), g, options.cap, options);
}

MonotoneProfile observed_monotonicity(RealOracle& o, const GridSpec& g, const CheckOptions& options) {
  return observed<double>(fetch_reals(o, g), g, kRealTableCap, options);
}

PaddedProblem pad_strict(SignOracle& o, const GridSpec& g) {
  if (o.dim() != g.dim()) throw DomainError("oracle and grid dimensions differ");
  std::vector<Dyadic> lower;
  std::vector<std::int64_t> cells;
  for (std::size_t j = 0; j < g.dim(); ++j) {
    lower.push_back(g.lower(j) - g.delta());
    cells.push_back(g.cells(j) + 2);
  }
  GridSpec padded = GridSpec::from_parts(std::move(lower), g.delta_exponent(), std::move(cells));
  SignOracle oracle(g.dim(), [&o, g](const GridPoint& q) {
    GridPoint p = q;
    for (std::size_t j = 0; j < g.dim(); ++j) p[j] = std::clamp<std::int64_t>(q[j] - 1, 0, g.cells(j));
    SignVector v = o(p);
    for (std::size_t i = 0; i < g.dim(); ++i) {
      if (q[i] == 0) v[i] = -1;
      if (q[i] == g.cells(i) + 2) v[i] = 1;
    }
    return v;
  });
  return PaddedProblem{std::move(oracle), std::move(padded)};
}

}  // namespace monoroot
