#include "doctest.h"

#include <cmath>
#include <limits>

#include "monoroot/discretize.hpp"
#include "monoroot/errors.hpp"
#include "monoroot/instances.hpp"
#include "oracles.hpp"

using namespace monoroot;

namespace {

SignOracle from_table(std::vector<Sign> values) {
  return SignOracle(1, [values](const GridPoint& p) { return SignVector{values.at(static_cast<std::size_t>(p[0]))}; });
}

SignOracle centered(const GridSpec& g) {
  return SignOracle(g.dim(), [g](const GridPoint& p) {
    SignVector s(p.dim());
    for (std::size_t i = 0; i < p.dim(); ++i) s[i] = sign_of(2 * p[i] - g.cells(i));
    return s;
  });
}

}  // namespace

TEST_CASE("discretize_value thresholds") {
  CHECK(discretize_value(-5, 1) == -1);
  CHECK(discretize_value(5, 1) == 1);
  CHECK(discretize_value(1, 1) == 0);
  CHECK(discretize_value(-1, 1) == 0);
  CHECK(discretize_value(std::nextafter(1.0, 2.0), 1) == 1);
}

TEST_CASE("discretize x - 0.3 on a 1/32 grid") {
  const GridSpec g = GridSpec::unit(1, -5);
  RealOracle f(1, [](const RealVector& x) { return RealVector{x[0] - 0.3}; });
  SignOracle s = discretize(f, 0.05, g);
  for (std::int64_t k = 0; k <= 32; ++k) {
    // |k/32 - 3/10| <= 1/20  <=>  |10k - 96| <= 16, decided in integers.
    const std::int64_t scaled = 10 * k - 96;
    const Sign expected = scaled < -16 ? -1 : (scaled > 16 ? 1 : 0);
    CHECK(s(GridPoint{{k}})[0] == expected);
  }
  CHECK(f.evaluations() == 33);
  CHECK(s.evaluations() == 33);
}

TEST_CASE("discretize rejects non-finite values") {
  const GridSpec g = GridSpec::unit(1, -2);
  RealOracle f(1, [](const RealVector&) { return RealVector{std::numeric_limits<double>::quiet_NaN()}; });
  SignOracle s = discretize(f, 0.1, g);
  CHECK_THROWS_AS(s(GridPoint{{1}}), EvaluationError);
}

TEST_CASE("discretization parameters") {
  const auto p = DiscretizationParams::choose(0.01, 3.0, BoxDomain::unit(2));
  CHECK(std::ldexp(1.0, p.delta_exponent) <= 0.01 / 3.0);
  CHECK(std::ldexp(1.0, p.delta_exponent + 1) > 0.01 / 3.0);
  const GridSpec g = GridSpec::unit(2, p.delta_exponent);
  RealOracle f(2, [](const RealVector& x) { return x; });
  CHECK_NOTHROW(discretize(f, p, g));
  CHECK_THROWS_AS(discretize(f, p, GridSpec::unit(2, p.delta_exponent + 1)), DomainError);
}

TEST_CASE("delta continuity checker") {
  const GridSpec g = GridSpec::unit(2, -3);
  SignOracle zero(2, [](const GridPoint&) { return SignVector{0, 0}; });
  CHECK(check_delta_continuity(zero, g).passed());

  SignOracle jump(2, [](const GridPoint& p) {
    return SignVector{static_cast<Sign>(p == GridPoint{{3, 3}} ? -1 : (p == GridPoint{{4, 4}} ? 1 : 0)), 0};
  });
  const auto r = check_delta_continuity(jump, g);
  REQUIRE(r.violations.size() == 1);
  CHECK(r.violations[0].component == 0);
  CHECK(r.mode == CheckMode::exhaustive);

  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto prob = discretize_instance(random_monotone_2d(seed), -5);
    CHECK(check_delta_continuity(*prob.sign, prob.grid).passed());
  }
}

TEST_CASE("checkers switch to sampling above the cap") {
  const GridSpec g = GridSpec::unit(2, -6);
  SignOracle zero(2, [](const GridPoint&) { return SignVector{0, 0}; });
  CheckOptions opts;
  opts.cap = 100;
  opts.samples = 50;
  CHECK(check_delta_continuity(zero, g, opts).mode == CheckMode::sampled);
  CHECK(check_monotonicity(zero, MonotoneProfile::diagonal_increasing(2), g, opts).mode == CheckMode::sampled);
  CHECK(check_positive_switching(zero, g, false, CheckOptions{10, 5}).mode == CheckMode::sampled);
  CHECK(check_delta_continuity(zero, g).mode == CheckMode::exhaustive);
}

TEST_CASE("positive switching checker") {
  const GridSpec g = GridSpec::unit(3, -2);
  SignOracle c = centered(g);
  CHECK(check_positive_switching(c, g).passed());
  CHECK(check_positive_switching(c, g, true).passed());
  SignOracle zero(3, [](const GridPoint&) { return SignVector{0, 0, 0}; });
  CHECK(check_positive_switching(zero, g).passed());
  CHECK_FALSE(check_positive_switching(zero, g, true).passed());

  SignOracle up(2, [](const GridPoint& p) { return SignVector{1, sign_of(p[1] - 1)}; });
  const auto r = check_positive_switching(up, GridSpec::unit(2, -2));
  CHECK_FALSE(r.passed());
  CHECK(r.component_passed == std::vector<bool>{false, true});
  for (const auto& v : r.violations) CHECK(v.points[0][0] == 0);
}

TEST_CASE("sum switching checker") {
  const GridSpec g = GridSpec::unit(2, -2);
  SignOracle c = centered(g);
  CHECK(check_sum_switching(c, g).passed());

  // f_1 = +1, f_2 = -1 on the top face: the prefix sum is zero there.
  SignOracle top = testing_oracles::top_face_example();
  CHECK(check_sum_switching(top, g).passed());
  CHECK_FALSE(check_positive_switching(top, g).passed());

  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const RealInstance inst = random_sum_2d(seed);
    RealOracle real(2, inst.f);
    CHECK(check_sum_switching(real, GridSpec::unit(2, -4)).passed());
    auto prob = discretize_instance(inst, -4);
    CHECK(check_sum_switching(*prob.sign, prob.grid).passed());
  }
}

TEST_CASE("monotonicity checker") {
  const GridSpec g = GridSpec::unit(2, -3);
  SignOracle c = centered(g);
  CHECK(check_monotonicity(c, MonotoneProfile::diagonal_increasing(2), g).passed());
  CHECK(check_monotonicity(c, MonotoneProfile::exdiagonal_decreasing(2), g).passed());

  SignOracle zero(2, [](const GridPoint&) { return SignVector{0, 0}; });
  const MonotoneProfile seen = observed_monotonicity(zero, g);
  CHECK(seen.declared_count() == 4);

  SignOracle bump(2, [](const GridPoint& p) { return SignVector{static_cast<Sign>(p[0] == 3 ? 1 : 0), 0}; });
  const auto r = check_monotonicity(bump, MonotoneProfile::diagonal_increasing(2), g);
  CHECK_FALSE(r.passed());
  CHECK(r.violations.size() == 9);
}

TEST_CASE("discretization preserves monotonicity, switching and continuity") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    for (const RealInstance& inst : {random_monotone_2d(seed), random_exdiag_2d(seed), random_exdiag_nd(3, seed)}) {
      const int e = inst.dim == 3 ? -3 : -5;
      const GridSpec g = GridSpec::unit(inst.dim, e);
      RealOracle real(inst.dim, inst.f);
      REQUIRE(check_monotonicity(real, inst.profile, g).passed());
      REQUIRE(check_positive_switching(real, g).passed());
      auto prob = discretize_instance(inst, e);
      CHECK(check_monotonicity(*prob.sign, inst.profile, g).passed());
      CHECK(check_positive_switching(*prob.sign, g).passed());
      CHECK(check_delta_continuity(*prob.sign, g).passed());
    }
  }
}

TEST_CASE("roots of the discretization are epsilon-roots") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto prob = discretize_instance(random_monotone_2d(seed), -6);
    for (const auto& p : enumerate_roots(*prob.sign, prob.grid)) {
      for (double v : prob.real->operator()(to_coords(p, prob.grid))) CHECK(std::abs(v) <= prob.epsilon);
    }
  }
}

TEST_CASE("pad_strict") {
  SignOracle o = from_table({0, 0, 1});
  const GridSpec g = GridSpec::unit(1, -1);
  PaddedProblem padded = pad_strict(o, g);
  CHECK(padded.grid.cells(0) == 4);
  CHECK(padded.grid.lower(0).to_double() == -0.5);
  std::vector<Sign> got;
  for (std::int64_t q = 0; q <= 4; ++q) got.push_back(padded.oracle(GridPoint{{q}})[0]);
  CHECK(got == std::vector<Sign>{-1, 0, 0, 1, 1});
  CHECK(check_positive_switching(padded.oracle, padded.grid, true).passed());
  CHECK(check_delta_continuity(padded.oracle, padded.grid).passed());

  const GridSpec g2 = GridSpec::unit(2, -2);
  SignOracle zero(2, [](const GridPoint&) { return SignVector{0, 0}; });
  PaddedProblem p2 = pad_strict(zero, g2);
  CHECK(p2.oracle(GridPoint{{0, 3}})[0] == -1);
  CHECK(p2.oracle(GridPoint{{0, 3}})[1] == 0);
  CHECK(check_positive_switching(p2.oracle, p2.grid, true).passed());
  CHECK(check_delta_continuity(p2.oracle, p2.grid).passed());
  CHECK(check_monotonicity(p2.oracle, MonotoneProfile::diagonal_increasing(2), p2.grid).passed());

  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const RealInstance inst = random_exdiag_2d(seed);
    auto prob = discretize_instance(inst, -4);
    PaddedProblem pp = pad_strict(*prob.sign, prob.grid);
    CHECK(check_positive_switching(pp.oracle, pp.grid, true).passed());
    CHECK(check_delta_continuity(pp.oracle, pp.grid).passed());
    CHECK(check_monotonicity(pp.oracle, inst.profile, pp.grid).passed());
  }
}
