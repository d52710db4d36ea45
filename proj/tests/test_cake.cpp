#include "doctest.h"

#include <algorithm>
#include <numeric>
#include <set>

#include "monoroot/cake.hpp"
#include "monoroot/errors.hpp"
#include "monoroot/random.hpp"

using namespace monoroot;

namespace {

Rational q(long a, long b = 1) { return Rational(a) / b; }

CakeAgent uniform_agent() { return CakeAgent(piecewise_constant({q(0), q(1)}, {q(1)})); }

CakeAgent block_agent(const Rational& a, const Rational& b) {
  std::vector<Rational> bp{q(0)}, rho;
  if (a > 0) {
    bp.push_back(a);
    rho.push_back(0);
  }
  bp.push_back(b);
  rho.push_back(1 / (b - a));
  if (b < 1) {
    bp.push_back(1);
    rho.push_back(0);
  }
  return CakeAgent(piecewise_constant(bp, rho));
}

CakeInstance uniform_three(int r_exp) {
  return CakeInstance({uniform_agent(), uniform_agent(), uniform_agent()}, {1, 1, 1}, r_exp);
}

CakeInstance blocks(const Rational& c1, const Rational& c2, int r_exp) {
  return CakeInstance({block_agent(0, c1), block_agent(c1, c2), block_agent(c2, 1)}, {1, 1, 1}, r_exp);
}

// Barycentric decomposition from an explicitly chosen cell and tie order.
Simplex simplex_from_cell(const std::vector<Rational>& x, std::int64_t cells, const std::vector<std::int64_t>& base,
                          bool reverse_ties) {
  const std::size_t d = x.size();
  std::vector<Rational> fr(d);
  for (std::size_t j = 0; j < d; ++j) fr[j] = x[j] * cells - base[j];
  std::vector<std::size_t> ord(d);
  std::iota(ord.begin(), ord.end(), 0);
  if (reverse_ties) std::reverse(ord.begin(), ord.end());
  std::stable_sort(ord.begin(), ord.end(), [&](std::size_t a, std::size_t b) { return fr[a] > fr[b]; });
  Simplex s;
  GridPoint v{base};
  for (std::size_t k = 0; k <= d; ++k) {
    const Rational hi = k == 0 ? Rational(1) : fr[ord[k - 1]];
    const Rational lo = k < d ? fr[ord[k]] : Rational(0);
    s.corners.push_back(v);
    s.weights.push_back(hi - lo);
    if (k < d) ++v[ord[k]];
  }
  return s;
}

std::int64_t fake_count(const GridPoint& p, std::size_t i) { return (p[0] * 7 + p[1] * 13 + static_cast<std::int64_t>(i) * 5) % 11; }

std::vector<std::int64_t> fake_counts(const GridPoint& p) { return {fake_count(p, 0), fake_count(p, 1), fake_count(p, 2)}; }

// Exhaustive: is there a capacity-respecting assignment along allowed edges?
bool brute_force_feasible(const std::vector<std::set<std::size_t>>& allowed, std::vector<std::int64_t> cap,
                          std::size_t a = 0) {
  if (a == allowed.size()) return true;
  for (std::size_t j : allowed[a]) {
    if (cap[j] == 0) continue;
    --cap[j];
    if (brute_force_feasible(allowed, cap, a + 1)) return true;
    ++cap[j];
  }
  return false;
}

}  // namespace

TEST_CASE("exact rationals from doubles") {
  CHECK(exact_rational(0.375) == q(3, 8));
  CHECK(exact_rational(-2.5) == q(-5, 2));
  CHECK(exact_rational(0.0) == 0);
  CHECK(exact_rational(0x1.0p-60) == Rational(1) / (Rational(boost::multiprecision::cpp_int(1) << 60)));
}

TEST_CASE("valuations") {
  auto pc = piecewise_constant({q(0), q(1, 2), q(1)}, {q(2), q(0)});
  CHECK(pc(q(0), q(1)) == 1);
  CHECK(pc(q(1, 4), q(3, 4)) == q(1, 2));
  CHECK(pc(q(1, 3), q(1, 3)) == 0);
  auto pl = piecewise_linear({q(0), q(1)}, {q(0), q(2)});
  CHECK(pl(q(0), q(1)) == 1);
  CHECK(pl(q(0), q(1, 2)) == q(1, 4));
  CHECK_THROWS_AS(piecewise_constant({q(0), q(1, 2)}, {q(1)}), InputError);
  CHECK_THROWS_AS(piecewise_constant({q(0), q(1)}, {q(-1)}), InputError);
  CHECK_THROWS_AS(pc(q(1, 2), q(1, 4)), DomainError);
}

TEST_CASE("partition from point") {
  auto p = partition_from_point({q(3, 5), q(1, 5)});
  REQUIRE(p.size() == 3);
  CHECK(p[0].lo == 0);
  CHECK(p[0].hi == q(3, 5));
  CHECK(p[1].lo == q(3, 5));
  CHECK(p[1].hi == q(3, 5));
  CHECK(p[1].empty());
  CHECK(p[2].hi == 1);

  p = partition_from_point({q(0), q(0)});
  CHECK(p[0].empty());
  CHECK(p[1].empty());
  CHECK(p[2].lo == 0);
  CHECK(p[2].hi == 1);

  p = partition_from_point({q(1), q(1)});
  CHECK(p[0].hi == 1);
  CHECK(p[1].empty());
  CHECK(p[2].empty());
}

TEST_CASE("preferred piece") {
  CakeAgent u = uniform_agent();
  CHECK(preferred_piece(u, {{q(0), q(1, 2)}, {q(1, 2), q(3, 4)}, {q(3, 4), q(1)}}) == 0);
  CHECK(u.queries() == 3);
  CHECK(preferred_piece(u, {{q(0), q(0)}, {q(0), q(1, 2)}, {q(1, 2), q(1)}}) == 1);
  CHECK(preferred_piece(u, {{q(0), q(0)}, {q(0), q(0)}, {q(0), q(1)}}) == 2);
  // Zero everywhere on the non-empty pieces: lowest non-empty.
  CakeAgent late = block_agent(q(3, 4), q(1));
  CHECK(preferred_piece(late, {{q(0), q(0)}, {q(0), q(1, 4)}, {q(1, 4), q(1, 2)}, {q(1, 2), q(1, 2)}}) == 1);
}

TEST_CASE("counts on grid points") {
  CakeInstance inst = uniform_three(-4);
  // Exact thirds are off the dyadic grid; evaluate preferences there directly.
  auto thirds = partition_from_point({q(1, 3), q(2, 3)});
  std::vector<std::int64_t> g(3, 0);
  for (auto& a : inst.agents()) ++g[preferred_piece(a, thirds)];
  CHECK(g == std::vector<std::int64_t>{3, 0, 0});

  inst.reset_queries();
  CHECK(g_on_grid(GridPoint{{0, 0}}, inst) == std::vector<std::int64_t>{0, 0, 3});
  CHECK(inst.total_queries() == 9);
  CHECK(g_on_grid(GridPoint{{16, 16}}, inst) == std::vector<std::int64_t>{3, 0, 0});
  CHECK(g_on_grid(GridPoint{{4, 12}}, inst) == std::vector<std::int64_t>{0, 3, 0});
  CHECK_THROWS_AS(g_on_grid(GridPoint{{17, 0}}, inst), DomainError);
}

TEST_CASE("freudenthal interpolation") {
  const std::int64_t cells = 8;
  SUBCASE("grid points have weight one") {
    for (std::int64_t a = 0; a <= cells; ++a) {
      for (std::int64_t b = 0; b <= cells; ++b) {
        const Simplex s = freudenthal_simplex({q(a, cells), q(b, cells)}, cells);
        REQUIRE(s.corners.size() == 1);
        CHECK(s.corners[0] == GridPoint{{a, b}});
        CHECK(s.weights[0] == 1);
      }
    }
  }
  SUBCASE("barycenter") {
    const Simplex s = freudenthal_simplex({q(2, 3) / cells, q(1, 3) / cells}, cells);
    REQUIRE(s.corners.size() == 3);
    auto g = interpolate(s, [&](const GridPoint& p) {
      const auto it = std::find(s.corners.begin(), s.corners.end(), p);
      std::vector<std::int64_t> v(3, 0);
      v[static_cast<std::size_t>(it - s.corners.begin())] = 3;
      return v;
    });
    CHECK(g == std::vector<Rational>{q(1), q(1), q(1)});
  }
  SUBCASE("point is reproduced and weights sum to one") {
    Rng rng(5);
    for (int t = 0; t < 500; ++t) {
      std::vector<Rational> x{exact_rational(rng.uniform()), exact_rational(rng.uniform())};
      const Simplex s = freudenthal_simplex(x, cells);
      Rational total = 0;
      std::vector<Rational> back(2, 0);
      for (std::size_t c = 0; c < s.corners.size(); ++c) {
        CHECK(s.weights[c] > 0);
        total += s.weights[c];
        for (std::size_t j = 0; j < 2; ++j) back[j] += s.weights[c] * s.corners[c][j] / cells;
      }
      CHECK(total == 1);
      CHECK(back == x);
    }
  }
  SUBCASE("boundary points agree across decompositions") {
    Rng rng(17);
    for (int t = 0; t < 500; ++t) {
      const auto k = rng.integer(1, cells - 1);
      const Rational other = exact_rational(rng.uniform());
      // Either on a vertical cell face, or on a diagonal x0 - x1 = integer / cells.
      std::vector<Rational> x;
      std::vector<std::int64_t> b1, b2;
      const int kind = static_cast<int>(rng.integer(0, 1));
      if (kind == 0) {
        x = {q(k, cells), other};
        const auto row = std::min<std::int64_t>(cells - 1, static_cast<std::int64_t>((other * cells).convert_to<double>()));
        b1 = {k, row};
        b2 = {k - 1, row};
      } else {
        const auto row = rng.integer(0, cells - 1);
        const Rational fr = exact_rational(rng.uniform());
        x = {(row + fr) / cells, (row + fr) / cells};
        b1 = b2 = {row, row};
      }
      const Simplex a = simplex_from_cell(x, cells, b1, false);
      const Simplex b = simplex_from_cell(x, cells, b2, true);
      const auto ga = interpolate(a, fake_counts);
      CHECK(ga == interpolate(b, fake_counts));
      CHECK(ga == interpolate(freudenthal_simplex(x, cells), fake_counts));
    }
  }
}

TEST_CASE("f from g") {
  CHECK(f_from_g({q(3), q(0), q(0)}, {1, 1, 1}) == std::vector<Rational>{q(2), q(-1)});
  CHECK(f_from_g({q(1), q(1), q(1)}, {1, 1, 1}) == std::vector<Rational>{q(0), q(0)});
  CakeInstance inst = random_cake_instance(6, {2, 3, 1}, -5, 9);
  Rng rng(2);
  for (int t = 0; t < 50; ++t) {
    auto g = interpolate_g({exact_rational(rng.uniform()), exact_rational(rng.uniform())}, inst);
    auto f = f_from_g(g, inst.groups());
    CHECK(f[0] + f[1] + (g[2] - 1) == 0);
    CHECK(g[0] + g[1] + g[2] == 6);
  }
}

TEST_CASE("instance validation") {
  CHECK_THROWS_AS(CakeInstance({uniform_agent(), uniform_agent(), uniform_agent()}, {3, 0, 0}, -4), InputError);
  CHECK_THROWS_AS(CakeInstance({uniform_agent(), uniform_agent()}, {1, 1, 1}, -4), InputError);
  CHECK_THROWS_AS(CakeInstance({uniform_agent(), uniform_agent(), CakeAgent([](const Rational&, const Rational&) {
                                  return Rational(0);
                                })},
                               {1, 1, 1}, -4),
                  InputError);
  CHECK_THROWS_AS(CakeInstance({uniform_agent(), uniform_agent(), uniform_agent()}, {1, 1, 1}, 0), InputError);
}

TEST_CASE("instance json") {
  const auto j = nlohmann::json::parse(R"({
    "agents": [
      {"type": "piecewise_constant", "breakpoints": [0, "1/3", 1], "densities": [3, 0]},
      {"type": "piecewise_linear", "breakpoints": [0, 1], "densities": [0, 2]},
      {"type": "piecewise_constant", "breakpoints": [0, 1], "densities": [1]}
    ],
    "groups": [1, 1, 1],
    "r": "2^-6"
  })");
  CakeInstance inst = cake_instance_from_json(j);
  CHECK(inst.n() == 3);
  CHECK(inst.r() == q(1, 64));
  CHECK(inst.agents()[0].value(q(0), q(1, 3)) == 1);
  CHECK_THROWS_AS(cake_instance_from_json(nlohmann::json::parse(R"({"agents": [], "groups": [1]})")), InputError);
  auto bad = j;
  bad["agents"][0]["type"] = "step";
  CHECK_THROWS_AS(cake_instance_from_json(bad), InputError);
  bad = j;
  bad["r"] = "0.01";
  CHECK_THROWS_AS(cake_instance_from_json(bad), InputError);
}

TEST_CASE("query accounting") {
  CakeInstance inst = random_cake_instance(5, {1, 2, 2}, -6, 4);
  Rng rng(8);
  for (int t = 0; t < 30; ++t) {
    GridPoint p{{rng.integer(0, 64), rng.integer(0, 64)}};
    inst.reset_queries();
    g_on_grid(p, inst);
    CHECK(inst.total_queries() == 5 * 3);
    inst.reset_queries();
    interpolate_g({exact_rational(rng.uniform()), exact_rational(rng.uniform())}, inst);
    CHECK(inst.total_queries() <= 9 * 5);
  }
}

TEST_CASE("hall assignment against exhaustive search") {
  Rng rng(23);
  int feasible = 0;
  for (int t = 0; t < 400; ++t) {
    const auto n = static_cast<std::size_t>(rng.integer(3, 9));
    std::vector<std::int64_t> k{1, 1, 1};
    for (std::size_t extra = 3; extra < n; ++extra) ++k[static_cast<std::size_t>(rng.integer(0, 2))];
    const auto ncorners = static_cast<std::size_t>(rng.integer(1, 3));
    std::vector<GridPoint> corners;
    std::vector<std::vector<std::size_t>> prefs(ncorners, std::vector<std::size_t>(n));
    std::vector<std::set<std::size_t>> allowed(n);
    for (std::size_t c = 0; c < ncorners; ++c) {
      corners.push_back(GridPoint{{static_cast<std::int64_t>(c), 0}});
      for (std::size_t a = 0; a < n; ++a) {
        prefs[c][a] = static_cast<std::size_t>(rng.integer(0, 2));
        allowed[a].insert(prefs[c][a]);
      }
    }
    const bool expect = brute_force_feasible(allowed, k);
    if (!expect) {
      CHECK_THROWS_AS(hall_assignment(corners, prefs, k), ReductionViolation);
      continue;
    }
    ++feasible;
    const HallResult h = hall_assignment(corners, prefs, k);
    std::vector<std::int64_t> load(3, 0);
    for (std::size_t a = 0; a < n; ++a) {
      ++load[h.assignment[a]];
      const auto c = static_cast<std::size_t>(h.certificates[a][0]);
      CHECK(prefs[c][a] == h.assignment[a]);
    }
    CHECK(load == k);
  }
  CHECK(feasible > 50);
}

TEST_CASE("hall identity matching") {
  std::vector<GridPoint> corners{GridPoint{{0, 0}}, GridPoint{{1, 0}}};
  const HallResult h = hall_assignment(corners, {{0, 1, 2}, {0, 1, 2}}, {1, 1, 1});
  CHECK(h.assignment == std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("solve: uniform agents") {
  for (int r_exp : {-4, -6, -10}) {
    CakeInstance inst = uniform_three(r_exp);
    CakeSolveStats stats;
    const Allocation alloc = solve_three_groups(inst, &stats);
    CHECK(verify_near_envy_free(alloc, inst).ok);
    // f is within epsilon of zero at the output, so the dropped count is within 2 epsilon.
    const auto g = interpolate_g(alloc.point, inst);
    CHECK(abs(g[0] - 1) <= q(1, 8));
    CHECK(abs(g[1] - 1) <= q(1, 8));
    CHECK(abs(g[2] - 1) <= q(1, 4));
    CHECK(stats.queries > 0);
    CHECK(stats.delta_exponent == r_exp - 5);
  }
}

TEST_CASE("solve: disjoint agents") {
  CakeInstance inst = blocks(q(1, 3), q(2, 3), -8);
  const Allocation alloc = solve_three_groups(inst);
  CHECK(alloc.assignment == std::vector<std::size_t>{0, 1, 2});
  const auto rep = verify_near_envy_free(alloc, inst);
  CHECK(rep.ok);

  // Exhaustive search over a coarse grid of cut pairs for envy-free splits.
  Rational best = 1;
  for (int a = 0; a <= 48; ++a) {
    for (int b = a; b <= 48; ++b) {
      const Rational c1 = q(a, 48), c2 = q(b, 48);
      bool envy_free = true;
      auto p = partition_from_point({c1, c2});
      for (std::size_t i = 0; i < 3 && envy_free; ++i) {
        auto& ag = inst.agents()[i];
        for (std::size_t j = 0; j < 3; ++j) {
          if (ag.valuation()(p[j].lo, std::max(p[j].lo, p[j].hi)) > ag.valuation()(p[i].lo, p[i].hi)) envy_free = false;
        }
      }
      if (envy_free) best = std::min<Rational>(best, std::max<Rational>(abs(alloc.cuts[0] - c1), abs(alloc.cuts[1] - c2)));
    }
  }
  CHECK(best <= inst.r());
}

TEST_CASE("solve: random instances") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    CakeInstance inst = random_cake_instance(6, {2, 2, 2}, -7, seed);
    const Allocation alloc = solve_three_groups(inst);
    CHECK(verify_near_envy_free(alloc, inst).ok);
  }
  CakeInstance uneven = random_cake_instance(7, {1, 4, 2}, -7, 99);
  CHECK(verify_near_envy_free(solve_three_groups(uneven), uneven).ok);
  CakeInstance four = CakeInstance({uniform_agent(), uniform_agent(), uniform_agent(), uniform_agent()}, {1, 1, 1, 1}, -4);
  CHECK_THROWS_AS(solve_three_groups(four), InputError);
}

TEST_CASE("verification") {
  // Exact envy-free split on the r-grid; the certificate is the split itself.
  CakeInstance inst = blocks(q(1, 4), q(1, 2), -4);
  Allocation exact{{q(1, 4), q(1, 2)}, {q(1, 4), q(1, 2)}, {0, 1, 2}, std::vector<GridPoint>(3, GridPoint{{4, 8}})};
  CHECK(verify_near_envy_free(exact, inst).ok);

  // Certificate exactly r away is still accepted.
  Allocation shifted = exact;
  shifted.cuts[0] += inst.r();
  CHECK(verify_near_envy_free(shifted, inst).ok);
  shifted.cuts[0] += inst.r() / 2;
  const auto far = verify_near_envy_free(shifted, inst);
  CHECK_FALSE(far.ok);

  Allocation swapped = exact;
  std::swap(swapped.assignment[0], swapped.assignment[1]);
  const auto rep = verify_near_envy_free(swapped, inst);
  CHECK_FALSE(rep.ok);
  CHECK(rep.capacities_ok);
  CHECK_FALSE(rep.agents[0].ok);
  CHECK(rep.agents[0].reason.find("agent 1") != std::string::npos);
  CHECK_FALSE(rep.agents[1].ok);
  CHECK(rep.agents[2].ok);

  Allocation crowded = exact;
  crowded.assignment = {0, 0, 2};
  CHECK_FALSE(verify_near_envy_free(crowded, inst).capacities_ok);
}

TEST_CASE("cake map properties") {
  for (std::size_t n : {3u, 5u}) {
    CakeInstance inst = random_cake_instance(n, {1, 1, static_cast<std::int64_t>(n) - 2}, -4, n);
    const std::int64_t c = inst.cells();
    for (std::int64_t a = 0; a <= c; ++a) {
      for (std::int64_t b = 0; b <= c; ++b) {
        const auto g = g_on_grid(GridPoint{{a, b}}, inst);
        CHECK(std::accumulate(g.begin(), g.end(), std::int64_t{0}) == static_cast<std::int64_t>(n));
        if (a == 0) CHECK(g[0] == 0);
        if (b == 0) CHECK(g[1] == 0);
        if (a < c) {
          const auto right = g_on_grid(GridPoint{{a + 1, b}}, inst);
          CHECK(right[0] >= g[0]);
          CHECK(right[1] <= g[1]);
        }
        if (b < c) {
          const auto up = g_on_grid(GridPoint{{a, b + 1}}, inst);
          CHECK(up[1] >= g[1]);
          CHECK(up[2] <= g[2]);
        }
      }
    }
  }
}
