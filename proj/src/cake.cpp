#include "monoroot/cake.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "monoroot/discretize.hpp"
#include "monoroot/errors.hpp"
#include "monoroot/random.hpp"
#include "monoroot/root2d.hpp"

namespace monoroot {

namespace {

using boost::multiprecision::cpp_int;

Rational pow2(int e) {
  if (e >= 0) return Rational(cpp_int(1) << e);
  return Rational(cpp_int(1), cpp_int(1) << -e);
}

std::string rational_string(const Rational& r) { return r.str(); }

void check_breakpoints(const std::vector<Rational>& bp) {
  if (bp.size() < 2 || bp.front() != 0 || bp.back() != 1) {
    throw InputError("breakpoints must start at 0 and end at 1");
  }
  for (std::size_t k = 0; k + 1 < bp.size(); ++k) {
    if (!(bp[k] < bp[k + 1])) throw InputError("breakpoints must be strictly increasing");
  }
}

void check_interval(const Rational& a, const Rational& b) {
  if (a < 0 || b > 1 || a > b) throw DomainError("valuation query outside 0 <= a <= b <= 1");
}

Rational parse_rational(const nlohmann::json& v) {
  if (v.is_number()) return exact_rational(v.get<double>());
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    try {
      const auto slash = s.find('/');
      if (slash == std::string::npos) return Rational(cpp_int(s));
      return Rational(cpp_int(s.substr(0, slash)), cpp_int(s.substr(slash + 1)));
    } catch (const std::exception&) {
      throw InputError("cannot parse rational \"" + s + "\"");
    }
  }
  throw InputError("expected a number or a \"p/q\" string");
}

std::vector<Rational> parse_rationals(const nlohmann::json& arr) {
  if (!arr.is_array()) throw InputError("expected an array");
  std::vector<Rational> out;
  for (const auto& v : arr) out.push_back(parse_rational(v));
  return out;
}

// Kuhn's augmenting path over piece slots.
bool augment(std::size_t a, const std::vector<std::vector<std::size_t>>& slots_of, std::vector<int>& slot_owner,
             std::vector<char>& seen) {
  for (std::size_t s : slots_of[a]) {
    if (seen[s]) continue;
    seen[s] = 1;
    if (slot_owner[s] < 0 || augment(static_cast<std::size_t>(slot_owner[s]), slots_of, slot_owner, seen)) {
      slot_owner[s] = static_cast<int>(a);
      return true;
    }
  }
  return false;
}

}  // namespace

Rational exact_rational(double v) {
  if (!std::isfinite(v)) throw InputError("non-finite number");
  if (v == 0) return Rational(0);
  int e = 0;
  const double m = std::frexp(v, &e);
  const auto mant = static_cast<std::int64_t>(std::ldexp(m, 53));
  return Rational(mant) * pow2(e - 53);
}

Valuation piecewise_constant(std::vector<Rational> breakpoints, std::vector<Rational> densities) {
  check_breakpoints(breakpoints);
  if (densities.size() + 1 != breakpoints.size()) throw InputError("need one density per segment");
  for (const auto& d : densities) {
    if (d < 0) throw InputError("densities must be non-negative");
  }
  return [bp = std::move(breakpoints), rho = std::move(densities)](const Rational& a, const Rational& b) {
    check_interval(a, b);
    Rational total = 0;
    for (std::size_t k = 0; k < rho.size(); ++k) {
      const Rational lo = std::max(a, bp[k]);
      const Rational hi = std::min(b, bp[k + 1]);
      if (lo < hi) total += (hi - lo) * rho[k];
    }
    return total;
  };
}

Valuation piecewise_linear(std::vector<Rational> breakpoints, std::vector<Rational> densities) {
  check_breakpoints(breakpoints);
  if (densities.size() != breakpoints.size()) throw InputError("need one density value per breakpoint");
  for (const auto& d : densities) {
    if (d < 0) throw InputError("densities must be non-negative");
  }
  return [bp = std::move(breakpoints), rho = std::move(densities)](const Rational& a, const Rational& b) {
    check_interval(a, b);
    Rational total = 0;
    for (std::size_t k = 0; k + 1 < bp.size(); ++k) {
      const Rational lo = std::max(a, bp[k]);
      const Rational hi = std::min(b, bp[k + 1]);
      if (!(lo < hi)) continue;
      const Rational slope = (rho[k + 1] - rho[k]) / (bp[k + 1] - bp[k]);
      const Rational at_lo = rho[k] + slope * (lo - bp[k]);
      const Rational at_hi = rho[k] + slope * (hi - bp[k]);
      total += (hi - lo) * (at_lo + at_hi) / 2;
    }
    return total;
  };
}

Rational CakeAgent::value(const Rational& a, const Rational& b) {
  ++queries_;
  return valuation_(a, b);
}

std::vector<Rational> cuts_from_point(const std::vector<Rational>& x) {
  std::vector<Rational> cuts;
  Rational c = 0;
  for (const auto& xi : x) {
    if (xi < 0 || xi > 1) throw DomainError("cut point outside [0,1]");
    c = std::max(c, xi);
    cuts.push_back(c);
  }
  return cuts;
}

Partition partition_from_point(const std::vector<Rational>& x) {
  const auto cuts = cuts_from_point(x);
  Partition p;
  Rational lo = 0;
  for (const auto& c : cuts) {
    p.push_back({lo, c});
    lo = c;
  }
  p.push_back({lo, 1});
  return p;
}

std::size_t preferred_piece(CakeAgent& agent, const Partition& partition) {
  std::optional<std::size_t> best;
  Rational best_value;
  for (std::size_t j = 0; j < partition.size(); ++j) {
    const Rational v = agent.value(partition[j].lo, std::max(partition[j].lo, partition[j].hi));
    if (partition[j].empty()) continue;
    if (!best || v > best_value) {
      best = j;
      best_value = v;
    }
  }
  if (!best) throw DomainError("partition has no non-empty piece");
  return *best;
}

CakeInstance::CakeInstance(std::vector<CakeAgent> agents, std::vector<std::int64_t> groups, int r_exponent)
    : agents_(std::move(agents)), groups_(std::move(groups)), r_exponent_(r_exponent) {
  if (agents_.empty()) throw InputError("need at least one agent");
  if (groups_.size() < 2) throw InputError("need at least two groups");
  std::int64_t total = 0;
  for (auto k : groups_) {
    if (k < 1) throw InputError("every group size must be at least 1");
    total += k;
  }
  if (total != static_cast<std::int64_t>(agents_.size())) throw InputError("group sizes must sum to the agent count");
  if (r_exponent_ >= 0 || r_exponent_ < -30) throw InputError("r must be 2^-k with 1 <= k <= 30");
  for (std::size_t a = 0; a < agents_.size(); ++a) {
    if (!(agents_[a].valuation()(0, 1) > 0)) {
      throw InputError("agent " + std::to_string(a + 1) + " values the whole cake at zero (not hungry)");
    }
  }
}

Rational CakeInstance::r() const { return pow2(r_exponent_); }

std::uint64_t CakeInstance::total_queries() const {
  std::uint64_t q = 0;
  for (const auto& a : agents_) q += a.queries();
  return q;
}

void CakeInstance::reset_queries() {
  for (auto& a : agents_) a.reset_queries();
}

CakeInstance cake_instance_from_json(const nlohmann::json& j) {
  try {
    if (!j.is_object()) throw InputError("cake instance must be a JSON object");
    std::vector<CakeAgent> agents;
    for (const auto& a : j.at("agents")) {
      const std::string type = a.at("type").get<std::string>();
      auto bp = parse_rationals(a.at("breakpoints"));
      auto rho = parse_rationals(a.at("densities"));
      if (type == "piecewise_constant") {
        agents.emplace_back(piecewise_constant(std::move(bp), std::move(rho)));
      } else if (type == "piecewise_linear") {
        agents.emplace_back(piecewise_linear(std::move(bp), std::move(rho)));
      } else {
        throw InputError("unknown agent type \"" + type + "\"");
      }
    }
    auto groups = j.at("groups").get<std::vector<std::int64_t>>();
    const int r = parse_power_of_two(j.at("r").get<std::string>());
    return CakeInstance(std::move(agents), std::move(groups), r);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed cake instance: ") + e.what());
  }
}

CakeInstance random_cake_instance(std::size_t n, std::vector<std::int64_t> groups, int r_exponent,
                                  std::uint64_t seed) {
  Rng rng(seed);
  std::vector<CakeAgent> agents;
  for (std::size_t a = 0; a < n; ++a) {
    const auto segments = static_cast<std::size_t>(rng.integer(2, 6));
    std::vector<double> inner;
    while (inner.size() + 1 < segments) {
      const double t = rng.uniform(0.02, 0.98);
      if (std::find(inner.begin(), inner.end(), t) == inner.end()) inner.push_back(t);
    }
    std::sort(inner.begin(), inner.end());
    std::vector<Rational> bp{0};
    for (double t : inner) bp.push_back(exact_rational(t));
    bp.push_back(1);
    std::vector<Rational> rho;
    bool positive = false;
    for (std::size_t k = 0; k < segments; ++k) {
      const double v = rng.uniform() < 0.3 ? 0.0 : rng.uniform(0.05, 1.0);
      positive = positive || v > 0;
      rho.push_back(exact_rational(v));
    }
    if (!positive) rho[0] = 1;
    agents.emplace_back(piecewise_constant(std::move(bp), std::move(rho)));
  }
  return CakeInstance(std::move(agents), std::move(groups), r_exponent);
}

std::vector<Rational> r_grid_coords(const GridPoint& q, const CakeInstance& inst) {
  if (q.dim() != inst.d()) throw DomainError("r-grid point has the wrong dimension");
  std::vector<Rational> x;
  const Rational r = inst.r();
  for (std::size_t j = 0; j < q.dim(); ++j) {
    if (q[j] < 0 || q[j] > inst.cells()) throw DomainError("r-grid index out of range");
    x.push_back(r * q[j]);
  }
  return x;
}

std::vector<std::size_t> preferences_on_grid(const GridPoint& q, CakeInstance& inst) {
  const Partition p = partition_from_point(r_grid_coords(q, inst));
  std::vector<std::size_t> prefs;
  for (auto& agent : inst.agents()) prefs.push_back(preferred_piece(agent, p));
  return prefs;
}

std::vector<std::int64_t> g_on_grid(const GridPoint& q, CakeInstance& inst) {
  std::vector<std::int64_t> g(inst.m(), 0);
  for (std::size_t j : preferences_on_grid(q, inst)) ++g[j];
  return g;
}

Simplex freudenthal_simplex(const std::vector<Rational>& x, std::int64_t cells) {
  const std::size_t d = x.size();
  GridPoint base{std::vector<std::int64_t>(d, 0)};
  std::vector<Rational> frac(d);
  for (std::size_t j = 0; j < d; ++j) {
    if (x[j] < 0 || x[j] > 1) throw DomainError("point outside [0,1]^d");
    const Rational y = x[j] * cells;
    auto b = static_cast<std::int64_t>(boost::multiprecision::numerator(y) / boost::multiprecision::denominator(y));
    b = std::min(b, cells - 1);
    base[j] = b;
    frac[j] = y - b;
  }
  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return frac[a] > frac[b]; });

  Simplex s;
  GridPoint v = base;
  Rational prev = 1;
  for (std::size_t k = 0; k <= d; ++k) {
    const Rational next = k < d ? frac[order[k]] : Rational(0);
    const Rational w = prev - next;
    if (w != 0) {
      s.corners.push_back(v);
      s.weights.push_back(w);
    }
    if (k < d) ++v[order[k]];
    prev = next;
  }
  return s;
}

std::vector<Rational> interpolate(const Simplex& s, const CornerCounts& corner) {
  std::vector<Rational> g;
  for (std::size_t c = 0; c < s.corners.size(); ++c) {
    const auto counts = corner(s.corners[c]);
    if (g.empty()) g.assign(counts.size(), Rational(0));
    for (std::size_t i = 0; i < counts.size(); ++i) g[i] += s.weights[c] * counts[i];
  }
  return g;
}

std::vector<Rational> interpolate_g(const std::vector<Rational>& x, CakeInstance& inst) {
  if (x.size() != inst.d()) throw DomainError("point has the wrong dimension");
  return interpolate(freudenthal_simplex(x, inst.cells()), [&inst](const GridPoint& q) { return g_on_grid(q, inst); });
}

std::vector<Rational> f_from_g(const std::vector<Rational>& g, const std::vector<std::int64_t>& k) {
  if (g.size() != k.size() || g.size() < 2) throw DomainError("count and group vectors differ in length");
  std::vector<Rational> f;
  for (std::size_t i = 0; i + 1 < g.size(); ++i) f.push_back(g[i] - k[i]);
  return f;
}

CakeProblem::CakeProblem(CakeInstance& inst)
    : inst_(&inst),
      delta_exponent_(inst.r_exponent() -
                      ceil_log2(2 * static_cast<std::uint64_t>(inst.d() * inst.d()) * inst.n())),
      grid_(GridSpec::unit(inst.d(), delta_exponent_)) {
  const std::int64_t cells = inst.cells();
  real_ = std::make_unique<RealOracle>(inst.d(), [this, cells](const RealVector& x) {
    std::vector<Rational> xr;
    for (double v : x) xr.push_back(exact_rational(v));
    const auto g = interpolate(freudenthal_simplex(xr, cells), [this](const GridPoint& q) {
      std::vector<std::int64_t> counts(inst_->m(), 0);
      for (std::size_t j : preferences(q)) ++counts[j];
      return counts;
    });
    RealVector f;
    for (const auto& v : f_from_g(g, inst_->groups())) f.push_back(v.convert_to<double>());
    return f;
  });
  sign_ = std::make_unique<SignOracle>(discretize(*real_, epsilon(), grid_));
}

const std::vector<std::size_t>& CakeProblem::preferences(const GridPoint& q) {
  if (auto it = cache_.find(q); it != cache_.end()) return it->second;
  return cache_.emplace(q, preferences_on_grid(q, *inst_)).first->second;
}

std::vector<Rational> CakeProblem::coords(const GridPoint& p) const {
  grid_.validate(p);
  std::vector<Rational> x;
  for (std::size_t j = 0; j < p.dim(); ++j) x.push_back(pow2(delta_exponent_) * p[j]);
  return x;
}

HallResult hall_assignment(const std::vector<GridPoint>& corners, const std::vector<std::vector<std::size_t>>& prefs,
                           const std::vector<std::int64_t>& k) {
  if (corners.size() != prefs.size() || corners.empty()) throw DomainError("need one preference list per corner");
  const std::size_t n = prefs[0].size();
  std::vector<std::size_t> slot_piece;
  for (std::size_t j = 0; j < k.size(); ++j) {
    for (std::int64_t s = 0; s < k[j]; ++s) slot_piece.push_back(j);
  }
  if (slot_piece.size() != n) throw DomainError("group sizes must sum to the agent count");
  std::vector<std::vector<std::size_t>> slots_of(n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t s = 0; s < slot_piece.size(); ++s) {
      for (const auto& pc : prefs) {
        if (pc[a] == slot_piece[s]) {
          slots_of[a].push_back(s);
          break;
        }
      }
    }
  }
  std::vector<int> owner(slot_piece.size(), -1);
  for (std::size_t a = 0; a < n; ++a) {
    std::vector<char> seen(slot_piece.size(), 0);
    if (!augment(a, slots_of, owner, seen)) {
      throw ReductionViolation("no capacity-respecting assignment over the simplex corners (agent " +
                               std::to_string(a + 1) + " unmatched)");
    }
  }
  HallResult h;
  h.assignment.assign(n, 0);
  h.certificates.assign(n, corners[0]);
  for (std::size_t s = 0; s < owner.size(); ++s) {
    const auto a = static_cast<std::size_t>(owner[s]);
    h.assignment[a] = slot_piece[s];
    for (std::size_t c = 0; c < corners.size(); ++c) {
      if (prefs[c][a] == slot_piece[s]) {
        h.certificates[a] = corners[c];
        break;
      }
    }
  }
  return h;
}

HallResult hall_assignment(const std::vector<Rational>& x, CakeInstance& inst) {
  const Simplex s = freudenthal_simplex(x, inst.cells());
  std::vector<std::vector<std::size_t>> prefs;
  for (const auto& c : s.corners) prefs.push_back(preferences_on_grid(c, inst));
  return hall_assignment(s.corners, prefs, inst.groups());
}

nlohmann::json Allocation::to_json() const {
  nlohmann::json j;
  for (const auto& c : cuts) {
    j["cuts"].push_back(c.convert_to<double>());
    j["cuts_exact"].push_back(rational_string(c));
  }
  for (const auto& x : point) j["point"].push_back(rational_string(x));
  j["assignment"] = assignment;
  for (const auto& c : certificates) j["certificates"].push_back(c.index);
  return j;
}

Allocation solve_three_groups(CakeInstance& inst, CakeSolveStats* stats) {
  if (inst.m() != 3) throw InputError("solver handles exactly three groups");
  const std::uint64_t before = inst.total_queries();
  CakeProblem prob(inst);
  const GridPoint p = find_root_sum(prob.sign(), prob.grid());
  const std::vector<Rational> x = prob.coords(p);
  const Simplex s = freudenthal_simplex(x, inst.cells());
  std::vector<std::vector<std::size_t>> prefs;
  for (const auto& c : s.corners) prefs.push_back(prob.preferences(c));

  // Every piece is preferred by at least k_i agents at some corner.
  for (std::size_t i = 0; i < inst.m(); ++i) {
    std::int64_t best = 0;
    for (const auto& pc : prefs) best = std::max<std::int64_t>(best, std::count(pc.begin(), pc.end(), i));
    if (best < inst.groups()[i]) {
      throw ReductionViolation("piece " + std::to_string(i + 1) + " is under-demanded at every corner");
    }
  }
  HallResult h = hall_assignment(s.corners, prefs, inst.groups());
  Allocation alloc{x, cuts_from_point(x), std::move(h.assignment), std::move(h.certificates)};
  if (stats) {
    stats->root = p;
    stats->delta_exponent = prob.delta_exponent();
    stats->evaluations = prob.sign().evaluations();
    stats->queries = inst.total_queries() - before;
    stats->corners = prob.corners_evaluated();
  }
  return alloc;
}

nlohmann::json EnvyReport::to_json() const {
  nlohmann::json j{{"ok", ok}, {"capacities_ok", capacities_ok}};
  j["agents"] = nlohmann::json::array();
  for (const auto& a : agents) j["agents"].push_back({{"agent", a.agent}, {"ok", a.ok}, {"reason", a.reason}});
  return j;
}

EnvyReport verify_near_envy_free(const Allocation& alloc, CakeInstance& inst) {
  EnvyReport rep;
  const std::size_t n = inst.n();
  if (alloc.assignment.size() != n || alloc.certificates.size() != n || alloc.cuts.size() != inst.d()) {
    rep.ok = rep.capacities_ok = false;
    return rep;
  }
  std::vector<std::int64_t> load(inst.m(), 0);
  for (std::size_t j : alloc.assignment) {
    if (j >= inst.m()) {
      rep.ok = rep.capacities_ok = false;
      return rep;
    }
    ++load[j];
  }
  if (load != inst.groups()) rep.ok = rep.capacities_ok = false;
  const Rational r = inst.r();
  for (std::size_t a = 0; a < n; ++a) {
    AgentReport ar{a, true, ""};
    const auto corner = r_grid_coords(alloc.certificates[a], inst);
    const auto cuts = cuts_from_point(corner);
    for (std::size_t i = 0; i < cuts.size(); ++i) {
      const Rational gap = cuts[i] > alloc.cuts[i] ? cuts[i] - alloc.cuts[i] : alloc.cuts[i] - cuts[i];
      if (gap > r) {
        ar.ok = false;
        ar.reason = "certificate cut " + std::to_string(i + 1) + " is more than r away";
      }
    }
    if (ar.ok) {
      const Partition p = partition_from_point(corner);
      auto& agent = inst.agents()[a];
      const Rational mine = agent.value(p[alloc.assignment[a]].lo, p[alloc.assignment[a]].hi);
      for (std::size_t j = 0; j < p.size(); ++j) {
        if (j == alloc.assignment[a]) continue;
        if (agent.value(p[j].lo, std::max(p[j].lo, p[j].hi)) > mine) {
          ar.ok = false;
          ar.reason = "agent " + std::to_string(a + 1) + " prefers piece " + std::to_string(j + 1) +
                      " at its certificate corner";
          break;
        }
      }
    }
    rep.ok = rep.ok && ar.ok;
    rep.agents.push_back(std::move(ar));
  }
  return rep;
}

}  // namespace monoroot
