#include "monoroot/instances.hpp"

#include <algorithm>
#include <cmath>

#include "monoroot/discretize.hpp"
#include "monoroot/errors.hpp"
#include "monoroot/random.hpp"

namespace monoroot {

namespace {

constexpr int kKnots = 4;

// Piecewise linear on equally spaced knots; slope at most kKnots.
struct Piecewise {
  std::vector<double> values;

  double operator()(double x) const {
    const double t = std::clamp(x, 0.0, 1.0) * (values.size() - 1);
    const auto k = std::min(static_cast<std::size_t>(t), values.size() - 2);
    const double w = t - static_cast<double>(k);
    return values[k] * (1 - w) + values[k + 1] * w;
  }
  double slope() const {
    double s = 0;
    for (std::size_t k = 0; k + 1 < values.size(); ++k) s = std::max(s, std::abs(values[k + 1] - values[k]));
    return s * (values.size() - 1);
  }
};

Piecewise random_piecewise(Rng& rng, bool increasing) {
  Piecewise p;
  for (int k = 0; k <= kKnots; ++k) p.values.push_back(rng.uniform());
  if (increasing) std::sort(p.values.begin(), p.values.end());
  return p;
}

RealInstance two_component(const std::string& family, std::uint64_t seed, bool phi_increasing, bool sum) {
  Rng rng(seed);
  const double a = rng.uniform(0.5, 2.0);
  const double b = rng.uniform(0.5, 2.0);
  const Piecewise phi = random_piecewise(rng, phi_increasing);
  const Piecewise psi = random_piecewise(rng, false);
  RealInstance inst;
  inst.family = family;
  inst.dim = 2;
  inst.box = BoxDomain::unit(2);
  inst.f = [=](const RealVector& x) {
    const double f1 = a * (x[0] - phi(x[1]));
    double f2 = b * (x[1] - psi(x[0]));
    if (sum) f2 -= x[1] * f1;
    return RealVector{f1, f2};
  };
  const double l1 = a * (1 + phi.slope());
  const double l2 = sum ? b * (1 + psi.slope()) + a * (2 + phi.slope()) : b * (1 + psi.slope());
  inst.lipschitz = std::max(l1, l2);
  inst.profile = MonotoneProfile::diagonal_increasing(2);
  if (phi_increasing) inst.profile.set(0, 1, Monotone::decreasing);
  if (sum) inst.profile.set(1, 1, Monotone::none);
  return inst;
}

}  // namespace

RealInstance random_monotone_2d(std::uint64_t seed) { return two_component("random-monotone-2d", seed, false, false); }

RealInstance random_exdiag_2d(std::uint64_t seed) { return two_component("exdiag-2d", seed, true, false); }

RealInstance random_sum_2d(std::uint64_t seed) { return two_component("sum-2d", seed, false, true); }

RealInstance random_exdiag_nd(std::size_t d, std::uint64_t seed) {
  if (d == 0) throw DomainError("dimension must be positive");
  Rng rng(seed);
  std::vector<double> alpha(d), offset(d);
  std::vector<std::vector<double>> w(d, std::vector<double>(d, 0.0));
  double lipschitz = 0;
  for (std::size_t i = 0; i < d; ++i) {
    alpha[i] = rng.uniform(0.5, 2.0);
    offset[i] = rng.uniform(-0.5, 1.0);
    double row = 1;
    for (std::size_t j = 0; j < d; ++j) {
      if (j == i) continue;
      w[i][j] = rng.uniform(0.0, 1.0 / static_cast<double>(d));
      row += w[i][j];
    }
    lipschitz = std::max(lipschitz, alpha[i] * row);
  }
  RealInstance inst;
  inst.family = "recursive";
  inst.dim = d;
  inst.box = BoxDomain::unit(d);
  inst.f = [=](const RealVector& x) {
    RealVector y(d);
    for (std::size_t i = 0; i < d; ++i) {
      double s = offset[i];
      for (std::size_t j = 0; j < d; ++j) s += w[i][j] * x[j];
      y[i] = alpha[i] * (x[i] - std::clamp(s, 0.0, 1.0));
    }
    return y;
  };
  inst.lipschitz = lipschitz;
  inst.profile = MonotoneProfile::exdiagonal_decreasing(d);
  for (std::size_t i = 0; i < d; ++i) inst.profile.set(i, i, Monotone::increasing);
  return inst;
}

RealInstance decoupled(const RealVector& centers) {
  RealInstance inst;
  inst.family = "decoupled";
  inst.dim = centers.size();
  inst.box = BoxDomain::unit(centers.size());
  inst.f = [centers](const RealVector& x) {
    RealVector y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] - centers[i];
    return y;
  };
  inst.lipschitz = 1;
  inst.profile = MonotoneProfile::diagonal_increasing(centers.size());
  for (std::size_t i = 0; i < centers.size(); ++i) {
    for (std::size_t j = 0; j < centers.size(); ++j) {
      if (i != j) inst.profile.set(i, j, Monotone::decreasing);
    }
  }
  return inst;
}

SignOracle::Evaluator staircase_2d(std::int64_t n, std::uint64_t seed) {
  Rng rng(seed);
  // Row r of the zero set of f_1 is the column interval [s[r], s[r+1]].
  std::vector<std::int64_t> s(static_cast<std::size_t>(n) + 2);
  for (auto& v : s) v = rng.integer(0, n);
  std::sort(s.begin(), s.end());
  const std::int64_t t = rng.integer(1, n - 1);
  const std::int64_t c = rng.integer(0, n);
  return [=](const GridPoint& p) {
    const std::int64_t u = p[0];
    const std::int64_t v = p[1];
    const auto r = static_cast<std::size_t>(v);
    const Sign f1 = u < s[r] ? -1 : (u > s[r + 1] ? 1 : 0);
    // Band of width n around a line that is steep in v, so f_2 changes sign along the staircase.
    const std::int64_t level = n * (v - t) + (u - c);
    const Sign f2 = level < 0 ? -1 : (level > n ? 1 : 0);
    return SignVector{f1, f2};
  };
}

DiscreteProblem discretize_instance(const RealInstance& inst, int delta_exponent) {
  GridSpec grid = GridSpec::create(inst.box, delta_exponent);
  const double epsilon = inst.lipschitz * std::ldexp(1.0, delta_exponent);
  auto real = std::make_unique<RealOracle>(inst.dim, inst.f);
  auto sign = std::make_unique<SignOracle>(discretize(*real, epsilon, grid));
  return DiscreteProblem{std::move(real), std::move(sign), std::move(grid), epsilon};
}

RealInstance instance_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("family")) throw InputError("instance needs a \"family\" field");
  const std::string family = j.at("family").get<std::string>();
  const auto seed = j.value("seed", std::uint64_t{1});
  if (family == "decoupled") return decoupled(j.at("centers").get<RealVector>());
  if (family == "random-monotone-2d") return random_monotone_2d(seed);
  if (family == "exdiag-2d") return random_exdiag_2d(seed);
  if (family == "sum-2d") return random_sum_2d(seed);
  if (family == "recursive") return random_exdiag_nd(j.value("dim", std::size_t{3}), seed);
  throw InputError("unknown instance family \"" + family + "\"");
}

}  // namespace monoroot
