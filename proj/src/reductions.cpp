#include "monoroot/reductions.hpp"

#include <algorithm>
#include <cmath>

#include "monoroot/errors.hpp"
#include "monoroot/random.hpp"

namespace monoroot {

namespace {

double trunc1(double v) { return std::clamp(v, -1.0, 1.0); }

double max_abs(const RealVector& v) {
  double m = 0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

RealVector random_point(const BoxDomain& box, Rng& rng) {
  RealVector x(box.dim());
  for (std::size_t j = 0; j < x.size(); ++j) x[j] = rng.uniform(box.lower()[j], box.upper()[j]);
  return x;
}

void check_epsilon_root(const HardnessInstance& inst, const RealVector& x, double epsilon) {
  if (x.size() != inst.f.dim) throw DomainError("point has the wrong dimension");
  if (!(epsilon >= 0)) throw DomainError("epsilon must be non-negative");
  if (max_abs(inst.f.f(x)) > epsilon) throw DomainError("point is not an epsilon-root of the constructed map");
}

}  // namespace

RealOracle dual(RealOracle& o) {
  return RealOracle(o.dim(), [&o](const RealVector& x) {
    RealVector y = o(x);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = x[i] - y[i];
    return y;
  });
}

BrouwerReport check_brouwer_to_miranda(RealOracle& o, const BoxDomain& box, const BrouwerCheckOptions& options) {
  if (o.dim() != box.dim()) throw DomainError("oracle and box dimensions differ");
  BrouwerReport r;
  RealOracle d = dual(o);
  Rng rng(options.seed);
  auto note = [&r](std::string s) {
    if (r.violations.size() < 64) r.violations.push_back(std::move(s));
  };
  const std::size_t n = box.dim();
  for (std::uint64_t s = 0; s < options.samples; ++s) {
    const std::size_t i = static_cast<std::size_t>(rng.integer(0, static_cast<std::int64_t>(n) - 1));
    const bool upper = rng.coin();
    RealVector x = random_point(box, rng);
    x[i] = upper ? box.upper()[i] : box.lower()[i];
    const RealVector fx = o(x);
    ++r.samples;
    for (std::size_t j = 0; j < n; ++j) {
      if (fx[j] < box.lower()[j] || fx[j] > box.upper()[j]) {
        r.maps_into_box = false;
        note("image leaves the box in coordinate " + std::to_string(j + 1));
      }
    }
    const double di = x[i] - fx[i];
    if (upper ? di < 0 : di > 0) {
      r.dual_switching = false;
      note("dual component " + std::to_string(i + 1) + " has the wrong sign on a face");
    }
  }
  if (options.lipschitz > 0) {
    for (std::uint64_t s = 0; s < options.samples; ++s) {
      RealVector x = random_point(box, rng);
      RealVector y = x;
      for (std::size_t j = 0; j < n; ++j) {
        y[j] = std::clamp(x[j] + rng.uniform(-options.step, options.step), box.lower()[j], box.upper()[j]);
      }
      RealVector dx = d(x), dy = d(y);
      double dist = 0;
      for (std::size_t j = 0; j < n; ++j) {
        dist = std::max(dist, std::abs(x[j] - y[j]));
        dx[j] -= dy[j];
      }
      if (dist == 0) continue;
      r.max_dual_slope = std::max(r.max_dual_slope, max_abs(dx) / dist);
    }
    if (r.max_dual_slope > (options.lipschitz + 1) * (1 + 1e-6)) {
      r.lipschitz_ok = false;
      note("dual slope exceeds L + 1");
    }
  }
  return r;
}

RealOracle flip_variable(RealOracle& o, std::size_t j, const BoxDomain& box) {
  if (j >= o.dim() || box.dim() != o.dim()) throw DomainError("flip index out of range");
  const double s = box.lower()[j] + box.upper()[j];
  return RealOracle(o.dim(), [&o, j, s](const RealVector& x) {
    RealVector y = x;
    y[j] = s - x[j];
    return o(y);
  });
}

SignOracle flip_variable(SignOracle& o, std::size_t j, const GridSpec& g) {
  if (j >= o.dim() || g.dim() != o.dim()) throw DomainError("flip index out of range");
  const std::int64_t n = g.cells(j);
  return SignOracle(o.dim(), [&o, j, n](const GridPoint& p) {
    GridPoint q = p;
    q[j] = n - p[j];
    return o(q);
  });
}

RealOracle negate_component(RealOracle& o, std::size_t i) {
  if (i >= o.dim()) throw DomainError("component index out of range");
  return RealOracle(o.dim(), [&o, i](const RealVector& x) {
    RealVector y = o(x);
    y[i] = -y[i];
    return y;
  });
}

SignOracle negate_component(SignOracle& o, std::size_t i) {
  if (i >= o.dim()) throw DomainError("component index out of range");
  return SignOracle(o.dim(), [&o, i](const GridPoint& p) {
    SignVector y = o(p);
    y[i] = static_cast<Sign>(-y[i]);
    return y;
  });
}

HardnessInstance make_dd_insufficient_instance(RealOracle::Evaluator g, std::size_t d) {
  if (d < 3) throw DomainError("construction needs d >= 3");
  RealInstance f;
  f.family = "dd-insufficient";
  f.dim = d;
  f.box = BoxDomain(RealVector(d, -1.0), RealVector(d, 1.0));
  f.f = [g, d](const RealVector& x) {
    const RealVector gx = g({x[0], x[2]});
    RealVector y(d, 0.0);
    y[0] = gx[0] + 2 * (x[0] - trunc1(2 * x[1] - x[2]));
    y[1] = 2 * x[1] - x[0] - x[2];
    y[2] = gx[1] + 2 * (x[2] - trunc1(2 * x[1] - x[0]));
    return y;
  };
  // |dg| <= |dx|, trunc(2x_2 - x_3) moves by at most 3|dx|.
  f.lipschitz = 9;
  f.profile = MonotoneProfile::diagonal_increasing(d);
  f.profile.set(0, 1, Monotone::decreasing);
  f.profile.set(2, 1, Monotone::decreasing);
  f.profile.set(1, 0, Monotone::decreasing);
  f.profile.set(1, 2, Monotone::decreasing);
  return HardnessInstance{std::move(f), std::move(g), 2};
}

RealVector recover_2d_root(const HardnessInstance& inst, const RealVector& x, double epsilon) {
  check_epsilon_root(inst, x, epsilon);
  RealVector y{x[0], x[2]};
  const double gy = max_abs(inst.g(y));
  if (gy > 3 * epsilon) {
    throw ReductionViolation("recovered point has |g| = " + std::to_string(gy) + " > 3 epsilon");
  }
  return y;
}

HardnessInstance make_switching_necessary_instance(RealOracle::Evaluator g) {
  RealInstance f;
  f.family = "switching-necessary";
  f.dim = 2;
  f.box = BoxDomain({-1.0, -1.0}, {1.0, 1.0});
  f.f = [g](const RealVector& x) {
    return RealVector{g({x[0]})[0] + 2 * (x[0] - x[1]), x[1] - x[0]};
  };
  f.lipschitz = 5;
  f.profile = MonotoneProfile::diagonal_increasing(2);
  f.profile.set(0, 1, Monotone::decreasing);
  f.profile.set(1, 0, Monotone::decreasing);
  return HardnessInstance{std::move(f), std::move(g), 1};
}

double recover_1d_root(const HardnessInstance& inst, const RealVector& x, double epsilon) {
  check_epsilon_root(inst, x, epsilon);
  const double gx = std::abs(inst.g({x[0]})[0]);
  if (gx > 3 * epsilon) {
    throw ReductionViolation("recovered point has |g| = " + std::to_string(gx) + " > 3 epsilon");
  }
  return x[0];
}

double lipschitz_spot_check(const RealInstance& inst, std::uint64_t samples, std::uint64_t seed, double step) {
  Rng rng(seed);
  double worst = 0;
  for (std::uint64_t s = 0; s < samples; ++s) {
    RealVector x = random_point(inst.box, rng);
    RealVector y = x;
    double dist = 0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      y[j] = std::clamp(x[j] + rng.uniform(-step, step), inst.box.lower()[j], inst.box.upper()[j]);
      dist = std::max(dist, std::abs(y[j] - x[j]));
    }
    if (dist == 0) continue;
    RealVector fx = inst.f(x);
    const RealVector fy = inst.f(y);
    for (std::size_t i = 0; i < fx.size(); ++i) fx[i] -= fy[i];
    worst = std::max(worst, max_abs(fx) / dist);
  }
  return worst;
}

}  // namespace monoroot
