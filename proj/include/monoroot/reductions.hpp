#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "monoroot/domain.hpp"
#include "monoroot/instances.hpp"

namespace monoroot {

/// x - f(x). Holds a reference to `o`; one inner evaluation per call.
RealOracle dual(RealOracle& o);

struct BrouwerCheckOptions {
  std::uint64_t samples = 2000;
  std::uint64_t seed = 1;
  /// Lipschitz constant of the map; the dual is then checked against L + 1. Zero skips the check.
  double lipschitz = 0;
  /// Spacing of the sampled pairs for the Lipschitz spot-check.
  double step = 1.0 / 1024;
};

struct BrouwerReport {
  bool maps_into_box = true;
  bool dual_switching = true;
  bool lipschitz_ok = true;
  double max_dual_slope = 0;
  std::uint64_t samples = 0;
  std::vector<std::string> violations;

  bool passed() const { return maps_into_box && dual_switching && lipschitz_ok; }
};

/// Samples every face of `box`: checks that o maps into the box and that its dual is
/// positive-switching there; optionally spot-checks the dual's Lipschitz constant.
BrouwerReport check_brouwer_to_miranda(RealOracle& o, const BoxDomain& box, const BrouwerCheckOptions& options = {});

/// x_j -> (a_j + b_j) - x_j. Involution; holds a reference to `o`.
RealOracle flip_variable(RealOracle& o, std::size_t j, const BoxDomain& box);
/// Index p_j -> N_j - p_j.
SignOracle flip_variable(SignOracle& o, std::size_t j, const GridSpec& g);
/// f_i -> -f_i.
RealOracle negate_component(RealOracle& o, std::size_t i);
SignOracle negate_component(SignOracle& o, std::size_t i);

/// A constructed instance together with the lower-dimensional map it encodes.
struct HardnessInstance {
  RealInstance f;
  RealOracle::Evaluator g;
  std::size_t g_dim;
};

/// From a 1-Lipschitz positive-switching g on [-1,1]^2, a map on [-1,1]^d (d >= 3) with all
/// diagonal and four ex-diagonal conditions; components beyond the third are zero.
HardnessInstance make_dd_insufficient_instance(RealOracle::Evaluator g, std::size_t d = 3);

/// (x_1, x_3) of an epsilon-root x; throws ReductionViolation unless |g| <= 3 epsilon there.
RealVector recover_2d_root(const HardnessInstance& inst, const RealVector& x, double epsilon);

/// From a 1-Lipschitz g on [-1,1] with a root: f = (g(x_1) + 2 (x_1 - x_2), x_2 - x_1).
HardnessInstance make_switching_necessary_instance(RealOracle::Evaluator g);

/// x_1 of an epsilon-root x; throws ReductionViolation unless |g(x_1)| <= 3 epsilon.
double recover_1d_root(const HardnessInstance& inst, const RealVector& x, double epsilon);

/// Largest |f(x) - f(y)|_inf / |x - y|_inf over random pairs at max-norm distance `step`.
double lipschitz_spot_check(const RealInstance& inst, std::uint64_t samples, std::uint64_t seed, double step);

}  // namespace monoroot
