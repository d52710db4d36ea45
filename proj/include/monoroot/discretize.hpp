#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "monoroot/domain.hpp"

namespace monoroot {

/// epsilon, Lipschitz constant L and the grid spacing delta = 2^delta_exponent <= epsilon / L.
struct DiscretizationParams {
  double epsilon;
  double lipschitz;
  int delta_exponent;

  /// Largest power of two delta with delta <= epsilon / L that also divides every side of `box`.
  static DiscretizationParams choose(double epsilon, double lipschitz, const BoxDomain& box);
};

/// -1 below -epsilon, +1 above +epsilon, 0 when |v| <= epsilon (inclusive).
Sign discretize_value(double v, double epsilon);

/// Sign oracle over `g` reading `o` at grid coordinates. Holds a reference to `o`;
/// each sign evaluation costs exactly one real evaluation. Non-finite values raise
/// EvaluationError.
SignOracle discretize(RealOracle& o, double epsilon, const GridSpec& g);
SignOracle discretize(RealOracle& o, const DiscretizationParams& params, const GridSpec& g);

enum class CheckMode { exhaustive, sampled };

const char* to_string(CheckMode m);

struct Violation {
  std::vector<GridPoint> points;
  std::size_t component = 0;
  std::string detail;
};

struct CheckReport {
  std::string property;
  CheckMode mode = CheckMode::exhaustive;
  std::vector<Violation> violations;
  std::uint64_t points_checked = 0;
  /// For switching checks: whether each component passed. Empty otherwise.
  std::vector<bool> component_passed;

  bool passed() const { return violations.empty(); }
};

struct CheckOptions {
  /// Above this many grid points the checker samples instead of enumerating.
  std::uint64_t cap = kDefaultPointCap;
  /// Number of sampled points (or lines, for monotonicity) in sampled mode.
  std::uint64_t samples = 4096;
  std::uint64_t seed = 0x6d6f6e6fULL;
  /// Reporting stops after this many violations.
  std::size_t max_violations = 64;
};

/// Pairs of grid points at max-norm distance one cell whose component signs are -1 and +1.
CheckReport check_delta_continuity(SignOracle& o, const GridSpec& g, const CheckOptions& options = {});

/// f_i <= 0 on face x_i = a_i and f_i >= 0 on face x_i = b_i (strict: < 0 and > 0).
CheckReport check_positive_switching(SignOracle& o, const GridSpec& g, bool strict = false,
                                     const CheckOptions& options = {});
CheckReport check_positive_switching(RealOracle& o, const GridSpec& g, bool strict = false,
                                     const CheckOptions& options = {});

/// Lower faces as for positive switching; on face x_i = b_i the prefix sum f_1 + ... + f_i >= 0.
CheckReport check_sum_switching(SignOracle& o, const GridSpec& g, const CheckOptions& options = {});
CheckReport check_sum_switching(RealOracle& o, const GridSpec& g, const CheckOptions& options = {});

/// Weak monotonicity of f_i along every grid line in direction j, for each declared (i, j).
CheckReport check_monotonicity(SignOracle& o, const MonotoneProfile& profile, const GridSpec& g,
                               const CheckOptions& options = {});
CheckReport check_monotonicity(RealOracle& o, const MonotoneProfile& profile, const GridSpec& g,
                               const CheckOptions& options = {});

/// Which monotonicity conditions hold on the grid: entry (i, j) is increasing or decreasing
/// when that condition holds (increasing is reported when f_i is constant in x_j), none otherwise.
MonotoneProfile observed_monotonicity(SignOracle& o, const GridSpec& g, const CheckOptions& options = {});
MonotoneProfile observed_monotonicity(RealOracle& o, const GridSpec& g, const CheckOptions& options = {});

struct PaddedProblem {
  SignOracle oracle;
  GridSpec grid;
};

/// Extends the grid by one cell on every face. On the new face x_i = a_i - delta, f_i = -1;
/// on x_i = b_i + delta, f_i = +1; every other value copies the nearest original grid point.
/// Padded index q corresponds to original index clamp(q - 1, 0, N). Holds a reference to `o`.
PaddedProblem pad_strict(SignOracle& o, const GridSpec& g);

}  // namespace monoroot
