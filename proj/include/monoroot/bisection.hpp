#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "monoroot/domain.hpp"

namespace monoroot {

enum class Orientation { positive, negative };

/// One probe of the bisection loop; lo/hi are the bracket before the probe.
struct BisectionStep {
  std::int64_t lo;
  std::int64_t hi;
  std::int64_t probe;
  Sign value;
};

struct BisectionOptions {
  Orientation orientation = Orientation::positive;
  /// Endpoint signs the caller already knows; they are never re-evaluated.
  std::optional<Sign> lo_value;
  std::optional<Sign> hi_value;
  std::function<void(const BisectionStep&)> trace;
};

using SignFunction1D = std::function<Sign(std::int64_t)>;

/// Outcome of the probing phase: either a probe hit an exact zero, or the bracket
/// [lo, lo+1] remains. Endpoint values are only present when they were evaluated
/// or supplied by the caller.
struct Bracket {
  std::int64_t lo;
  std::int64_t hi;
  std::optional<Sign> lo_value;
  std::optional<Sign> hi_value;
  std::optional<std::int64_t> exact_root;
};

/// Halves [lo, hi] until a probe returns 0 or the interval has length one.
/// Uses the rule: if f(c) <= 0 continue in [c, hi], otherwise in [lo, c]
/// (comparisons flipped for negative orientation). Never evaluates the endpoints.
Bracket bisect_bracket(const SignFunction1D& f, std::int64_t lo, std::int64_t hi,
                       const BisectionOptions& options = {});

/// Root of a delta-continuous switching sign function on the index range [lo, hi].
///
/// Endpoint signs are checked lazily, only when the final bracket needs them. At most
/// ceil(log2(hi - lo)) + 2 evaluations. When the final bracket is [z, z+1], z is
/// returned if f(z) = 0, otherwise z+1.
///
/// Throws HypothesisViolation(positive_switching) if an evaluated endpoint has the
/// wrong sign, and HypothesisViolation(delta_continuity) if the final bracket has
/// opposite nonzero signs.
std::int64_t bisect_root_1d(const SignFunction1D& f, std::int64_t lo, std::int64_t hi,
                            const BisectionOptions& options = {});

/// Convenience overload over [0, n].
inline std::int64_t bisect_root_1d(const SignFunction1D& f, std::int64_t n,
                                   const BisectionOptions& options = {}) {
  return bisect_root_1d(f, 0, n, options);
}

}  // namespace monoroot
