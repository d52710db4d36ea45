#include "monoroot/bisection.hpp"

#include "monoroot/errors.hpp"

namespace monoroot {

namespace {

// Sign as seen by the positive-orientation rule.
Sign oriented(Sign v, Orientation o) { return o == Orientation::positive ? v : static_cast<Sign>(-v); }

}  // namespace

Bracket bisect_bracket(const SignFunction1D& f, std::int64_t lo, std::int64_t hi, const BisectionOptions& options) {
  if (hi < lo) throw DomainError("bisection range is empty");
  Bracket b{lo, hi, options.lo_value, options.hi_value, std::nullopt};
  while (b.hi - b.lo > 1) {
    const std::int64_t c = b.lo + (b.hi - b.lo) / 2;
    const Sign v = f(c);
    if (options.trace) options.trace(BisectionStep{b.lo, b.hi, c, v});
    if (v == 0) {
      b.exact_root = c;
      return b;
    }
    if (oriented(v, options.orientation) < 0) {
      b.lo = c;
      b.lo_value = v;
    } else {
      b.hi = c;
      b.hi_value = v;
    }
  }
  return b;
}

std::int64_t bisect_root_1d(const SignFunction1D& f, std::int64_t lo, std::int64_t hi,
                            const BisectionOptions& options) {
  const Orientation o = options.orientation;
  const Bracket b = bisect_bracket(f, lo, hi, options);
  if (b.exact_root) return *b.exact_root;

  const Sign vlo = b.lo_value ? *b.lo_value : f(b.lo);
  if (oriented(vlo, o) > 0) {
    throw HypothesisViolation(Hypothesis::positive_switching,
                              "lower endpoint " + std::to_string(b.lo) + " has the wrong sign");
  }
  if (vlo == 0) return b.lo;
  if (b.hi == b.lo) {
    throw HypothesisViolation(Hypothesis::positive_switching, "degenerate range has a nonzero value");
  }
  const Sign vhi = b.hi_value ? *b.hi_value : f(b.hi);
  if (oriented(vhi, o) < 0) {
    throw HypothesisViolation(Hypothesis::positive_switching,
                              "upper endpoint " + std::to_string(b.hi) + " has the wrong sign");
  }
  if (vhi == 0) return b.hi;
  throw HypothesisViolation(Hypothesis::delta_continuity, "adjacent indices " + std::to_string(b.lo) + "," +
                                                              std::to_string(b.hi) + " have opposite signs");
}

}  // namespace monoroot
