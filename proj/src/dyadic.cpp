#include "monoroot/dyadic.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <limits>

#include "monoroot/errors.hpp"

namespace monoroot {

const char* to_string(Hypothesis h) {
  switch (h) {
    case Hypothesis::positive_switching: return "positive-switching";
    case Hypothesis::sum_switching: return "sum-switching";
    case Hypothesis::delta_continuity: return "delta-continuity";
    case Hypothesis::monotonicity: return "monotonicity";
  }
  return "unknown";
}

namespace {

constexpr __int128 kMantissaLimit = static_cast<__int128>(1) << 62;

Dyadic from_wide(__int128 mantissa, int exponent) {
  while (mantissa != 0 && (mantissa % 2) == 0) {
    mantissa /= 2;
    ++exponent;
  }
  if (mantissa >= kMantissaLimit || mantissa <= -kMantissaLimit) {
    throw DomainError("dyadic mantissa overflow");
  }
  return Dyadic(static_cast<std::int64_t>(mantissa), exponent);
}

// Aligns both operands to the smaller exponent.
void align(const Dyadic& a, const Dyadic& b, __int128& ma, __int128& mb, int& exponent) {
  exponent = std::min(a.exponent(), b.exponent());
  const int sa = a.exponent() - exponent;
  const int sb = b.exponent() - exponent;
  if ((a.mantissa() != 0 && sa > 62) || (b.mantissa() != 0 && sb > 62)) {
    throw DomainError("dyadic exponent gap too large");
  }
  ma = a.mantissa() == 0 ? 0 : static_cast<__int128>(a.mantissa()) << sa;
  mb = b.mantissa() == 0 ? 0 : static_cast<__int128>(b.mantissa()) << sb;
}

}  // namespace

Dyadic::Dyadic(std::int64_t mantissa, int exponent) : mantissa_(mantissa), exponent_(exponent) {
  if (mantissa_ == 0) {
    exponent_ = 0;
    return;
  }
  const int tz = std::countr_zero(static_cast<std::uint64_t>(mantissa_ < 0 ? -mantissa_ : mantissa_));
  mantissa_ >>= tz;
  exponent_ += tz;
}

Dyadic Dyadic::from_double(double v) {
  if (!std::isfinite(v)) throw DomainError("non-finite value is not dyadic");
  if (v == 0.0) return Dyadic();
  int exp = 0;
  const double frac = std::frexp(v, &exp);  // v = frac * 2^exp, |frac| in [0.5, 1)
  const double scaled = std::ldexp(frac, 53);
  return Dyadic(static_cast<std::int64_t>(scaled), exp - 53);
}

double Dyadic::to_double() const { return std::ldexp(static_cast<double>(mantissa_), exponent_); }

std::string Dyadic::to_string() const {
  if (exponent_ >= 0 && exponent_ < 62) return std::to_string(mantissa_ << exponent_);
  return std::to_string(mantissa_) + "*2^" + std::to_string(exponent_);
}

Dyadic operator+(const Dyadic& a, const Dyadic& b) {
  __int128 ma, mb;
  int e;
  align(a, b, ma, mb, e);
  return from_wide(ma + mb, e);
}

Dyadic operator-(const Dyadic& a, const Dyadic& b) { return a + (-b); }

Dyadic operator*(const Dyadic& a, const Dyadic& b) {
  return from_wide(static_cast<__int128>(a.mantissa()) * b.mantissa(), a.exponent() + b.exponent());
}

std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b) {
  __int128 ma, mb;
  int e;
  align(a, b, ma, mb, e);
  if (ma < mb) return std::strong_ordering::less;
  if (ma > mb) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

bool Dyadic::is_power_of_two(int* exponent_out) const {
  if (mantissa_ != 1) return false;
  if (exponent_out) *exponent_out = exponent_;
  return true;
}

int parse_power_of_two(std::string_view text) {
  if (text.size() < 3 || text.substr(0, 2) != "2^") {
    throw InputError("expected a power of two written as 2^K, got '" + std::string(text) + "'");
  }
  std::string_view rest = text.substr(2);
  int value = 0;
  const char* first = rest.data();
  const char* last = rest.data() + rest.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw InputError("malformed exponent in '" + std::string(text) + "'");
  }
  return value;
}

std::string format_power_of_two(int exponent) { return "2^" + std::to_string(exponent); }

int floor_log2(std::uint64_t v) { return 63 - std::countl_zero(v); }

int ceil_log2(std::uint64_t v) { return v <= 1 ? 0 : floor_log2(v - 1) + 1; }

}  // namespace monoroot
