#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace monoroot {

/// Exact dyadic rational mantissa * 2^exponent, kept normalized (odd mantissa or zero).
class Dyadic {
 public:
  constexpr Dyadic() = default;
  Dyadic(std::int64_t mantissa, int exponent);

  static Dyadic from_int(std::int64_t v) { return Dyadic(v, 0); }
  static Dyadic power_of_two(int exponent) { return Dyadic(1, exponent); }
  /// Exact conversion; throws DomainError if the value does not fit in 62 mantissa bits.
  static Dyadic from_double(double v);

  std::int64_t mantissa() const noexcept { return mantissa_; }
  int exponent() const noexcept { return exponent_; }
  double to_double() const;
  std::string to_string() const;

  friend Dyadic operator+(const Dyadic& a, const Dyadic& b);
  friend Dyadic operator-(const Dyadic& a, const Dyadic& b);
  friend Dyadic operator*(const Dyadic& a, const Dyadic& b);
  Dyadic operator-() const { return Dyadic(-mantissa_, exponent_); }

  friend bool operator==(const Dyadic& a, const Dyadic& b) = default;
  friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b);

  /// If this value is an integer power of two, its exponent.
  bool is_power_of_two(int* exponent_out = nullptr) const;

 private:
  std::int64_t mantissa_ = 0;
  int exponent_ = 0;
};

/// Parses "2^-8", "2^3", "2^0" into the exponent. Throws InputError.
int parse_power_of_two(std::string_view text);
std::string format_power_of_two(int exponent);

/// True iff v is a positive integer power of two.
constexpr bool is_power_of_two(std::int64_t v) { return v > 0 && (v & (v - 1)) == 0; }

/// floor(log2(v)) for v >= 1.
int floor_log2(std::uint64_t v);
/// ceil(log2(v)) for v >= 1.
int ceil_log2(std::uint64_t v);

}  // namespace monoroot
