#pragma once

// Exact rationals. Values whose numerator and denominator fit in int64 are
// kept inline; anything larger is promoted to a GMP rational and demoted
// again as soon as it fits.

#include <gmpxx.h>

#include <compare>
#include <concepts>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>

namespace regrobust {

class Rational {
 public:
  Rational() noexcept = default;
  template <std::integral T>
  Rational(T n) {  // NOLINT(implicit)
    if constexpr (std::is_unsigned_v<T> && sizeof(T) >= sizeof(std::int64_t)) {
      set_i128(static_cast<__int128>(n), 1);
    } else {
      num_ = static_cast<std::int64_t>(n);
    }
  }
  Rational(std::int64_t n, std::int64_t d);

  Rational(const Rational& o);
  Rational(Rational&& o) noexcept = default;
  Rational& operator=(const Rational& o);
  Rational& operator=(Rational&& o) noexcept = default;
  ~Rational();

  // Accepts "n", "n/d", decimals ("-0.125", ".5") and exponents ("1e-3").
  static Rational parse(std::string_view text);
  static Rational from_mpq(const mpq_class& q);

  mpq_class to_mpq() const;
  // Always "num/den", e.g. "5/1".
  std::string str() const;
  // "num" for integers, "num/den" otherwise.
  std::string pretty() const;
  double to_double() const;

  int sign() const noexcept;
  bool is_integer() const noexcept;
  bool is_small() const noexcept { return !big_; }
  // Only meaningful when is_small().
  std::int64_t small_num() const noexcept { return num_; }
  std::int64_t small_den() const noexcept { return den_; }

  Rational floor() const;
  Rational ceil() const;
  Rational abs() const;
  std::size_t hash() const noexcept;

  Rational& operator+=(const Rational& o);
  Rational& operator-=(const Rational& o);
  Rational& operator*=(const Rational& o);
  Rational& operator/=(const Rational& o);
  Rational operator-() const;

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) noexcept;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) noexcept;

 private:
  void set_big(mpq_class&& q);
  void set_i128(__int128 n, __int128 d);

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
  std::unique_ptr<mpq_class> big_;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

Rational min(const Rational& a, const Rational& b);
Rational max(const Rational& a, const Rational& b);

// Rational or +infinity.
class ExtendedCost {
 public:
  ExtendedCost() = default;  // infinity
  ExtendedCost(Rational v) : value_(std::move(v)) {}  // NOLINT(implicit)
  static ExtendedCost infinity() { return {}; }

  bool finite() const { return value_.has_value(); }
  const Rational& value() const { return *value_; }
  std::string str() const { return finite() ? value_->str() : "inf"; }

  friend ExtendedCost operator+(const ExtendedCost& a, const ExtendedCost& b);
  friend bool operator==(const ExtendedCost& a, const ExtendedCost& b) = default;
  friend std::strong_ordering operator<=>(const ExtendedCost& a, const ExtendedCost& b);

 private:
  std::optional<Rational> value_;
};

std::ostream& operator<<(std::ostream& os, const ExtendedCost& c);

}  // namespace regrobust

template <>
struct std::hash<regrobust::Rational> {
  std::size_t operator()(const regrobust::Rational& r) const noexcept { return r.hash(); }
};
