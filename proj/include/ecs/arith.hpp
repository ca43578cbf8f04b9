#ifndef ECS_ARITH_HPP
#define ECS_ARITH_HPP

#include <compare>
#include <concepts>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <type_traits>

#include <boost/multiprecision/cpp_int.hpp>

#include "ecs/errors.hpp"

namespace ecs {

using u64 = std::uint64_t;
using u128 = unsigned __int128;
using BigInt = boost::multiprecision::cpp_int;

// Unsigned integer types with a fixed width; arithmetic on them is checked.
template <class T>
concept FixedWidth = std::is_same_v<T, std::uint32_t> || std::is_same_v<T, u64> ||
                     std::is_same_v<T, u128>;

template <class T>
concept ExactInt = FixedWidth<T> || std::is_same_v<T, BigInt>;

std::string to_string(u128 v);

template <ExactInt T>
T gcd(T a, T b) {
  if (a == 0 && b == 0) throw DomainError("gcd(0, 0) is undefined");
  while (b != 0) {
    T t = a % b;
    a = b;
    b = t;
  }
  return a;
}

template <ExactInt T>
T checked_mul(const T& a, const T& b) {
  if constexpr (FixedWidth<T>) {
    if (a != 0 && b > std::numeric_limits<T>::max() / a)
      throw OverflowError("multiplication overflows " +
                          std::to_string(sizeof(T) * 8) + "-bit backing");
  }
  return a * b;
}

template <ExactInt T>
T checked_add(const T& a, const T& b) {
  if constexpr (FixedWidth<T>) {
    if (a > std::numeric_limits<T>::max() - b)
      throw OverflowError("addition overflows " + std::to_string(sizeof(T) * 8) +
                          "-bit backing");
  }
  return a + b;
}

template <ExactInt T>
T lcm_checked(const T& a, const T& b) {
  if (a == 0 || b == 0) throw DomainError("lcm requires positive arguments");
  return checked_mul<T>(a / gcd<T>(a, b), b);
}

// Exact nonnegative rational, always in lowest terms with a positive
// denominator. Fixed-width backings throw OverflowError instead of wrapping.
template <ExactInt Int>
class BasicFraction {
 public:
  BasicFraction() : num_(0), den_(1) {}
  explicit BasicFraction(Int num, Int den = 1) : num_(std::move(num)), den_(std::move(den)) {
    if (den_ == 0) throw DomainError("fraction with zero denominator");
    reduce();
  }

  static BasicFraction unit(const Int& m) { return BasicFraction(Int(1), m); }

  const Int& num() const { return num_; }
  const Int& den() const { return den_; }
  bool is_zero() const { return num_ == 0; }
  bool is_one() const { return num_ == 1 && den_ == 1; }

  BasicFraction operator+(const BasicFraction& o) const {
    const Int g = gcd<Int>(den_, o.den_);
    const Int lhs = checked_mul<Int>(num_, o.den_ / g);
    const Int rhs = checked_mul<Int>(o.num_, den_ / g);
    return BasicFraction(checked_add<Int>(lhs, rhs), checked_mul<Int>(den_ / g, o.den_));
  }
  BasicFraction& operator+=(const BasicFraction& o) { return *this = *this + o; }

  // Throws UnderflowError when o > *this.
  BasicFraction operator-(const BasicFraction& o) const {
    const Int g = gcd<Int>(den_, o.den_);
    const Int lhs = checked_mul<Int>(num_, o.den_ / g);
    const Int rhs = checked_mul<Int>(o.num_, den_ / g);
    if (lhs < rhs) throw UnderflowError(to_string() + " - " + o.to_string() + " is negative");
    return BasicFraction(Int(lhs - rhs), checked_mul<Int>(den_ / g, o.den_));
  }

  friend bool operator==(const BasicFraction&, const BasicFraction&) = default;

  friend std::strong_ordering operator<=>(const BasicFraction& a, const BasicFraction& b) {
    const Int g = gcd<Int>(a.den_, b.den_);
    const Int lhs = checked_mul<Int>(a.num_, b.den_ / g);
    const Int rhs = checked_mul<Int>(b.num_, a.den_ / g);
    if (lhs < rhs) return std::strong_ordering::less;
    if (rhs < lhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  long double to_long_double() const {
    return static_cast<long double>(num_) / static_cast<long double>(den_);
  }

  // "n/d", or "n" when the denominator is 1.
  std::string to_string() const {
    if constexpr (std::is_same_v<Int, BigInt>) {
      return den_ == 1 ? num_.str() : num_.str() + "/" + den_.str();
    } else {
      const std::string n = ecs::to_string(u128(num_));
      return den_ == 1 ? n : n + "/" + ecs::to_string(u128(den_));
    }
  }

 private:
  void reduce() {
    if (num_ == 0) {
      den_ = 1;
      return;
    }
    const Int g = gcd<Int>(num_, den_);
    num_ /= g;
    den_ /= g;
  }

  Int num_;
  Int den_;
};

using Fraction = BasicFraction<u128>;
using BigFraction = BasicFraction<BigInt>;

// f - 1/m, exact. Throws UnderflowError when f < 1/m.
Fraction frac_sub_unit(const Fraction& f, u128 m);

// Non-throwing form for search inner loops; nullopt when f < 1/m.
std::optional<Fraction> try_sub_unit(const Fraction& f, u128 m);

u64 smallest_prime_factor(u64 m);

}  // namespace ecs

#endif  // ECS_ARITH_HPP
