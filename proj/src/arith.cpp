#include "ecs/arith.hpp"

#include <algorithm>

namespace ecs {

std::string to_string(u128 v) {
  if (v == 0) return "0";
  std::string out;
  while (v != 0) {
    out.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

std::optional<Fraction> try_sub_unit(const Fraction& f, u128 m) {
  if (m == 0) throw DomainError("unit fraction 1/0");
  // f - 1/m = (num * m/g - den/g) / (den * m/g), g = gcd(den, m)
  const u128 g = gcd<u128>(f.den(), m);
  const u128 lhs = checked_mul<u128>(f.num(), m / g);
  const u128 rhs = f.den() / g;
  if (lhs < rhs) return std::nullopt;
  return Fraction(lhs - rhs, checked_mul<u128>(f.den(), m / g));
}

Fraction frac_sub_unit(const Fraction& f, u128 m) {
  auto out = try_sub_unit(f, m);
  if (!out) throw UnderflowError(f.to_string() + " < 1/" + to_string(m));
  return *out;
}

u64 smallest_prime_factor(u64 m) {
  if (m < 2) throw DomainError("smallest_prime_factor requires m >= 2");
  if (m % 2 == 0) return 2;
  for (u64 p = 3; p <= m / p; p += 2)
    if (m % p == 0) return p;
  return m;
}

}  // namespace ecs
