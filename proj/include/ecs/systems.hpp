#ifndef ECS_SYSTEMS_HPP
#define ECS_SYSTEMS_HPP

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ecs/arith.hpp"

namespace ecs {

// The arithmetic progression a (mod m), residue kept in [0, m).
class CongruenceClass {
 public:
  CongruenceClass(u64 residue, u64 modulus);
  static CongruenceClass from_signed(std::int64_t residue, u64 modulus);

  u64 residue() const { return residue_; }
  u64 modulus() const { return modulus_; }
  bool contains(u64 x) const { return x % modulus_ == residue_; }

  friend bool operator==(const CongruenceClass&, const CongruenceClass&) = default;
  // Canonical order: modulus first, then residue.
  friend std::strong_ordering operator<=>(const CongruenceClass& a, const CongruenceClass& b) {
    if (auto c = a.modulus_ <=> b.modulus_; c != 0) return c;
    return a.residue_ <=> b.residue_;
  }

 private:
  u64 residue_;
  u64 modulus_;
};

// True iff the two progressions share no integer.
bool classes_disjoint(const CongruenceClass& c1, const CongruenceClass& c2);

// A candidate exact cover: a nonempty set of classes held in canonical order.
class CoveringSystem {
 public:
  explicit CoveringSystem(std::vector<CongruenceClass> classes);

  std::span<const CongruenceClass> classes() const { return classes_; }
  std::size_t size() const { return classes_.size(); }
  const CongruenceClass& operator[](std::size_t i) const { return classes_[i]; }

  // Moduli in ascending order, with multiplicity.
  std::vector<u64> moduli() const;
  u64 max_modulus() const { return classes_.back().modulus(); }

  friend bool operator==(const CoveringSystem&, const CoveringSystem&) = default;

 private:
  std::vector<CongruenceClass> classes_;
};

// Moduli-only fingerprint: distinct base moduli below a top modulus that
// appears `repeats` times. Density of the multiset is exactly 1.
class ModuliProfile {
 public:
  ModuliProfile(std::vector<u64> base, u64 top, std::uint32_t repeats);

  const std::vector<u64>& base() const { return base_; }
  u64 top() const { return top_; }
  std::uint32_t repeats() const { return repeats_; }

  std::size_t distinct_count() const { return base_.size() + 1; }
  // Base followed by top, each once: the sequence printed in tables.
  std::vector<u64> distinct_moduli() const;
  // Full multiset, ascending.
  std::vector<u64> moduli() const;

  friend bool operator==(const ModuliProfile&, const ModuliProfile&) = default;
  // Catalog order: distinct-moduli count, then the distinct sequence, then repeats.
  friend std::strong_ordering operator<=>(const ModuliProfile& a, const ModuliProfile& b);

 private:
  std::vector<u64> base_;
  u64 top_;
  std::uint32_t repeats_;
};

struct VerifyReport {
  bool valid = false;
  BigFraction density;
  // Least (i, j), i < j, of class indices that intersect.
  std::optional<std::pair<std::size_t, std::size_t>> first_conflict;
  // Smallest nonnegative integer lying in both conflicting classes.
  std::optional<BigInt> conflict_point;
  // Smallest uncovered nonnegative integer. verify() looks for one only in an
  // invalid system and only below kGapScanLimit.
  std::optional<u64> first_gap;
};

BigFraction density(const CoveringSystem& s);

inline constexpr u64 kGapScanLimit = 1'000'000;

// Pairwise disjointness plus density 1; independent of the lcm of the moduli.
VerifyReport verify(const CoveringSystem& s);

// Hit-count table over Z/L, L = lcm of the moduli. Throws CapExceeded when
// L > lcm_cap.
VerifyReport verify_bruteforce(const CoveringSystem& s, u64 lcm_cap);

// 0(2), 1(4), 3(8), ..., 2^(r-1)-1 (2^r), 2^r-1 (2^r).
CoveringSystem trivial_power_system(unsigned r);

// 0 (mod 2) together with 2a+1 (mod 2m) for every class a (mod m) of s.
// Throws DomainError unless s is a valid exact cover.
CoveringSystem double_system(const CoveringSystem& s);

// Throws NotSingleRepeated unless the moduli are distinct except the largest,
// which occurs at least twice; DomainError if the density is not 1.
ModuliProfile profile_of(const CoveringSystem& s);
ModuliProfile profile_of_moduli(std::vector<u64> moduli);

BigFraction multiset_density(std::span<const u64> moduli);

// `A mod M` terms separated by commas, e.g. "0 mod 3, 1 mod 6".
CoveringSystem parse_system(std::string_view text);
std::string format_system(const CoveringSystem& s);

// Whitespace-separated moduli, the last optionally suffixed `^r`, e.g. "3 6^4".
std::vector<u64> parse_multiset(std::string_view text);
std::string format_multiset(std::span<const u64> moduli);

}  // namespace ecs

#endif  // ECS_SYSTEMS_HPP
