// Independent reference computations shared by the tests. Nothing here calls
// into the search code.
#ifndef ECS_TESTS_ORACLES_HPP
#define ECS_TESTS_ORACLES_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <vector>

namespace oracle {

using u64 = std::uint64_t;

inline std::vector<u64> divisors(u64 n) {
  std::vector<u64> out;
  for (u64 d = 1; d <= n; ++d)
    if (n % d == 0) out.push_back(d);
  return out;
}

inline u64 lcm_all(const std::vector<u64>& v) {
  u64 l = 1;
  for (u64 x : v) l = std::lcm(l, x);
  return l;
}

// Sum of 1/m over the multiset equals 1, via integer units of the lcm.
inline bool density_one(const std::vector<u64>& moduli) {
  const u64 L = lcm_all(moduli);
  u64 units = 0;
  for (u64 m : moduli) units += L / m;
  return units == L;
}

// Every point of Z/L hit exactly once by the classes (a_i mod m_i).
inline bool exact_cover(const std::vector<std::pair<u64, u64>>& classes) {
  std::vector<u64> moduli;
  for (auto [a, m] : classes) moduli.push_back(m);
  const u64 L = lcm_all(moduli);
  std::vector<int> hits(L, 0);
  for (auto [a, m] : classes)
    for (u64 p = a % m; p < L; p += m) ++hits[p];
  return std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; });
}

// Base sequences for (r, M): subsets of [lo, M) with unit-fraction sum
// 1 - r/M, by brute force over all subsets. When divisors_only is set the
// subset is drawn from the divisors of M in that range. Lexicographic order.
inline std::map<std::uint32_t, std::vector<std::vector<u64>>> subset_profiles(u64 M, u64 lo,
                                                                              bool divisors_only) {
  std::vector<u64> pool;
  for (u64 d = lo; d < M; ++d)
    if (!divisors_only || M % d == 0) pool.push_back(d);
  std::vector<u64> all = pool;
  all.push_back(M);
  const u64 L = lcm_all(all);
  std::map<std::uint32_t, std::vector<std::vector<u64>>> out;
  const std::size_t n = pool.size();
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    u64 units = 0;
    std::vector<u64> chosen;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1) {
        units += L / pool[i];
        chosen.push_back(pool[i]);
      }
    if (units >= L) continue;
    const u64 rest = L - units;  // must equal r * (L / M)
    if (rest % (L / M) != 0) continue;
    const u64 r = rest / (L / M);
    if (r < 2) continue;
    out[static_cast<std::uint32_t>(r)].push_back(chosen);
  }
  for (auto& [r, list] : out) std::sort(list.begin(), list.end());
  return out;
}

// Random density-1 multiset of divisors (>= 2) of a random divisor of `root`,
// at most max_size elements.
inline std::vector<u64> random_density_one(std::mt19937_64& rng, u64 root, std::size_t max_size) {
  std::vector<u64> roots;
  for (u64 d : divisors(root))
    if (d >= 2) roots.push_back(d);
  for (;;) {
    const u64 L = roots[std::uniform_int_distribution<std::size_t>(0, roots.size() - 1)(rng)];
    std::vector<u64> ds;
    for (u64 d : divisors(L))
      if (d >= 2) ds.push_back(d);
    std::vector<u64> out;
    u64 remaining = L;
    while (remaining > 0 && out.size() <= max_size) {
      std::vector<u64> ok;
      for (u64 d : ds)
        if (L / d <= remaining) ok.push_back(d);
      const u64 d = ok[std::uniform_int_distribution<std::size_t>(0, ok.size() - 1)(rng)];
      out.push_back(d);
      remaining -= L / d;
    }
    if (remaining == 0 && out.size() <= max_size && out.size() >= 2) {
      std::sort(out.begin(), out.end());
      return out;
    }
  }
}

// base moduli followed by as many copies of top as density 1 needs
inline std::vector<u64> fill(std::vector<u64> base, u64 top) {
  u64 units = 0;
  for (u64 m : base) units += top / m;
  base.insert(base.end(), top - units, top);
  return base;
}

// Hand-picked density-1 multisets, many infeasible (coprime moduli that must
// meet, or too many classes of one modulus for its residues).
inline std::vector<std::vector<u64>> adversarial() {
  return {
    {2, 3, 6},           fill({2, 3}, 12),     fill({3, 4, 6}, 12), fill({5, 7}, 35),
    fill({4, 6}, 12),    {2, 4, 8, 8},         {3, 3, 3},           {2, 2},
    fill({4, 6, 8, 12}, 24),                   fill({6, 10, 15}, 30),
    fill({2, 5}, 10),    {3, 4, 4, 6},         fill({4, 4, 6}, 12), {4, 4, 6, 6, 6},
    fill({3, 8, 12}, 24),                      fill({2, 9}, 18),
    fill({8, 12, 12, 12}, 24),                 fill({3, 4, 5}, 60), fill({6, 9, 12}, 36),
    fill({4, 10, 15}, 60),                     fill({2, 7, 14}, 28),
  };
}

}  // namespace oracle

#endif  // ECS_TESTS_ORACLES_HPP
