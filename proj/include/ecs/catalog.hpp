#ifndef ECS_CATALOG_HPP
#define ECS_CATALOG_HPP

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "ecs/systems.hpp"

namespace ecs {

// Profiles found per repeat count, plus the bound the completeness of each
// list is relative to. Every r of the searched range has an entry, possibly
// empty. Lists are sorted in catalog order without duplicates.
struct Catalog {
  u64 bound = 0;
  u64 min_modulus = 3;
  std::map<std::uint32_t, std::vector<ModuliProfile>> results;
  // Profiles whose feasibility could not be decided under the lcm cap.
  std::vector<ModuliProfile> undecided;
  // Residue witnesses for entries of `results`; side data, not serialized and
  // not part of equality.
  std::map<ModuliProfile, CoveringSystem> witnesses;

  std::size_t total() const;
  std::size_t count(std::uint32_t r) const;
  // Sorts every list and drops duplicates.
  void canonicalize();

  friend bool operator==(const Catalog& a, const Catalog& b) {
    return a.bound == b.bound && a.min_modulus == b.min_modulus && a.results == b.results &&
           a.undecided == b.undecided;
  }
};

// Number of reference systems per r for r = 2..32.
const std::map<std::uint32_t, std::size_t>& golden_counts();

// The embedded reference catalog for r = 2..32 (bound 600, smallest modulus 3).
// Validated on first use: per-r counts, density 1, smallest modulus >= 3.
const Catalog& golden();

struct DiffReport {
  std::map<std::uint32_t, std::vector<ModuliProfile>> missing;  // in gold, not in run
  std::map<std::uint32_t, std::vector<ModuliProfile>> extra;    // in run, not in gold
  std::map<std::uint32_t, long long> count_delta;               // run - gold, nonzero only
  // Gold entries for compared r whose top modulus exceeds the run's bound.
  std::size_t out_of_bound = 0;

  bool empty() const { return missing.empty() && extra.empty(); }
};

// Set difference per r, over the r values present in `run`, ignoring gold
// entries whose top modulus lies beyond run.bound.
DiffReport diff(const Catalog& run, const Catalog& gold);
std::string format_diff(const DiffReport& d);

// One line per r: "r(count): d1,...,dj,M; ..." with M the repeated modulus.
std::string format_compact(const Catalog& c);
std::string format_compact_line(std::uint32_t r, const std::vector<ModuliProfile>& profiles);

// Accepts '#' comments, blank lines, arbitrary spacing and `{\bf N}` markup.
// Throws ParseError on malformed lines or when a line's count disagrees with
// its entries.
Catalog parse_compact(std::string_view text, u64 bound, u64 min_modulus);

// {"bound":B,"min_modulus":m,"results":{"r":[{"base":[..],"repeats":r,"top":M}]},"undecided":[..]}
std::string format_json(const Catalog& c);
Catalog parse_json(std::string_view text);

}  // namespace ecs

#endif  // ECS_CATALOG_HPP
