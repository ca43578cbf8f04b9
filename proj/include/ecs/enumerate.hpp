#ifndef ECS_ENUMERATE_HPP
#define ECS_ENUMERATE_HPP

#include <compare>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "ecs/catalog.hpp"
#include "ecs/systems.hpp"

namespace ecs {

struct SearchConfig {
  std::uint32_t r_min = 2;
  std::uint32_t r_max = 32;
  u64 max_modulus = 450;
  u64 min_modulus = 3;
  u64 lcm_cap = 10'000'000;
  // Skip top moduli whose smallest prime factor exceeds r (Newman-Znam bound).
  bool enable_nz_prune = false;
  // Only try base moduli dividing the top modulus. In an exact cover whose
  // moduli are distinct except the largest M, every modulus divides M: a
  // largest base modulus not dividing M would be the only modulus divisible by
  // itself, and the pole of sum z^a/(1 - z^m) at a primitive root of that
  // order could not cancel.
  bool divisor_prune = true;
  unsigned jobs = 1;
  std::optional<std::filesystem::path> checkpoint_path;
  // Stop after this many newly processed cells and throw SearchInterrupted.
  // Zero means run to completion. Used to exercise checkpoint resume.
  std::size_t stop_after_cells = 0;

  // Throws DomainError on an inconsistent configuration.
  void validate() const;
};

class SearchInterrupted : public Error {
 public:
  using Error::Error;
};

// One (r, M) pair of the search grid.
struct WorkCell {
  std::uint32_t r = 0;
  u64 top = 0;

  friend bool operator==(const WorkCell&, const WorkCell&) = default;
  friend auto operator<=>(const WorkCell&, const WorkCell&) = default;
};

// Every valid cell of cfg: r ascending, then M ascending.
std::vector<WorkCell> grid_cells(const SearchConfig& cfg);

// Base sequences d1 < ... < dj < M (j >= 1) with 1/d1 + ... + 1/dj = 1 - r/M,
// in lexicographic order. Candidate bases are restricted to divisors of M
// when cfg.divisor_prune is set.
std::vector<ModuliProfile> enumerate_profiles(const WorkCell& cell, const SearchConfig& cfg);

enum class BranchRule {
  // Cover the smallest uncovered integer next.
  smallest_uncovered,
  // Cover the uncovered point with the fewest admissible classes next,
  // smallest such point on ties.
  fewest_options,
  // When the largest modulus equals the lcm its classes are single points, so
  // the multiset is feasible iff the other moduli admit pairwise disjoint
  // residues. Assign those most-constrained first with forward checking and
  // fill the leftover points with the largest modulus. Falls back to
  // fewest_options when the largest modulus is not the lcm.
  base_first,
};

enum class Feasibility { feasible, infeasible, undecided };

struct WitnessResult {
  Feasibility status = Feasibility::infeasible;
  std::optional<CoveringSystem> witness;
  std::uint64_t nodes = 0;
};

// Backtracking residue assignment for a density-1 multiset of moduli. Moduli
// values are tried in ascending order, so the witness returned is the first
// in a fixed branch order. Undecided only when the gap scan would have to pass
// lcm_cap. Throws DomainError when the density is not 1.
WitnessResult residue_witness(std::span<const u64> moduli, u64 lcm_cap,
                              BranchRule rule = BranchRule::smallest_uncovered);

// Exhaustive residue enumeration (identical moduli take increasing residues)
// checked by counting over Z/L. Throws CapExceeded when the lcm exceeds
// lcm_cap or the enumeration exceeds node_cap. Never returns undecided.
WitnessResult witness_bruteforce(std::span<const u64> moduli, u64 lcm_cap,
                                 std::uint64_t node_cap = 200'000'000);

struct CellResult {
  WorkCell cell;
  std::vector<ModuliProfile> profiles;
  std::vector<CoveringSystem> witnesses;  // parallel to profiles
  std::vector<ModuliProfile> undecided;
};

// enumerate_profiles followed by a feasibility decision for each profile.
CellResult process_cell(const WorkCell& cell, const SearchConfig& cfg);

// Cells split into n lists, round-robin over the grid ordered by estimated
// cost (candidate base count) and M, both descending.
std::vector<std::vector<WorkCell>> partition_cells(const SearchConfig& cfg, std::size_t n);

// Full pipeline. The result depends only on the search parameters of cfg,
// not on jobs or on how often a checkpointed run was interrupted.
Catalog run_search(const SearchConfig& cfg);

// Assembles a catalog from per-cell results in any order.
Catalog assemble_catalog(const SearchConfig& cfg, std::span<const CellResult> cells);

}  // namespace ecs

#endif  // ECS_ENUMERATE_HPP
