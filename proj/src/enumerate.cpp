#include "ecs/enumerate.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <limits>
#include <set>
#include <stdexcept>
#include <thread>

#include "ecs/checkpoint.hpp"

namespace ecs {

void SearchConfig::validate() const {
  if (r_min < 2) throw DomainError("r_min must be at least 2");
  if (r_min > r_max) throw DomainError("r_min exceeds r_max");
  if (min_modulus < 2) throw DomainError("min_modulus must be at least 2");
  if (max_modulus < min_modulus) throw DomainError("max_modulus is below min_modulus");
  if (max_modulus > (u64{1} << 32)) throw DomainError("max_modulus too large");
  if (lcm_cap == 0) throw DomainError("lcm_cap must be positive");
  if (jobs == 0) throw DomainError("jobs must be positive");
}

std::vector<WorkCell> grid_cells(const SearchConfig& cfg) {
  std::vector<WorkCell> cells;
  for (std::uint32_t r = cfg.r_min; r <= cfg.r_max; ++r)
    for (u64 m = std::max<u64>(cfg.min_modulus, r + 1); m <= cfg.max_modulus; ++m)
      cells.push_back({r, m});
  return cells;
}

namespace {

std::vector<u64> candidate_bases(u64 top, const SearchConfig& cfg) {
  std::vector<u64> out;
  for (u64 d = cfg.min_modulus; d < top; ++d)
    if (!cfg.divisor_prune || top % d == 0) out.push_back(d);
  return out;
}

// Distinct unit fractions 1/d, d drawn from an ascending candidate list,
// summing exactly to a target deficit.
class EgyptianSearch {
 public:
  EgyptianSearch(const WorkCell& cell, std::vector<u64> candidates)
      : cell_(cell), cands_(std::move(candidates)), tail_(cands_.size() + 1, 0.0L) {
    for (std::size_t i = cands_.size(); i-- > 0;)
      tail_[i] = tail_[i + 1] + 1.0L / static_cast<long double>(cands_[i]);
  }

  std::vector<ModuliProfile> run(const Fraction& target) {
    if (!cands_.empty()) dfs(0, target);
    return std::move(out_);
  }

 private:
  void dfs(std::size_t i, const Fraction& deficit) {
    if (deficit.is_zero()) {
      if (!chosen_.empty()) out_.emplace_back(chosen_, cell_.top, cell_.r);
      return;
    }
    if (i == cands_.size()) return;
    // No unit fraction below 1/(largest candidate) is available.
    if (deficit < Fraction::unit(cands_.back())) return;

    // 1/c <= deficit  <=>  c >= den/num
    const u128 lo = (deficit.den() + deficit.num() - 1) / deficit.num();
    auto first = std::lower_bound(cands_.begin() + static_cast<std::ptrdiff_t>(i), cands_.end(),
                                  lo, [](u64 c, u128 v) { return u128(c) < v; });
    const long double need = deficit.to_long_double();
    for (auto j = static_cast<std::size_t>(first - cands_.begin()); j < cands_.size(); ++j) {
      // Harmonic tail: the remaining candidates cannot reach the deficit.
      // The slack keeps the floating bound conservative.
      if (need > tail_[j] * (1.0L + 1e-12L)) break;
      auto next = try_sub_unit(deficit, cands_[j]);
      if (!next) continue;
      chosen_.push_back(cands_[j]);
      dfs(j + 1, *next);
      chosen_.pop_back();
    }
  }

  WorkCell cell_;
  std::vector<u64> cands_;
  std::vector<long double> tail_;
  std::vector<u64> chosen_;
  std::vector<ModuliProfile> out_;
};

struct MultisetShape {
  std::vector<u64> values;       // distinct, ascending
  std::vector<std::size_t> counts;
  std::size_t total = 0;
};

MultisetShape shape_of(std::span<const u64> moduli) {
  std::vector<u64> sorted(moduli.begin(), moduli.end());
  std::sort(sorted.begin(), sorted.end());
  MultisetShape s;
  for (u64 m : sorted) {
    if (m == 0) throw DomainError("modulus must be positive");
    if (s.values.empty() || s.values.back() != m) {
      s.values.push_back(m);
      s.counts.push_back(0);
    }
    ++s.counts.back();
  }
  s.total = sorted.size();
  return s;
}

// lcm of the values, or nullopt when it does not fit in 64 bits.
std::optional<u64> lcm_of(const std::vector<u64>& values) {
  u64 l = 1;
  try {
    for (u64 v : values) l = lcm_checked<u64>(l, v);
  } catch (const OverflowError&) {
    return std::nullopt;
  }
  return l;
}

CoveringSystem system_from(const std::vector<std::pair<u64, u64>>& chosen) {
  std::vector<CongruenceClass> classes;
  classes.reserve(chosen.size());
  for (auto [a, m] : chosen) classes.emplace_back(a, m);
  return CoveringSystem(std::move(classes));
}

// Backtracking over a materialized table of Z/L. A class a (mod v) is free
// when none of its points is covered, which is exactly disjointness from
// every assigned class.
class TableSearch {
 public:
  TableSearch(MultisetShape shape, u64 lcm, BranchRule rule)
      : s_(std::move(shape)), lcm_(lcm), rule_(rule), covered_(lcm, 0) {
    for (u64 v : s_.values) {
      hits_.emplace_back(v, 0);
      free_.push_back(v);
    }
  }

  WitnessResult run() {
    WitnessResult result;
    const bool found = dfs(0, s_.total);
    result.nodes = nodes_;
    if (found) {
      result.status = Feasibility::feasible;
      result.witness = system_from(chosen_);
    } else {
      result.status = Feasibility::infeasible;
    }
    return result;
  }

 private:
  static constexpr u64 npos = std::numeric_limits<u64>::max();

  bool dfs(u64 from, std::size_t remaining) {
    ++nodes_;
    if (remaining == 0) return true;
    // Assigned density is below 1, so an uncovered point exists.
    u64 x = from;
    while (covered_[x]) ++x;
    for (std::size_t k = 0; k < s_.values.size(); ++k)
      if (s_.counts[k] > free_[k]) return false;

    u64 target = x;
    if (rule_ == BranchRule::fewest_options) {
      target = fewest_options_point(x);
      if (target == npos) return false;
    }
    for (std::size_t k = 0; k < s_.values.size(); ++k) {
      if (s_.counts[k] == 0) continue;
      const u64 a = target % s_.values[k];
      if (hits_[k][a] != 0) continue;
      place(k, a, +1);
      --s_.counts[k];
      chosen_.emplace_back(a, s_.values[k]);
      if (dfs(x, remaining - 1)) return true;
      chosen_.pop_back();
      ++s_.counts[k];
      place(k, a, -1);
    }
    return false;
  }

  std::size_t options_at(u64 y, std::size_t limit) const {
    std::size_t n = 0;
    for (std::size_t k = 0; k < s_.values.size() && n < limit; ++k)
      if (s_.counts[k] != 0 && hits_[k][y % s_.values[k]] == 0) ++n;
    return n;
  }

  // Uncovered point with the fewest free classes; npos if some point has none.
  u64 fewest_options_point(u64 first_uncovered) const {
    u64 best = npos;
    std::size_t best_n = std::numeric_limits<std::size_t>::max();
    for (u64 y = first_uncovered; y < lcm_; ++y) {
      if (covered_[y]) continue;
      const std::size_t n = options_at(y, best_n);
      if (n < best_n) {
        best = y;
        best_n = n;
        if (n <= 1) break;
      }
    }
    return best_n == 0 ? npos : best;
  }

  void place(std::size_t k, u64 a, int dir) {
    const u64 v = s_.values[k];
    for (u64 p = a; p < lcm_; p += v) {
      covered_[p] = dir > 0 ? 1 : 0;
      for (std::size_t k2 = 0; k2 < s_.values.size(); ++k2) {
        auto& h = hits_[k2][p % s_.values[k2]];
        if (dir > 0) {
          if (h++ == 0) --free_[k2];
        } else {
          if (--h == 0) ++free_[k2];
        }
      }
    }
  }

  MultisetShape s_;
  u64 lcm_;
  BranchRule rule_;
  std::vector<std::uint8_t> covered_;
  std::vector<std::vector<std::uint32_t>> hits_;  // covered points per class
  std::vector<std::size_t> free_;                 // classes with no covered point
  std::vector<std::pair<u64, u64>> chosen_;
  std::uint64_t nodes_ = 0;
};

// Largest modulus equal to the lcm L: its classes are single points of Z/L,
// so only the remaining moduli need residues, pairwise disjoint. Variables are
// chosen by smallest remaining domain; assigning a (mod d) removes from every
// other domain the residues congruent to a modulo the gcd. Translating a
// solution keeps it a solution, so the first variable assigned is pinned to 0.
class BaseFirstSearch {
 public:
  BaseFirstSearch(const MultisetShape& s, u64 lcm) : lcm_(lcm), top_(s.values.back()) {
    for (std::size_t k = 0; k + 1 < s.values.size(); ++k)
      for (std::size_t c = 0; c < s.counts[k]; ++c) mods_.push_back(s.values[k]);
    top_count_ = s.counts.back();
    const std::size_t n = mods_.size();
    allowed_.resize(n);
    size_.resize(n);
    assigned_.assign(n, npos);
    gcd_.assign(n * n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      allowed_[i].assign(mods_[i], 1);
      size_[i] = mods_[i];
      for (std::size_t j = 0; j < n; ++j) gcd_[i * n + j] = gcd<u64>(mods_[i], mods_[j]);
    }
  }

  WitnessResult run() {
    WitnessResult result;
    const bool found = dfs(0);
    result.nodes = nodes_;
    result.status = found ? Feasibility::feasible : Feasibility::infeasible;
    if (found) result.witness = build_witness();
    return result;
  }

 private:
  static constexpr u64 npos = std::numeric_limits<u64>::max();

  bool dfs(std::size_t depth) {
    ++nodes_;
    const std::size_t n = mods_.size();
    if (depth == n) return true;
    // most constrained variable; larger modulus first on ties
    std::size_t var = npos;
    for (std::size_t i = 0; i < n; ++i) {
      if (assigned_[i] != npos) continue;
      if (var == npos || size_[i] < size_[var] ||
          (size_[i] == size_[var] && mods_[i] > mods_[var]))
        var = i;
    }
    if (size_[var] == 0) return false;
    const u64 limit = depth == 0 ? 1 : mods_[var];
    for (u64 a = 0; a < limit; ++a) {
      if (!allowed_[var][a]) continue;
      assigned_[var] = a;
      const std::size_t mark = trail_.size();
      bool wiped = false;
      for (std::size_t k = 0; k < n; ++k) {
        if (assigned_[k] != npos) continue;
        const u64 g = gcd_[var * n + k];
        for (u64 b = a % g; b < mods_[k]; b += g) {
          if (allowed_[k][b]) {
            allowed_[k][b] = 0;
            --size_[k];
            trail_.emplace_back(k, b);
          }
        }
        if (size_[k] == 0) {
          wiped = true;
          break;
        }
      }
      if (!wiped && dfs(depth + 1)) return true;
      while (trail_.size() > mark) {
        auto [k, b] = trail_.back();
        trail_.pop_back();
        allowed_[k][b] = 1;
        ++size_[k];
      }
      assigned_[var] = npos;
    }
    return false;
  }

  CoveringSystem build_witness() const {
    std::vector<std::uint8_t> covered(lcm_, 0);
    std::vector<std::pair<u64, u64>> chosen;
    for (std::size_t i = 0; i < mods_.size(); ++i) {
      chosen.emplace_back(assigned_[i], mods_[i]);
      for (u64 p = assigned_[i]; p < lcm_; p += mods_[i]) covered[p] = 1;
    }
    for (u64 x = 0; x < lcm_; ++x)
      if (!covered[x]) chosen.emplace_back(x, top_);
    if (chosen.size() != mods_.size() + top_count_)
      throw std::logic_error("leftover points do not match the largest modulus count");
    return system_from(chosen);
  }

  u64 lcm_;
  u64 top_;
  std::size_t top_count_ = 0;
  std::vector<u64> mods_;
  std::vector<std::vector<std::uint8_t>> allowed_;
  std::vector<u64> size_;
  std::vector<u64> assigned_;
  std::vector<u64> gcd_;
  std::vector<std::pair<std::size_t, u64>> trail_;
  std::uint64_t nodes_ = 0;
};

// Smallest-uncovered backtracking without a table, for moduli whose lcm is
// beyond the cap. The gap scan tests membership class by class and gives up
// (undecided) once it reaches the cap.
class ScanSearch {
 public:
  ScanSearch(MultisetShape shape, u64 cap) : s_(std::move(shape)), cap_(cap) {}

  WitnessResult run() {
    WitnessResult result;
    const Outcome o = dfs(0, s_.total);
    result.nodes = nodes_;
    if (o == Outcome::found) {
      result.status = Feasibility::feasible;
      std::vector<std::pair<u64, u64>> chosen;
      for (const auto& c : assigned_) chosen.emplace_back(c.residue(), c.modulus());
      result.witness = system_from(chosen);
    } else {
      result.status = saw_undecided_ ? Feasibility::undecided : Feasibility::infeasible;
    }
    return result;
  }

 private:
  enum class Outcome { found, exhausted, gave_up };

  bool is_covered(u64 y) const {
    for (const auto& c : assigned_)
      if (c.contains(y)) return true;
    return false;
  }

  Outcome dfs(u64 from, std::size_t remaining) {
    ++nodes_;
    if (remaining == 0) return Outcome::found;
    u64 x = from;
    while (is_covered(x)) {
      if (++x >= cap_) {
        saw_undecided_ = true;
        return Outcome::gave_up;
      }
    }
    for (std::size_t k = 0; k < s_.values.size(); ++k) {
      if (s_.counts[k] == 0) continue;
      const CongruenceClass cls(x % s_.values[k], s_.values[k]);
      const bool ok = std::all_of(assigned_.begin(), assigned_.end(),
                                  [&](const auto& c) { return classes_disjoint(c, cls); });
      if (!ok) continue;
      assigned_.push_back(cls);
      --s_.counts[k];
      if (dfs(x, remaining - 1) == Outcome::found) return Outcome::found;
      ++s_.counts[k];
      assigned_.pop_back();
    }
    return Outcome::exhausted;
  }

  MultisetShape s_;
  u64 cap_;
  std::vector<CongruenceClass> assigned_;
  bool saw_undecided_ = false;
  std::uint64_t nodes_ = 0;
};

}  // namespace

std::vector<ModuliProfile> enumerate_profiles(const WorkCell& cell, const SearchConfig& cfg) {
  if (cell.r < 2 || cell.top <= cell.r) return {};
  if (cfg.enable_nz_prune && smallest_prime_factor(cell.top) > cell.r) return {};
  EgyptianSearch search(cell, candidate_bases(cell.top, cfg));
  return search.run(Fraction(cell.top - cell.r, cell.top));
}

WitnessResult residue_witness(std::span<const u64> moduli, u64 lcm_cap, BranchRule rule) {
  if (moduli.empty()) throw DomainError("empty moduli multiset");
  MultisetShape shape = shape_of(moduli);
  const BigFraction d = multiset_density(moduli);
  if (!d.is_one()) throw DomainError("moduli density is " + d.to_string() + ", not 1");

  const auto lcm = lcm_of(shape.values);
  if (lcm && *lcm <= lcm_cap) {
    if (rule == BranchRule::base_first) {
      if (shape.values.back() == *lcm) return BaseFirstSearch(shape, *lcm).run();
      rule = BranchRule::fewest_options;
    }
    return TableSearch(std::move(shape), *lcm, rule).run();
  }
  if (rule == BranchRule::smallest_uncovered) return ScanSearch(std::move(shape), lcm_cap).run();
  WitnessResult undecided;
  undecided.status = Feasibility::undecided;
  return undecided;
}

WitnessResult witness_bruteforce(std::span<const u64> moduli, u64 lcm_cap, std::uint64_t node_cap) {
  if (moduli.empty()) throw DomainError("empty moduli multiset");
  const MultisetShape s = shape_of(moduli);
  const auto lcm = lcm_of(s.values);
  if (!lcm || *lcm > lcm_cap) throw CapExceeded("lcm of moduli exceeds cap");
  const u64 L = *lcm;

  std::vector<std::uint32_t> hits(L, 0);
  std::vector<std::pair<u64, u64>> chosen;
  std::uint64_t nodes = 0;

  auto mark = [&](u64 a, u64 v, int dir) {
    for (u64 p = a; p < L; p += v) hits[p] += dir;
  };
  auto fits = [&](u64 a, u64 v) {
    for (u64 p = a; p < L; p += v)
      if (hits[p] != 0) return false;
    return true;
  };

  // Value index k, residues for value k chosen in increasing order from `start`.
  auto dfs = [&](auto&& self, std::size_t k, u64 start, std::size_t placed) -> bool {
    if (++nodes > node_cap) throw CapExceeded("brute-force node budget exhausted");
    if (k == s.values.size())
      return std::all_of(hits.begin(), hits.end(), [](std::uint32_t h) { return h == 1; });
    if (placed == s.counts[k]) return self(self, k + 1, 0, 0);
    const u64 v = s.values[k];
    const std::size_t still = s.counts[k] - placed;
    for (u64 a = start; a + still <= v; ++a) {
      if (!fits(a, v)) continue;
      mark(a, v, +1);
      chosen.emplace_back(a, v);
      if (self(self, k, a + 1, placed + 1)) return true;
      chosen.pop_back();
      mark(a, v, -1);
    }
    return false;
  };

  WitnessResult result;
  const bool found = dfs(dfs, 0, 0, 0);
  result.nodes = nodes;
  result.status = found ? Feasibility::feasible : Feasibility::infeasible;
  if (found) result.witness = system_from(chosen);
  return result;
}

CellResult process_cell(const WorkCell& cell, const SearchConfig& cfg) {
  CellResult out;
  out.cell = cell;
  for (auto& profile : enumerate_profiles(cell, cfg)) {
    const auto moduli = profile.moduli();
    auto w = residue_witness(moduli, cfg.lcm_cap, BranchRule::base_first);
    switch (w.status) {
      case Feasibility::feasible: {
        if (!verify(*w.witness).valid || !(profile_of(*w.witness) == profile))
          throw std::logic_error("residue search produced an unsound witness for " +
                                 format_multiset(moduli));
        out.profiles.push_back(std::move(profile));
        out.witnesses.push_back(std::move(*w.witness));
        break;
      }
      case Feasibility::undecided:
        out.undecided.push_back(std::move(profile));
        break;
      case Feasibility::infeasible:
        break;
    }
  }
  return out;
}

namespace {

std::vector<std::vector<WorkCell>> partition_list(std::vector<WorkCell> cells,
                                                  const SearchConfig& cfg, std::size_t n) {
  if (n == 0) throw DomainError("partition count must be positive");
  auto cost = [&](const WorkCell& c) {
    if (!cfg.divisor_prune) return c.top - cfg.min_modulus;
    u64 k = 0;
    for (u64 d = cfg.min_modulus; d < c.top; ++d)
      if (c.top % d == 0) ++k;
    return k;
  };
  std::vector<std::pair<u64, WorkCell>> keyed;
  keyed.reserve(cells.size());
  for (const auto& c : cells) keyed.emplace_back(cost(c), c);
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    if (a.second.top != b.second.top) return a.second.top > b.second.top;
    return a.second.r < b.second.r;
  });
  std::vector<std::vector<WorkCell>> parts(n);
  for (std::size_t i = 0; i < keyed.size(); ++i) parts[i % n].push_back(keyed[i].second);
  return parts;
}

CellResult restore(const CheckpointRecord& rec, const SearchConfig& cfg) {
  CellResult out;
  out.cell = rec.cell;
  try {
    for (const auto& base : rec.profiles) {
      ModuliProfile p(base, rec.cell.top, rec.cell.r);
      auto w = residue_witness(p.moduli(), cfg.lcm_cap, BranchRule::base_first);
      if (w.status != Feasibility::feasible)
        throw CheckpointError("checkpointed profile " + format_multiset(p.moduli()) +
                              " has no witness");
      out.profiles.push_back(std::move(p));
      out.witnesses.push_back(std::move(*w.witness));
    }
    for (const auto& base : rec.undecided)
      out.undecided.emplace_back(base, rec.cell.top, rec.cell.r);
  } catch (const DomainError& e) {
    throw CheckpointError(std::string("corrupt checkpoint record: ") + e.what());
  }
  return out;
}

}  // namespace

std::vector<std::vector<WorkCell>> partition_cells(const SearchConfig& cfg, std::size_t n) {
  return partition_list(grid_cells(cfg), cfg, n);
}

Catalog assemble_catalog(const SearchConfig& cfg, std::span<const CellResult> cells) {
  Catalog c;
  c.bound = cfg.max_modulus;
  c.min_modulus = cfg.min_modulus;
  for (std::uint32_t r = cfg.r_min; r <= cfg.r_max; ++r) c.results[r];
  for (const auto& cell : cells) {
    auto& list = c.results[cell.cell.r];
    for (std::size_t i = 0; i < cell.profiles.size(); ++i) {
      list.push_back(cell.profiles[i]);
      c.witnesses.insert_or_assign(cell.profiles[i], cell.witnesses[i]);
    }
    c.undecided.insert(c.undecided.end(), cell.undecided.begin(), cell.undecided.end());
  }
  c.canonicalize();
  return c;
}

Catalog run_search(const SearchConfig& cfg) {
  cfg.validate();
  std::optional<CheckpointLog> log;
  if (cfg.checkpoint_path) log.emplace(*cfg.checkpoint_path, cfg);

  const auto grid = grid_cells(cfg);
  const std::set<WorkCell> in_grid(grid.begin(), grid.end());
  std::vector<CellResult> results;
  std::set<WorkCell> done;
  if (log) {
    for (const auto& rec : log->loaded()) {
      if (!in_grid.contains(rec.cell) || !done.insert(rec.cell).second)
        throw CheckpointError("checkpoint cell (r=" + std::to_string(rec.cell.r) +
                              ", M=" + std::to_string(rec.cell.top) +
                              ") is outside the grid or repeated");
      results.push_back(restore(rec, cfg));
    }
  }

  std::vector<WorkCell> todo;
  for (const auto& c : grid)
    if (!done.contains(c)) todo.push_back(c);
  const auto parts = partition_list(std::move(todo), cfg, cfg.jobs);

  std::mutex mu;
  std::atomic<std::size_t> processed{0};
  std::atomic<bool> stopped{false};
  std::exception_ptr failure;

  auto worker = [&](const std::vector<WorkCell>& mine) {
    try {
      for (const auto& cell : mine) {
        if (cfg.stop_after_cells != 0 && processed.load() >= cfg.stop_after_cells) {
          stopped = true;
          return;
        }
        {
          std::lock_guard lock(mu);
          if (failure) return;
        }
        CellResult r = process_cell(cell, cfg);
        if (log) log->append(r);
        ++processed;
        std::lock_guard lock(mu);
        results.push_back(std::move(r));
      }
    } catch (...) {
      std::lock_guard lock(mu);
      if (!failure) failure = std::current_exception();
    }
  };

  if (cfg.jobs == 1) {
    worker(parts[0]);
  } else {
    std::vector<std::jthread> threads;
    threads.reserve(parts.size());
    for (const auto& part : parts) threads.emplace_back(worker, std::cref(part));
  }
  if (failure) std::rethrow_exception(failure);
  if (stopped)
    throw SearchInterrupted("stopped after " + std::to_string(processed.load()) +
                            " cells; rerun with the same checkpoint to resume");
  return assemble_catalog(cfg, results);
}

}  // namespace ecs
