// ecs: search, verify and tabulate exact covering systems with a single
// repeated (largest) modulus.
//
// Exit status: 0 success / valid / empty diff, 1 invalid / infeasible /
// nonempty diff, 2 usage or parse error, 3 overflow or resource cap.

#include <charconv>
#include <cstdlib>
#include <optional>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "ecs/catalog.hpp"
#include "ecs/enumerate.hpp"
#include "ecs/systems.hpp"

namespace {

enum Exit : int { kOk = 0, kNegative = 1, kUsage = 2, kCap = 3 };

ecs::u64 default_lcm_cap() {
  ecs::u64 cap = ecs::SearchConfig{}.lcm_cap;
  if (const char* env = std::getenv("ECS_LCM_CAP")) {
    std::string_view s(env);
    ecs::u64 v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || v == 0)
      throw ecs::ParseError("ECS_LCM_CAP must be a positive integer, got '" + std::string(s) + "'");
    cap = v;
  }
  return cap;
}

std::string summary(const ecs::Catalog& c) {
  std::ostringstream out;
  out << "counts";
  for (const auto& [r, list] : c.results) out << ' ' << r << ':' << list.size();
  out << " total " << c.total() << " undecided " << c.undecided.size() << " (bound "
      << c.bound << ")";
  return out.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ecs::ParseError("cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void print_report(const ecs::CoveringSystem& s, const ecs::VerifyReport& rep) {
  std::cout << (rep.valid ? "VALID" : "INVALID") << '\n';
  std::cout << "density " << rep.density.to_string() << '\n';
  if (rep.first_conflict) {
    const auto& a = s[rep.first_conflict->first];
    const auto& b = s[rep.first_conflict->second];
    std::cout << "conflict " << a.residue() << " mod " << a.modulus() << ", " << b.residue()
              << " mod " << b.modulus();
    if (rep.conflict_point) std::cout << " at " << rep.conflict_point->str();
    std::cout << '\n';
  }
  if (rep.first_gap) std::cout << "gap " << *rep.first_gap << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact covering systems with one repeated modulus"};
  app.require_subcommand(1);

  // search
  ecs::SearchConfig cfg;
  cfg.jobs = std::max(1u, std::thread::hardware_concurrency());
  std::string format = "compact";
  std::string checkpoint;
  bool no_divisor_prune = false;
  auto* search = app.add_subcommand("search", "Enumerate the catalog for a range of r");
  search->add_option("--r-min", cfg.r_min, "Smallest repeat count")->capture_default_str();
  search->add_option("--r-max", cfg.r_max, "Largest repeat count")->capture_default_str();
  search->add_option("--max-modulus", cfg.max_modulus, "Bound B on the repeated modulus")
      ->capture_default_str();
  search->add_option("--min-modulus", cfg.min_modulus, "Smallest allowed modulus")
      ->capture_default_str();
  search->add_option("--jobs", cfg.jobs, "Worker threads")->check(CLI::PositiveNumber);
  search->add_option("--checkpoint", checkpoint, "Append completed cells here; resume if present");
  search->add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"compact", "json"}))
      ->capture_default_str();
  search->add_flag("--nz-prune", cfg.enable_nz_prune,
                   "Skip top moduli whose smallest prime factor exceeds r");
  search->add_flag("--no-divisor-prune", no_divisor_prune,
                   "Also try base moduli that do not divide the top modulus");
  search->add_option("--stop-after", cfg.stop_after_cells,
                     "Stop after this many cells (checkpoint testing)")
      ->group("");

  // verify
  std::string system_text;
  bool bruteforce = false;
  auto* verify = app.add_subcommand("verify", "Check that a system is an exact cover");
  verify->add_option("system", system_text, "e.g. \"0 mod 2, 1 mod 4, 3 mod 4\"")->required();
  verify->add_flag("--bruteforce", bruteforce, "Count hits over Z/lcm instead");

  // witness
  std::string multiset_text;
  std::string branch = "smallest";
  auto* witness = app.add_subcommand("witness", "Find residues for a moduli multiset");
  witness->add_option("moduli", multiset_text, "e.g. \"3 6^4\"")->required();
  witness->add_option("--branch", branch, "Branch point rule")
      ->check(CLI::IsMember({"smallest", "fewest"}))
      ->capture_default_str();

  // trivial / double
  unsigned trivial_r = 0;
  auto* trivial = app.add_subcommand("trivial", "Power-of-two system with top modulus 2^r");
  trivial->add_option("r", trivial_r, "Exponent, r >= 1")->required();
  auto* dbl = app.add_subcommand("double", "Add 0 mod 2 and map a mod m to 2a+1 mod 2m");
  dbl->add_option("system", system_text, "A valid exact cover")->required();

  // catalog
  auto* catalog = app.add_subcommand("catalog", "Reference catalog tools");
  catalog->require_subcommand(1);
  std::uint32_t show_r = 0;
  std::string show_format = "compact";
  auto* show = catalog->add_subcommand("show", "Print the reference catalog");
  show->add_option("--r", show_r, "Only this repeat count");
  show->add_option("--format", show_format, "Output format")
      ->check(CLI::IsMember({"compact", "json"}))
      ->capture_default_str();
  std::string diff_path;
  auto* diffcmd = catalog->add_subcommand("diff", "Compare a JSON search result to the reference");
  diffcmd->add_option("run", diff_path, "Catalog JSON from `search --format json`")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*search) {
      cfg.lcm_cap = default_lcm_cap();
      cfg.divisor_prune = !no_divisor_prune;
      if (!checkpoint.empty()) cfg.checkpoint_path = checkpoint;
      const ecs::Catalog c = ecs::run_search(cfg);
      std::cout << (format == "json" ? ecs::format_json(c) : ecs::format_compact(c));
      std::cerr << summary(c) << '\n';
      if (!c.undecided.empty())
        std::cerr << "warning: " << c.undecided.size()
                  << " profiles undecided under the lcm cap; completeness is not established\n";
      return kOk;
    }
    if (*verify) {
      const auto s = ecs::parse_system(system_text);
      const auto rep = bruteforce ? ecs::verify_bruteforce(s, default_lcm_cap()) : ecs::verify(s);
      print_report(s, rep);
      return rep.valid ? kOk : kNegative;
    }
    if (*witness) {
      const auto moduli = ecs::parse_multiset(multiset_text);
      const auto d = ecs::multiset_density(moduli);
      if (!d.is_one()) {
        std::cerr << "error: density " << d.to_string() << " != 1\n";
        return kUsage;
      }
      const auto rule = branch == "fewest" ? ecs::BranchRule::fewest_options
                                           : ecs::BranchRule::smallest_uncovered;
      const auto w = ecs::residue_witness(moduli, default_lcm_cap(), rule);
      switch (w.status) {
        case ecs::Feasibility::feasible:
          std::cout << ecs::format_system(*w.witness) << '\n';
          return kOk;
        case ecs::Feasibility::infeasible:
          std::cout << "INFEASIBLE\n";
          return kNegative;
        case ecs::Feasibility::undecided:
          std::cout << "UNDECIDED\n";
          return kCap;
      }
    }
    if (*trivial || *dbl) {
      std::optional<ecs::CoveringSystem> s;
      if (*trivial) {
        s = ecs::trivial_power_system(trivial_r);
      } else {
        const auto in = ecs::parse_system(system_text);
        if (!ecs::verify(in).valid) {
          std::cerr << "error: input is not an exact covering system\n";
          return kNegative;
        }
        s = ecs::double_system(in);
      }
      if (!ecs::verify(*s).valid) {
        std::cerr << "internal error: constructed system failed verification\n";
        return kNegative;
      }
      std::cout << ecs::format_system(*s) << '\n';
      return kOk;
    }
    if (*show) {
      ecs::Catalog c = ecs::golden();
      if (show->count("--r") != 0) {
        if (!c.results.contains(show_r)) {
          std::cerr << "error: the reference catalog covers r = 2..32\n";
          return kUsage;
        }
        const auto keep = c.results.at(show_r);
        c.results = {{show_r, keep}};
        c.undecided.clear();
      }
      std::cout << (show_format == "json" ? ecs::format_json(c) : ecs::format_compact(c));
      return kOk;
    }
    if (*diffcmd) {
      const ecs::Catalog run = ecs::parse_json(read_file(diff_path));
      const auto d = ecs::diff(run, ecs::golden());
      std::cout << ecs::format_diff(d);
      if (d.out_of_bound != 0)
        std::cerr << d.out_of_bound << " reference entries lie beyond the run's bound "
                  << run.bound << " and were not compared\n";
      return d.empty() ? kOk : kNegative;
    }
  } catch (const ecs::CapExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kCap;
  } catch (const ecs::OverflowError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kCap;
  } catch (const ecs::SearchInterrupted& e) {
    std::cerr << "interrupted: " << e.what() << '\n';
    return kCap;
  } catch (const ecs::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
