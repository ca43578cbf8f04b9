#include "ecs/systems.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <sstream>

namespace ecs {

namespace {

// Smallest nonnegative x with x = a1 (m1) and x = a2 (m2); caller guarantees
// a1 = a2 mod gcd(m1, m2).
BigInt crt_pair(u64 a1, u64 m1, u64 a2, u64 m2) {
  const BigInt g = gcd<BigInt>(BigInt(m1), BigInt(m2));
  const BigInt n1 = BigInt(m1) / g;
  const BigInt n2 = BigInt(m2) / g;
  // inverse of n1 modulo n2
  BigInt old_r = n1 % n2, r = n2, old_s = 1, s = 0;
  while (r != 0) {
    const BigInt q = old_r / r;
    BigInt t = old_r - q * r;
    old_r = r;
    r = t;
    t = old_s - q * s;
    old_s = s;
    s = t;
  }
  BigInt inv = n2 == 1 ? BigInt(0) : BigInt(((old_s % n2) + n2) % n2);
  BigInt diff = (BigInt(a2) - BigInt(a1)) / g;
  BigInt t = ((diff * inv) % n2 + n2) % n2;
  return BigInt(a1) + BigInt(m1) * t;
}

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(std::string_view tok, std::string_view what) {
  T value{};
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError("bad " + std::string(what) + ": '" + std::string(tok) + "'");
  return value;
}

}  // namespace

CongruenceClass::CongruenceClass(u64 residue, u64 modulus)
    : residue_(modulus == 0 ? 0 : residue % modulus), modulus_(modulus) {
  if (modulus == 0) throw DomainError("modulus must be positive");
}

CongruenceClass CongruenceClass::from_signed(std::int64_t residue, u64 modulus) {
  if (modulus == 0) throw DomainError("modulus must be positive");
  if (residue >= 0) return CongruenceClass(static_cast<u64>(residue), modulus);
  // |residue| as unsigned without overflowing on INT64_MIN
  const u64 mag = static_cast<u64>(-(residue + 1)) + 1;
  const u64 rem = mag % modulus;
  return CongruenceClass(rem == 0 ? 0 : modulus - rem, modulus);
}

bool classes_disjoint(const CongruenceClass& c1, const CongruenceClass& c2) {
  const u64 g = gcd<u64>(c1.modulus(), c2.modulus());
  return c1.residue() % g != c2.residue() % g;
}

CoveringSystem::CoveringSystem(std::vector<CongruenceClass> classes)
    : classes_(std::move(classes)) {
  if (classes_.empty()) throw DomainError("covering system needs at least one class");
  std::sort(classes_.begin(), classes_.end());
  if (std::adjacent_find(classes_.begin(), classes_.end()) != classes_.end())
    throw DomainError("covering system repeats a class");
}

std::vector<u64> CoveringSystem::moduli() const {
  std::vector<u64> out;
  out.reserve(classes_.size());
  for (const auto& c : classes_) out.push_back(c.modulus());
  return out;
}

ModuliProfile::ModuliProfile(std::vector<u64> base, u64 top, std::uint32_t repeats)
    : base_(std::move(base)), top_(top), repeats_(repeats) {
  if (repeats_ < 2) throw DomainError("repeated modulus must occur at least twice");
  if (top_ < 2) throw DomainError("top modulus must be at least 2");
  for (std::size_t i = 0; i < base_.size(); ++i) {
    if (base_[i] == 0) throw DomainError("modulus must be positive");
    if (i > 0 && base_[i] <= base_[i - 1])
      throw DomainError("base moduli must be strictly increasing");
  }
  if (!base_.empty() && base_.back() >= top_)
    throw DomainError("base moduli must be below the top modulus");
  if (!multiset_density(moduli()).is_one())
    throw DomainError("profile density is " + multiset_density(moduli()).to_string() +
                      ", not 1");
}

std::vector<u64> ModuliProfile::distinct_moduli() const {
  std::vector<u64> out = base_;
  out.push_back(top_);
  return out;
}

std::vector<u64> ModuliProfile::moduli() const {
  std::vector<u64> out = base_;
  out.insert(out.end(), repeats_, top_);
  return out;
}

std::strong_ordering operator<=>(const ModuliProfile& a, const ModuliProfile& b) {
  if (auto c = a.distinct_count() <=> b.distinct_count(); c != 0) return c;
  const auto da = a.distinct_moduli();
  const auto db = b.distinct_moduli();
  if (auto c = std::lexicographical_compare_three_way(da.begin(), da.end(), db.begin(),
                                                      db.end());
      c != 0)
    return c;
  return a.repeats() <=> b.repeats();
}

BigFraction multiset_density(std::span<const u64> moduli) {
  BigFraction sum;
  for (u64 m : moduli) sum += BigFraction::unit(BigInt(m));
  return sum;
}

BigFraction density(const CoveringSystem& s) {
  const auto m = s.moduli();
  return multiset_density(m);
}

VerifyReport verify(const CoveringSystem& s) {
  VerifyReport report;
  report.density = density(s);
  const auto cls = s.classes();
  for (std::size_t i = 0; i < cls.size() && !report.first_conflict; ++i) {
    for (std::size_t j = i + 1; j < cls.size(); ++j) {
      if (!classes_disjoint(cls[i], cls[j])) {
        report.first_conflict = {i, j};
        report.conflict_point = crt_pair(cls[i].residue(), cls[i].modulus(),
                                         cls[j].residue(), cls[j].modulus());
        break;
      }
    }
  }
  report.valid = !report.first_conflict && report.density.is_one();
  if (!report.valid) {
    // the cover pattern has period lcm, so a gap, if any, lies below it
    u64 limit = kGapScanLimit;
    BigInt lcm = 1;
    for (const auto& c : cls) lcm = lcm_checked<BigInt>(lcm, BigInt(c.modulus()));
    if (lcm < limit) limit = static_cast<u64>(lcm);
    for (u64 x = 0; x < limit; ++x) {
      if (std::none_of(cls.begin(), cls.end(), [x](const auto& c) { return c.contains(x); })) {
        report.first_gap = x;
        break;
      }
    }
  }
  return report;
}

VerifyReport verify_bruteforce(const CoveringSystem& s, u64 lcm_cap) {
  u64 lcm = 1;
  try {
    for (const auto& c : s.classes()) lcm = lcm_checked<u64>(lcm, c.modulus());
  } catch (const OverflowError&) {
    throw CapExceeded("lcm of moduli exceeds 64 bits");
  }
  if (lcm > lcm_cap)
    throw CapExceeded("lcm " + std::to_string(lcm) + " exceeds cap " + std::to_string(lcm_cap));

  std::vector<std::uint32_t> hits(lcm, 0);
  for (const auto& c : s.classes())
    for (u64 x = c.residue(); x < lcm; x += c.modulus()) ++hits[x];

  VerifyReport report;
  report.density = density(s);
  for (u64 x = 0; x < lcm; ++x) {
    if (hits[x] == 0 && !report.first_gap) report.first_gap = x;
    if (hits[x] > 1 && !report.first_conflict) {
      std::vector<std::size_t> owners;
      for (std::size_t i = 0; i < s.size() && owners.size() < 2; ++i)
        if (s[i].contains(x)) owners.push_back(i);
      report.first_conflict = {owners[0], owners[1]};
      report.conflict_point = BigInt(x);
    }
    if (report.first_gap && report.first_conflict) break;
  }
  report.valid = !report.first_gap && !report.first_conflict;
  return report;
}

CoveringSystem trivial_power_system(unsigned r) {
  if (r < 1) throw DomainError("trivial power system needs r >= 1");
  if (r > 63) throw OverflowError("2^" + std::to_string(r) + " exceeds 64-bit backing");
  std::vector<CongruenceClass> classes;
  for (unsigned k = 1; k <= r; ++k) {
    const u64 m = u64{1} << k;
    classes.emplace_back(m / 2 - 1, m);
  }
  const u64 top = u64{1} << r;
  classes.emplace_back(top - 1, top);
  return CoveringSystem(std::move(classes));
}

CoveringSystem double_system(const CoveringSystem& s) {
  const auto report = verify(s);
  if (!report.valid)
    throw DomainError("double_system requires a valid exact cover (density " +
                      report.density.to_string() + ")");
  std::vector<CongruenceClass> classes;
  classes.reserve(s.size() + 1);
  classes.emplace_back(0, 2);
  for (const auto& c : s.classes()) {
    const u64 m2 = checked_mul<u64>(c.modulus(), 2);
    classes.emplace_back(2 * c.residue() + 1, m2);  // residue < m, so no overflow
  }
  return CoveringSystem(std::move(classes));
}

ModuliProfile profile_of_moduli(std::vector<u64> moduli) {
  if (moduli.empty()) throw NotSingleRepeated("empty moduli multiset");
  std::sort(moduli.begin(), moduli.end());
  const u64 top = moduli.back();
  const auto first_top = std::lower_bound(moduli.begin(), moduli.end(), top);
  const auto repeats = static_cast<std::size_t>(moduli.end() - first_top);
  if (repeats < 2) throw NotSingleRepeated("largest modulus " + std::to_string(top) +
                                           " appears only once");
  std::vector<u64> base(moduli.begin(), first_top);
  if (std::adjacent_find(base.begin(), base.end()) != base.end())
    throw NotSingleRepeated("a modulus below the largest repeats");
  if (repeats > std::numeric_limits<std::uint32_t>::max())
    throw DomainError("repeat count too large");
  return ModuliProfile(std::move(base), top, static_cast<std::uint32_t>(repeats));
}

ModuliProfile profile_of(const CoveringSystem& s) { return profile_of_moduli(s.moduli()); }

CoveringSystem parse_system(std::string_view text) {
  std::vector<CongruenceClass> classes;
  std::size_t pos = 0;
  while (true) {
    const auto comma = text.find(',', pos);
    const auto term = trim(text.substr(pos, comma == std::string_view::npos
                                                ? std::string_view::npos
                                                : comma - pos));
    const auto kw = term.find("mod");
    if (term.empty() || kw == std::string_view::npos)
      throw ParseError("expected 'A mod M', got '" + std::string(term) + "'");
    const auto lhs = trim(term.substr(0, kw));
    const auto rhs = trim(term.substr(kw + 3));
    // "mod" must be a separate word
    if (kw == 0 || kw + 3 >= term.size() || term[kw - 1] != ' ' ||
        (term[kw + 3] != ' ' && term[kw + 3] != '\t'))
      throw ParseError("expected 'A mod M', got '" + std::string(term) + "'");
    const auto a = parse_number<std::int64_t>(lhs, "residue");
    const auto m = parse_number<u64>(rhs, "modulus");
    if (m == 0) throw ParseError("modulus must be positive");
    classes.push_back(CongruenceClass::from_signed(a, m));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  try {
    return CoveringSystem(std::move(classes));
  } catch (const DomainError& e) {
    throw ParseError(e.what());
  }
}

std::string format_system(const CoveringSystem& s) {
  std::ostringstream out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out << ", ";
    out << s[i].residue() << " mod " << s[i].modulus();
  }
  return out.str();
}

std::vector<u64> parse_multiset(std::string_view text) {
  std::vector<std::string_view> tokens;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto b = text.find_first_not_of(" \t\r\n", pos);
    if (b == std::string_view::npos) break;
    auto e = text.find_first_of(" \t\r\n", b);
    if (e == std::string_view::npos) e = text.size();
    tokens.push_back(text.substr(b, e - b));
    pos = e;
  }
  if (tokens.empty()) throw ParseError("empty moduli multiset");

  std::vector<u64> out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    auto tok = tokens[i];
    u64 count = 1;
    if (const auto caret = tok.find('^'); caret != std::string_view::npos) {
      if (i + 1 != tokens.size()) throw ParseError("'^r' is only allowed on the last modulus");
      count = parse_number<u64>(tok.substr(caret + 1), "repeat count");
      if (count == 0) throw ParseError("repeat count must be positive");
      if (count > 1'000'000) throw ParseError("repeat count too large");
      tok = tok.substr(0, caret);
    }
    const auto m = parse_number<u64>(tok, "modulus");
    if (m == 0) throw ParseError("modulus must be positive");
    out.insert(out.end(), count, m);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string format_multiset(std::span<const u64> moduli) {
  std::vector<u64> sorted(moduli.begin(), moduli.end());
  std::sort(sorted.begin(), sorted.end());
  std::ostringstream out;
  const u64 top = sorted.empty() ? 0 : sorted.back();
  const auto first_top = std::lower_bound(sorted.begin(), sorted.end(), top);
  bool first = true;
  for (auto it = sorted.begin(); it != first_top; ++it) {
    out << (first ? "" : " ") << *it;
    first = false;
  }
  const auto tops = sorted.end() - first_top;
  if (tops > 0) {
    out << (first ? "" : " ") << top;
    if (tops > 1) out << '^' << tops;
  }
  return out.str();
}

}  // namespace ecs
