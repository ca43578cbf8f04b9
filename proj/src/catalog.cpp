#include "ecs/catalog.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace ecs {

namespace detail {
extern const std::string_view kGoldenCatalogText;
}

namespace {

using nlohmann::json;

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

template <class T>
T to_number(std::string_view tok, std::size_t line_no) {
  tok = trim(tok);
  T v{};
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (tok.empty() || ec != std::errc() || p != tok.data() + tok.size())
    throw ParseError("line " + std::to_string(line_no) + ": bad number '" + std::string(tok) +
                     "'");
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const auto at = s.find(sep, pos);
    out.push_back(s.substr(pos, at == std::string_view::npos ? std::string_view::npos : at - pos));
    if (at == std::string_view::npos) break;
    pos = at + 1;
  }
  return out;
}

// Drops TeX boldface markup: "{\bf 21}" -> " 21 ".
std::string strip_markup(std::string_view line) {
  std::string out;
  out.reserve(line.size());
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line.compare(i, 3, "\\bf") == 0) {
      i += 2;
      out.push_back(' ');
    } else if (line[i] == '{' || line[i] == '}') {
      out.push_back(' ');
    } else {
      out.push_back(line[i]);
    }
  }
  return out;
}

bool undecided_less(const ModuliProfile& a, const ModuliProfile& b) {
  if (a.repeats() != b.repeats()) return a.repeats() < b.repeats();
  return a < b;
}

json profile_json(const ModuliProfile& p) {
  return json{{"base", p.base()}, {"top", p.top()}, {"repeats", p.repeats()}};
}

ModuliProfile profile_from_json(const json& j) {
  try {
    return ModuliProfile(j.at("base").get<std::vector<u64>>(), j.at("top").get<u64>(),
                         j.at("repeats").get<std::uint32_t>());
  } catch (const DomainError& e) {
    throw ParseError(std::string("invalid profile: ") + e.what());
  }
}

void require_sorted_unique(const std::vector<ModuliProfile>& v, std::uint32_t r) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i - 1] < v[i]))
      throw std::logic_error("catalog list for r=" + std::to_string(r) + " is not canonical");
}

}  // namespace

std::size_t Catalog::total() const {
  std::size_t n = 0;
  for (const auto& [r, list] : results) n += list.size();
  return n;
}

std::size_t Catalog::count(std::uint32_t r) const {
  const auto it = results.find(r);
  return it == results.end() ? 0 : it->second.size();
}

void Catalog::canonicalize() {
  for (auto& [r, list] : results) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
  std::sort(undecided.begin(), undecided.end(), undecided_less);
  undecided.erase(std::unique(undecided.begin(), undecided.end()), undecided.end());
}

const std::map<std::uint32_t, std::size_t>& golden_counts() {
  static const std::map<std::uint32_t, std::size_t> counts{
      {2, 0},   {3, 0},   {4, 1},   {5, 0},   {6, 3},   {7, 2},   {8, 2},   {9, 4},
      {10, 5},  {11, 2},  {12, 7},  {13, 7},  {14, 6},  {15, 10}, {16, 9},  {17, 4},
      {18, 16}, {19, 13}, {20, 12}, {21, 18}, {22, 19}, {23, 12}, {24, 24}, {25, 23},
      {26, 19}, {27, 27}, {28, 26}, {29, 21}, {30, 39}, {31, 35}, {32, 29}};
  return counts;
}

const Catalog& golden() {
  static const Catalog catalog = [] {
    Catalog c = parse_compact(detail::kGoldenCatalogText, 600, 3);
    const auto& expected = golden_counts();
    if (c.results.size() != expected.size())
      throw std::logic_error("golden catalog covers the wrong range of r");
    for (const auto& [r, n] : expected) {
      if (c.count(r) != n)
        throw std::logic_error("golden catalog has " + std::to_string(c.count(r)) +
                               " entries for r=" + std::to_string(r) + ", expected " +
                               std::to_string(n));
      for (const auto& p : c.results.at(r)) {
        // density 1 and base < top are checked by ModuliProfile itself
        const u64 smallest = p.base().empty() ? p.top() : p.base().front();
        if (smallest < 3 || p.repeats() != r)
          throw std::logic_error("golden entry violates smallest modulus >= 3");
      }
      require_sorted_unique(c.results.at(r), r);
    }
    return c;
  }();
  return catalog;
}

DiffReport diff(const Catalog& run, const Catalog& gold) {
  DiffReport d;
  for (const auto& [r, mine] : run.results) {
    std::vector<ModuliProfile> theirs;
    if (auto it = gold.results.find(r); it != gold.results.end()) {
      for (const auto& p : it->second) {
        if (p.top() > run.bound)
          ++d.out_of_bound;
        else
          theirs.push_back(p);
      }
    }
    std::vector<ModuliProfile> a = mine;
    std::sort(a.begin(), a.end());
    std::sort(theirs.begin(), theirs.end());
    std::vector<ModuliProfile> missing, extra;
    std::set_difference(theirs.begin(), theirs.end(), a.begin(), a.end(),
                        std::back_inserter(missing));
    std::set_difference(a.begin(), a.end(), theirs.begin(), theirs.end(),
                        std::back_inserter(extra));
    if (!missing.empty()) d.missing[r] = std::move(missing);
    if (!extra.empty()) d.extra[r] = std::move(extra);
    const auto delta = static_cast<long long>(a.size()) - static_cast<long long>(theirs.size());
    if (delta != 0) d.count_delta[r] = delta;
  }
  return d;
}

std::string format_diff(const DiffReport& d) {
  std::ostringstream out;
  auto emit = [&](const char* label,
                  const std::map<std::uint32_t, std::vector<ModuliProfile>>& m) {
    for (const auto& [r, list] : m)
      for (const auto& p : list) {
        out << label << ' ' << r << ": ";
        const auto seq = p.distinct_moduli();
        for (std::size_t i = 0; i < seq.size(); ++i) out << (i ? "," : "") << seq[i];
        out << '\n';
      }
  };
  emit("missing", d.missing);
  emit("extra", d.extra);
  for (const auto& [r, delta] : d.count_delta)
    out << "count " << r << ": " << (delta > 0 ? "+" : "") << delta << '\n';
  return out.str();
}

std::string format_compact_line(std::uint32_t r, const std::vector<ModuliProfile>& profiles) {
  std::ostringstream out;
  out << r << '(' << profiles.size() << "):";
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    out << (i ? "; " : " ");
    const auto seq = profiles[i].distinct_moduli();
    for (std::size_t k = 0; k < seq.size(); ++k) out << (k ? "," : "") << seq[k];
  }
  return out.str();
}

std::string format_compact(const Catalog& c) {
  std::string out;
  for (const auto& [r, list] : c.results) {
    out += format_compact_line(r, list);
    out += '\n';
  }
  return out;
}

Catalog parse_compact(std::string_view text, u64 bound, u64 min_modulus) {
  Catalog c;
  c.bound = bound;
  c.min_modulus = min_modulus;
  std::size_t line_no = 0;
  for (auto raw : split(text, '\n')) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const std::string clean = strip_markup(line);
    const std::string_view sv = clean;

    const auto open = sv.find('(');
    const auto close = sv.find(')');
    const auto colon = sv.find(':');
    if (open == std::string_view::npos || close == std::string_view::npos ||
        colon == std::string_view::npos || !(open < close && close < colon) ||
        !trim(sv.substr(close + 1, colon - close - 1)).empty())
      throw ParseError("line " + std::to_string(line_no) + ": expected 'r(count): ...'");
    const auto r = to_number<std::uint32_t>(sv.substr(0, open), line_no);
    const auto n = to_number<std::size_t>(sv.substr(open + 1, close - open - 1), line_no);
    if (c.results.contains(r))
      throw ParseError("line " + std::to_string(line_no) + ": r=" + std::to_string(r) +
                       " listed twice");

    auto& list = c.results[r];
    const auto body = trim(sv.substr(colon + 1));
    if (!body.empty()) {
      for (auto group : split(body, ';')) {
        std::vector<u64> seq;
        for (auto tok : split(group, ',')) seq.push_back(to_number<u64>(tok, line_no));
        const u64 top = seq.back();
        seq.pop_back();
        try {
          list.emplace_back(std::move(seq), top, r);
        } catch (const DomainError& e) {
          throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
        }
      }
    }
    if (list.size() != n)
      throw ParseError("line " + std::to_string(line_no) + ": header says " + std::to_string(n) +
                       " systems, found " + std::to_string(list.size()));
  }
  c.canonicalize();
  return c;
}

std::string format_json(const Catalog& c) {
  json results = json::object();
  for (const auto& [r, list] : c.results) {
    json arr = json::array();
    for (const auto& p : list) arr.push_back(profile_json(p));
    results[std::to_string(r)] = std::move(arr);
  }
  json undecided = json::array();
  for (const auto& p : c.undecided) undecided.push_back(profile_json(p));
  const json doc{{"bound", c.bound},
                 {"min_modulus", c.min_modulus},
                 {"results", std::move(results)},
                 {"undecided", std::move(undecided)}};
  return doc.dump() + "\n";
}

Catalog parse_json(std::string_view text) {
  Catalog c;
  try {
    const json doc = json::parse(text);
    c.bound = doc.at("bound").get<u64>();
    c.min_modulus = doc.at("min_modulus").get<u64>();
    for (const auto& [key, arr] : doc.at("results").items()) {
      const auto r = to_number<std::uint32_t>(key, 0);
      auto& list = c.results[r];
      for (const auto& item : arr) {
        list.push_back(profile_from_json(item));
        if (list.back().repeats() != r)
          throw ParseError("profile under key " + key + " has a different repeat count");
      }
    }
    if (doc.contains("undecided"))
      for (const auto& item : doc.at("undecided")) c.undecided.push_back(profile_from_json(item));
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad catalog JSON: ") + e.what());
  }
  c.canonicalize();
  return c;
}

}  // namespace ecs
