#include "ecs/checkpoint.hpp"

#include <sstream>

#include "json.hpp"

namespace ecs {

namespace {

using nlohmann::json;

json config_json(const SearchConfig& cfg) {
  return json{{"r_min", cfg.r_min},
              {"r_max", cfg.r_max},
              {"max_modulus", cfg.max_modulus},
              {"min_modulus", cfg.min_modulus},
              {"lcm_cap", cfg.lcm_cap},
              {"nz_prune", cfg.enable_nz_prune},
              {"divisor_prune", cfg.divisor_prune}};
}

json bases_json(const std::vector<ModuliProfile>& profiles) {
  json out = json::array();
  for (const auto& p : profiles) out.push_back(p.base());
  return out;
}

CheckpointRecord parse_record(const std::string& line) {
  const json j = json::parse(line);
  CheckpointRecord rec;
  rec.cell.r = j.at("r").get<std::uint32_t>();
  rec.cell.top = j.at("M").get<u64>();
  rec.profiles = j.at("profiles").get<std::vector<std::vector<u64>>>();
  if (j.contains("undecided")) rec.undecided = j.at("undecided").get<std::vector<std::vector<u64>>>();
  return rec;
}

}  // namespace

std::string checkpoint_header(const SearchConfig& cfg) {
  return json{{"ecs_checkpoint", 1}, {"config", config_json(cfg)}}.dump();
}

std::string checkpoint_line(const CellResult& result) {
  json j{{"r", result.cell.r}, {"M", result.cell.top}, {"profiles", bases_json(result.profiles)}};
  if (!result.undecided.empty()) j["undecided"] = bases_json(result.undecided);
  return j.dump();
}

CheckpointLog::CheckpointLog(const std::filesystem::path& path, const SearchConfig& cfg)
    : path_(path) {
  const std::string header = checkpoint_header(cfg);
  std::error_code ec;
  if (std::filesystem::exists(path_, ec) && std::filesystem::file_size(path_, ec) > 0) {
    std::ifstream in(path_, std::ios::binary);
    if (!in) throw CheckpointError("cannot read checkpoint " + path_.string());
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();

    std::vector<std::string> lines;
    std::size_t pos = 0;
    bool torn_tail = false;
    while (pos < text.size()) {
      const auto nl = text.find('\n', pos);
      if (nl == std::string::npos) {
        // Final line without a newline: a write cut short by a kill.
        torn_tail = true;
        lines.push_back(text.substr(pos));
        break;
      }
      lines.push_back(text.substr(pos, nl - pos));
      pos = nl + 1;
    }
    if (lines.empty() || lines.front() != header) {
      if (lines.size() == 1 && torn_tail && header.starts_with(lines.front())) {
        lines.clear();  // the header itself was torn; nothing completed yet
      } else {
        throw CheckpointError("checkpoint " + path_.string() +
                              " was written under a different search configuration; "
                              "refusing to resume");
      }
    }
    for (std::size_t i = 1; i < lines.size(); ++i) {
      const bool last = i + 1 == lines.size();
      try {
        loaded_.push_back(parse_record(lines[i]));
      } catch (const nlohmann::json::exception& e) {
        if (last && torn_tail) break;
        throw CheckpointError("corrupt checkpoint line " + std::to_string(i + 1) + ": " +
                              e.what());
      }
    }
  }

  out_.open(path_, std::ios::binary | std::ios::trunc);
  if (!out_) throw CheckpointError("cannot write checkpoint " + path_.string());
  out_ << header << '\n';
  for (const auto& rec : loaded_) {
    json j{{"r", rec.cell.r}, {"M", rec.cell.top}, {"profiles", rec.profiles}};
    if (!rec.undecided.empty()) j["undecided"] = rec.undecided;
    out_ << j.dump() << '\n';
  }
  out_.flush();
  if (!out_) throw CheckpointError("cannot write checkpoint " + path_.string());
}

void CheckpointLog::append(const CellResult& result) {
  const std::string line = checkpoint_line(result);
  std::lock_guard lock(mu_);
  out_ << line << '\n';
  out_.flush();
  if (!out_) throw CheckpointError("write to checkpoint " + path_.string() + " failed");
}

}  // namespace ecs
