#ifndef ECS_CHECKPOINT_HPP
#define ECS_CHECKPOINT_HPP

#include <filesystem>
#include <fstream>
#include <mutex>
#include <string>
#include <vector>

#include "ecs/enumerate.hpp"

namespace ecs {

// A completed cell as stored on disk: base sequences only, r and M come from
// the cell.
struct CheckpointRecord {
  WorkCell cell;
  std::vector<std::vector<u64>> profiles;
  std::vector<std::vector<u64>> undecided;
};

// First line of a checkpoint file; identifies the search parameters.
std::string checkpoint_header(const SearchConfig& cfg);
std::string checkpoint_line(const CellResult& result);

// Append-only log of completed cells, one JSON object per line after a header
// line. Opening an existing file resumes it: the header must match cfg, a torn
// final line is discarded, and the surviving records are rewritten.
class CheckpointLog {
 public:
  CheckpointLog(const std::filesystem::path& path, const SearchConfig& cfg);

  const std::vector<CheckpointRecord>& loaded() const { return loaded_; }

  // Safe to call from several threads.
  void append(const CellResult& result);

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::mutex mu_;
  std::vector<CheckpointRecord> loaded_;
};

}  // namespace ecs

#endif  // ECS_CHECKPOINT_HPP
