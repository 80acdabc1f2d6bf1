#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace jetseg::cli {

struct FrameFile {
  std::string id;  // file stem
  std::filesystem::path path;
};

/// Regular files in `dir` with the given extension, sorted by stem.
std::vector<FrameFile> list_frames(const std::filesystem::path& dir, std::string_view extension);

/// Runs task(i) for i in [0, n) on up to `jobs` threads. Tasks must not
/// share mutable state; exceptions escaping a task terminate the program.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& task);

/// Writes `contents` to out_dir/name, or to `fallback` when no directory
/// was given.
void emit(const std::optional<std::filesystem::path>& out_dir, const std::string& name,
          const std::string& contents, std::ostream& fallback);

}  // namespace jetseg::cli
