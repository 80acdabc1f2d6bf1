#include <algorithm>
#include <atomic>
#include <optional>
#include <ostream>
#include <thread>

#include "cli/frames.hpp"
#include "jetseg/ingest.hpp"

namespace jetseg::cli {

std::vector<FrameFile> list_frames(const std::filesystem::path& dir, std::string_view extension) {
  std::vector<FrameFile> frames;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == extension) {
      frames.push_back({entry.path().stem().string(), entry.path()});
    }
  }
  std::sort(frames.begin(), frames.end(),
            [](const FrameFile& a, const FrameFile& b) { return a.id < b.id; });
  return frames;
}

void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& task) {
  const auto workers = static_cast<std::size_t>(std::clamp<long long>(jobs, 1, static_cast<long long>(std::max<std::size_t>(n, 1))));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) {
      task(i);
    }
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        task(i);
      }
    });
  }
  for (auto& t : pool) {
    t.join();
  }
}

void emit(const std::optional<std::filesystem::path>& out_dir, const std::string& name,
          const std::string& contents, std::ostream& fallback) {
  if (!out_dir) {
    fallback << contents;
    return;
  }
  std::filesystem::create_directories(*out_dir);
  write_file(*out_dir / name, contents);
}

}  // namespace jetseg::cli
