#include "cli/output_set.hpp"

#include <fstream>
#include <system_error>
#include <unistd.h>

#include "nvdrift/error.hpp"

namespace nvdrift::cli {

void OutputSet::add(std::string name, std::string content) {
  for (auto& e : entries_) {
    if (e.name == name) {
      e.content = std::move(content);
      return;
    }
  }
  entries_.push_back({std::move(name), std::move(content)});
}

void OutputSet::commit() const {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create '" + dir_.string() + "': " + ec.message());

  const std::string suffix = ".tmp." + std::to_string(::getpid());
  std::vector<std::filesystem::path> temps;
  auto cleanup = [&] {
    for (const auto& t : temps) std::filesystem::remove(t, ec);
  };

  for (const auto& e : entries_) {
    const auto final_path = dir_ / e.name;
    const auto temp_path = std::filesystem::path(final_path.string() + suffix);
    temps.push_back(temp_path);
    std::ofstream out(temp_path, std::ios::binary | std::ios::trunc);
    out.write(e.content.data(), static_cast<std::streamsize>(e.content.size()));
    out.close();
    if (!out) {
      cleanup();
      throw Error(ErrorCode::IoError, "cannot write '" + temp_path.string() + "'");
    }
  }
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    std::filesystem::rename(temps[i], dir_ / entries_[i].name, ec);
    if (ec) {
      for (std::size_t j = 0; j < i; ++j) std::filesystem::remove(dir_ / entries_[j].name, ec);
      cleanup();
      throw Error(ErrorCode::IoError, "cannot move output into '" + (dir_ / entries_[i].name).string() + "'");
    }
  }
}

}  // namespace nvdrift::cli
