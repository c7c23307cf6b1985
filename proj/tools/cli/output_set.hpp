#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace nvdrift::cli {

/// Output files are staged in memory and only written once the whole command
/// has succeeded. Each file goes to a temporary sibling and is renamed into
/// place, so a failed run leaves no partial outputs behind.
class OutputSet {
 public:
  explicit OutputSet(std::filesystem::path dir) : dir_(std::move(dir)) {}

  const std::filesystem::path& dir() const noexcept { return dir_; }

  /// `name` is relative to the output directory.
  void add(std::string name, std::string content);

  struct Entry {
    std::string name;
    std::string content;
  };
  const std::vector<Entry>& entries() const noexcept { return entries_; }

  /// Throws nvdrift::Error(IoError); already-renamed files of this set are
  /// removed again on failure.
  void commit() const;

 private:
  std::filesystem::path dir_;
  std::vector<Entry> entries_;
};

}  // namespace nvdrift::cli
