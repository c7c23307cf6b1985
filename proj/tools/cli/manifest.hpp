#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace nvdrift::cli {

std::string sha256_hex(std::string_view bytes);

/// Record of one run: command, inputs with content hashes, parameters, tool
/// version and hashes of what was written. Holds no clock time, so identical
/// reruns serialize identically.
class RunManifest {
 public:
  explicit RunManifest(std::string command) : command_(std::move(command)) {}

  /// Hashes a file, or every regular file directly inside a directory.
  void add_input(const std::filesystem::path& path);
  void add_parameter(std::string key, std::string value);
  void add_output(std::string name, std::string_view content);

  std::string to_json() const;

 private:
  std::string command_;
  std::vector<std::pair<std::string, std::string>> inputs_;
  std::map<std::string, std::string> parameters_;
  std::vector<std::pair<std::string, std::string>> outputs_;
};

}  // namespace nvdrift::cli
