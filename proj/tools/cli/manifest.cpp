#include "cli/manifest.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <json.hpp>
#include <memory>

#include "nvdrift/csv_io.hpp"
#include "nvdrift/error.hpp"

#ifndef NVDRIFT_VERSION
#define NVDRIFT_VERSION "unknown"
#endif

namespace nvdrift::cli {

std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest.data(), &length) != 1) {
    throw Error(ErrorCode::IoError, "sha256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(length * 2);
  for (unsigned int i = 0; i < length; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xF];
  }
  return out;
}

void RunManifest::add_input(const std::filesystem::path& path) {
  if (std::filesystem::is_directory(path)) {
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(path)) {
      if (entry.is_regular_file() && entry.path().extension() != ".json") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) inputs_.emplace_back(f.generic_string(), sha256_hex(read_text_file(f)));
  } else {
    inputs_.emplace_back(path.generic_string(), sha256_hex(read_text_file(path)));
  }
}

void RunManifest::add_parameter(std::string key, std::string value) {
  parameters_[std::move(key)] = std::move(value);
}

void RunManifest::add_output(std::string name, std::string_view content) {
  outputs_.emplace_back(std::move(name), sha256_hex(content));
}

std::string RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["command"] = command_;
  j["tool_version"] = NVDRIFT_VERSION;
  j["inputs"] = nlohmann::ordered_json::array();
  for (const auto& [path, hash] : inputs_) j["inputs"].push_back({{"path", path}, {"sha256", hash}});
  j["parameters"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : parameters_) j["parameters"][k] = v;
  j["outputs"] = nlohmann::ordered_json::array();
  for (const auto& [name, hash] : outputs_) j["outputs"].push_back({{"path", name}, {"sha256", hash}});
  return j.dump(2) + "\n";
}

}  // namespace nvdrift::cli
