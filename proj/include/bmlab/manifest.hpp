#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace bmlab {

inline constexpr const char* kVersion = "0.1.0";

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t x);

struct FileRecord {
  std::string path;
  std::size_t bytes = 0;
  std::string fnv1a64;
};

/// Everything needed to rerun a command. Holds no timestamps, so two runs
/// with the same inputs produce byte-identical manifests.
struct RunManifest {
  std::string command;
  nlohmann::json config = nlohmann::json::object();
  std::uint64_t seed = 0;
  std::vector<FileRecord> inputs, outputs;
};

/// Library, GMP and MPFR versions.
nlohmann::json version_info();

FileRecord hash_file(const std::string& path);
nlohmann::json to_json(const RunManifest& m);
RunManifest manifest_from_json(const nlohmann::json& j);

/// Writes files under one directory and records them for the manifest.
class OutputDir {
 public:
  explicit OutputDir(std::string dir);
  const std::string& dir() const { return dir_; }
  /// Writes `name` and returns its record (path relative to the directory).
  const FileRecord& write(const std::string& name, std::string_view content);
  const std::vector<FileRecord>& records() const { return records_; }

 private:
  std::string dir_;
  std::vector<FileRecord> records_;
};

/// Cap from BMLAB_THREADS (unset or invalid: 1).
unsigned thread_cap();

}  // namespace bmlab
