#include "bmlab/manifest.hpp"

#include <gmp.h>
#include <mpfr.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "bmlab/rational.hpp"

namespace bmlab {

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t x) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << x;
  return os.str();
}

nlohmann::json version_info() {
  return {{"bmlab", kVersion}, {"gmp", gmp_version}, {"mpfr", mpfr_get_version()}};
}

FileRecord hash_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail_input("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string data = buf.str();
  return {path, data.size(), hex64(fnv1a64(data))};
}

namespace {

nlohmann::json records_json(const std::vector<FileRecord>& rs) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : rs) out.push_back({{"path", r.path}, {"bytes", r.bytes}, {"fnv1a64", r.fnv1a64}});
  return out;
}

std::vector<FileRecord> records_from(const nlohmann::json& j) {
  std::vector<FileRecord> out;
  for (const auto& r : j) out.push_back({r.at("path"), r.at("bytes"), r.at("fnv1a64")});
  return out;
}

}  // namespace

nlohmann::json to_json(const RunManifest& m) {
  return {{"command", m.command},
          {"config", m.config},
          {"seed", m.seed},
          {"versions", version_info()},
          {"inputs", records_json(m.inputs)},
          {"outputs", records_json(m.outputs)}};
}

RunManifest manifest_from_json(const nlohmann::json& j) {
  try {
    RunManifest m;
    m.command = j.at("command");
    m.config = j.at("config");
    m.seed = j.at("seed");
    m.inputs = records_from(j.at("inputs"));
    m.outputs = records_from(j.at("outputs"));
    return m;
  } catch (const nlohmann::json::exception& e) {
    fail_input(std::string("malformed manifest: ") + e.what());
  }
}

OutputDir::OutputDir(std::string dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) fail_input("cannot create output directory '" + dir_ + "': " + ec.message());
}

const FileRecord& OutputDir::write(const std::string& name, std::string_view content) {
  const std::string path = (std::filesystem::path(dir_) / name).string();
  std::ofstream out(path, std::ios::binary);
  if (!out) fail_input("cannot write '" + path + "'");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) fail_input("write failed for '" + path + "'");
  records_.push_back({name, content.size(), hex64(fnv1a64(content))});
  return records_.back();
}

unsigned thread_cap() {
  const char* v = std::getenv("BMLAB_THREADS");
  if (!v) return 1;
  char* end = nullptr;
  const long n = std::strtol(v, &end, 10);
  return end != v && *end == '\0' && n >= 1 ? static_cast<unsigned>(n) : 1;
}

}  // namespace bmlab
