#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cobev/error.hpp"

namespace cobev {

/// Typed access to one JSON object of a config file. Every error names the
/// full field path ("config: augment.occluder_offset: ..."); finish() rejects
/// keys that were never read.
class ConfigReader {
 public:
  ConfigReader(const nlohmann::json& j, std::string path);

  const std::string& path() const { return path_; }
  bool has(const char* key) const;
  std::string path_of(const char* key) const;
  [[noreturn]] void fail(const char* key, const std::string& what) const;

  double number(const char* key, double fallback);
  int integer(const char* key, int fallback);
  std::uint64_t uint64(const char* key, std::uint64_t fallback);
  bool boolean(const char* key, bool fallback);
  std::string string(const char* key, const std::string& fallback);
  /// [min, max] with min <= max.
  std::pair<double, double> range(const char* key, std::pair<double, double> fallback);
  std::vector<double> numbers(const char* key, const std::vector<double>& fallback);
  std::vector<int> integers(const char* key, const std::vector<int>& fallback);
  std::vector<std::string> strings(const char* key, const std::vector<std::string>& fallback);
  /// Nested object; `key` must be present.
  ConfigReader object(const char* key);

  void finish() const;

 private:
  const nlohmann::json& at(const char* key, bool (nlohmann::json::*is)() const noexcept,
                           const char* expected);

  const nlohmann::json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

/// Runs `validate` and prefixes any error with the section path.
template <class F>
void validate_section(const std::string& path, F&& validate) {
  try {
    validate();
  } catch (const Error& e) {
    throw Error("config: " + path + ": " + e.what());
  }
}

}  // namespace cobev
