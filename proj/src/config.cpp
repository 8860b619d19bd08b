#include "cobev/config.hpp"

#include <limits>

namespace cobev {

ConfigReader::ConfigReader(const nlohmann::json& j, std::string path)
    : j_(j), path_(std::move(path)) {
  if (!j_.is_object()) {
    throw Error("config: " + (path_.empty() ? std::string("<root>") : path_) +
                ": expected an object");
  }
}

bool ConfigReader::has(const char* key) const { return j_.contains(key); }

std::string ConfigReader::path_of(const char* key) const {
  return path_.empty() ? std::string(key) : path_ + "." + key;
}

void ConfigReader::fail(const char* key, const std::string& what) const {
  throw Error("config: " + path_of(key) + ": " + what);
}

const nlohmann::json& ConfigReader::at(const char* key,
                                       bool (nlohmann::json::*is)() const noexcept,
                                       const char* expected) {
  seen_.insert(key);
  const auto& v = j_.at(key);
  if (!(v.*is)()) fail(key, std::string("expected ") + expected);
  return v;
}

double ConfigReader::number(const char* key, double fallback) {
  if (!has(key)) return fallback;
  return at(key, &nlohmann::json::is_number, "a number").get<double>();
}

int ConfigReader::integer(const char* key, int fallback) {
  if (!has(key)) return fallback;
  const auto& v = at(key, &nlohmann::json::is_number_integer, "an integer");
  const auto x = v.get<std::int64_t>();
  if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) {
    fail(key, "integer out of range");
  }
  return static_cast<int>(x);
}

std::uint64_t ConfigReader::uint64(const char* key, std::uint64_t fallback) {
  if (!has(key)) return fallback;
  const auto& v = at(key, &nlohmann::json::is_number_integer, "a non-negative integer");
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.get<std::int64_t>() < 0) fail(key, "expected a non-negative integer");
  return static_cast<std::uint64_t>(v.get<std::int64_t>());
}

bool ConfigReader::boolean(const char* key, bool fallback) {
  if (!has(key)) return fallback;
  return at(key, &nlohmann::json::is_boolean, "true or false").get<bool>();
}

std::string ConfigReader::string(const char* key, const std::string& fallback) {
  if (!has(key)) return fallback;
  return at(key, &nlohmann::json::is_string, "a string").get<std::string>();
}

std::pair<double, double> ConfigReader::range(const char* key,
                                              std::pair<double, double> fallback) {
  if (!has(key)) return fallback;
  const auto& v = at(key, &nlohmann::json::is_array, "[min, max]");
  if (v.size() != 2 || !v[0].is_number() || !v[1].is_number()) fail(key, "expected [min, max]");
  const std::pair<double, double> r{v[0].get<double>(), v[1].get<double>()};
  if (!(r.first <= r.second)) fail(key, "min must not exceed max");
  return r;
}

std::vector<double> ConfigReader::numbers(const char* key, const std::vector<double>& fallback) {
  if (!has(key)) return fallback;
  std::vector<double> out;
  for (const auto& x : at(key, &nlohmann::json::is_array, "a list of numbers")) {
    if (!x.is_number()) fail(key, "expected a list of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

std::vector<int> ConfigReader::integers(const char* key, const std::vector<int>& fallback) {
  if (!has(key)) return fallback;
  std::vector<int> out;
  for (const auto& x : at(key, &nlohmann::json::is_array, "a list of integers")) {
    if (!x.is_number_integer()) fail(key, "expected a list of integers");
    const auto v = x.get<std::int64_t>();
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
      fail(key, "integer out of range");
    }
    out.push_back(static_cast<int>(v));
  }
  return out;
}

std::vector<std::string> ConfigReader::strings(const char* key,
                                               const std::vector<std::string>& fallback) {
  if (!has(key)) return fallback;
  std::vector<std::string> out;
  for (const auto& x : at(key, &nlohmann::json::is_array, "a list of strings")) {
    if (!x.is_string()) fail(key, "expected a list of strings");
    out.push_back(x.get<std::string>());
  }
  return out;
}

ConfigReader ConfigReader::object(const char* key) {
  if (!has(key)) fail(key, "missing");
  return ConfigReader(at(key, &nlohmann::json::is_object, "an object"), path_of(key));
}

void ConfigReader::finish() const {
  for (const auto& item : j_.items()) {
    if (!seen_.contains(item.key())) {
      throw Error("config: " + path_of(item.key().c_str()) + ": unknown field");
    }
  }
}

}  // namespace cobev
