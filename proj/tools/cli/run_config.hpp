#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace robtrade::cli {

/// Bad or missing setting; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SettingSpec {
  std::string key;
  std::string default_value;  // empty means unset
  std::string help;
  bool is_flag = false;
};

/// Settings schema of a subcommand, in the order they are echoed.
const std::vector<SettingSpec>& settings_for(const std::string& command);
const std::vector<std::string>& command_names();

/// Flat key=value settings of one subcommand. Resolution order: schema
/// defaults, then a config file, then command-line flags.
class RunConfig {
 public:
  explicit RunConfig(std::string command);

  const std::string& command() const noexcept { return command_; }

  /// Lines "key = value"; '#' starts a comment. Unknown keys are errors.
  void merge_text(const std::string& text, const std::string& origin);
  void merge_file(const std::filesystem::path& path);
  void set(const std::string& key, const std::string& value);

  bool has(const std::string& key) const;
  /// Whether the command's schema defines `key` at all.
  bool defines(const std::string& key) const { return find(key) != nullptr; }
  const std::string& str(const std::string& key) const;
  double number(const std::string& key) const;
  std::int64_t integer(const std::string& key) const;
  std::uint64_t unsigned_integer(const std::string& key) const;
  bool flag(const std::string& key) const;
  std::vector<double> numbers(const std::string& key) const;
  /// Throws ConfigError naming the first empty key.
  void require(const std::vector<std::string>& keys) const;

  const std::vector<std::pair<std::string, std::string>>& entries() const noexcept {
    return entries_;
  }
  nlohmann::ordered_json to_json() const;
  std::string to_text() const;

 private:
  std::pair<std::string, std::string>* find(const std::string& key);
  const std::pair<std::string, std::string>* find(const std::string& key) const;

  std::string command_;
  std::vector<std::pair<std::string, std::string>> entries_;
};

}  // namespace robtrade::cli
