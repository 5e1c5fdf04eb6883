#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace knotscope {

/// Flat key = value text. '#' and ';' start comments, values may be quoted,
/// and a "[section]" line prefixes the following keys with "section.".
class KeyValueConfig {
public:
  static KeyValueConfig parse(std::string_view text);
  static KeyValueConfig load(const std::string& path); // Io on failure

  std::optional<std::string> get(const std::string& key) const;
  std::string get_or(const std::string& key, const std::string& fallback) const;
  bool contains(const std::string& key) const { return values_.count(key) != 0; }
  void set(const std::string& key, std::string value) { values_[key] = std::move(value); }
  const std::map<std::string, std::string>& values() const noexcept { return values_; }

private:
  std::map<std::string, std::string> values_;
};

// "1", "true", "yes", "on" / "0", "false", "no", "off"; nullopt otherwise.
std::optional<bool> parse_bool(std::string_view text);

} // namespace knotscope
