#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace dlgn {

/// Flat `key = value` configuration with '#' comments. Unknown keys are
/// preserved so resolved configs can be re-emitted verbatim.
class Config {
 public:
  Config() = default;

  static Config from_file(const std::string& path);
  static Config from_string(const std::string& text);

  bool has(const std::string& key) const;
  void set(const std::string& key, const std::string& value);

  std::string get_string(const std::string& key,
                         const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  /// Comma-separated integer list.
  std::vector<int> get_int_list(const std::string& key,
                                const std::vector<int>& fallback) const;

  /// Key-sorted `key = value` lines.
  std::string serialize() const;

  const std::map<std::string, std::string>& entries() const { return kv_; }

 private:
  std::map<std::string, std::string> kv_;
};

}  // namespace dlgn
