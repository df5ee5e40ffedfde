#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace supermarket {

/// Flat key-value configuration with [section] headers.
///
///   # comment
///   [model]
///   n = 10000
///
/// Keys are addressed as "section.key" (bare keys before any section header
/// keep their own name).  Values stay raw text until a typed getter runs;
/// getters without a fallback throw std::invalid_argument when the key is
/// missing or malformed.  Later assignments win.
class Config {
 public:
  static Config from_file(const std::string& path);
  static Config from_string(const std::string& text);

  bool has(const std::string& key) const;
  void set(const std::string& key, std::string value);

  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_real(const std::string& key) const;
  double get_real(const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& key) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;

  /// Comma-separated integers; an absent key yields the fallback.
  std::vector<std::int64_t> get_int_list(const std::string& key,
                                         std::vector<std::int64_t> fallback) const;

  /// Comma-separated reals; the key must be present and nonempty.
  std::vector<double> get_real_list(const std::string& key) const;

  /// Sorted "key=value" pairs joined with single spaces: the provenance echo
  /// written into every CSV header.
  std::string canonical() const;

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace supermarket
