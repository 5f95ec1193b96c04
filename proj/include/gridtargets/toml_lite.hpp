#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

namespace gridtargets {

/// The TOML subset used by experiment manifests: [section] headers,
/// key = value lines with strings, numbers, booleans, flat arrays, and
/// # comments.
class TomlLite {
  public:
    using Value = std::variant<double, bool, std::string, std::vector<double>,
                               std::vector<std::string>>;

    static TomlLite parse_file(const std::string& path);
    static TomlLite parse(const std::string& text);

    bool has(const std::string& section, const std::string& key) const;

    double number(const std::string& section, const std::string& key) const;
    double number_or(const std::string& section, const std::string& key, double fallback) const;
    bool boolean_or(const std::string& section, const std::string& key, bool fallback) const;
    std::string text(const std::string& section, const std::string& key) const;
    std::string text_or(const std::string& section, const std::string& key,
                        const std::string& fallback) const;
    std::vector<double> numbers(const std::string& section, const std::string& key) const;

  private:
    const Value& get(const std::string& section, const std::string& key) const;
    std::map<std::string, std::map<std::string, Value>> sections_;
};

}  // namespace gridtargets
