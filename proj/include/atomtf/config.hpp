#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "atomtf/model.hpp"

namespace atomtf {

/// Key-value run configuration.  Text format, one `key = value` pair per
/// line, `#` starts a comment.  Unknown keys are rejected with the full
/// list of valid keys in the error message.
class Config {
  public:
    Config() = default;
    static Config from_file(const std::filesystem::path& path);
    static Config from_string(const std::string& text);

    bool has(const std::string& key) const { return values_.count(key) != 0; }
    std::string get(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    std::vector<double> get_list(const std::string& key,
                                 const std::vector<double>& fallback) const;

    /// Configuration digest for manifests and cache keys.
    std::string digest() const;

    /// Nuclear configuration assembled from charges/positions/q/beta/N keys.
    NuclearConfiguration nuclear() const;

    static const std::vector<std::string>& known_keys();

  private:
    std::map<std::string, std::string> values_;
};

}  // namespace atomtf
