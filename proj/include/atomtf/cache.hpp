#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace atomtf {

/// Disk cache for expensive spectral results.  Records are keyed by a content
/// hash of their full descriptor; the descriptor is stored verbatim and
/// verified on load, payload doubles are hex so hits are bit-identical, and a
/// trailing checksum guards against corruption (bad entries are recomputed).
class Cache {
  public:
    Cache() = default;
    explicit Cache(std::filesystem::path dir) : dir_(std::move(dir)) {}

    bool enabled() const { return !dir_.empty(); }
    const std::filesystem::path& dir() const { return dir_; }

    std::optional<std::vector<double>> get(const std::string& key) const;
    void put(const std::string& key, const std::vector<double>& values) const;

    mutable long hits = 0;
    mutable long misses = 0;
    mutable long corrupt = 0;

  private:
    std::filesystem::path dir_;
};

}  // namespace atomtf
