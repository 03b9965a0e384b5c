#pragma once

#include <cstdint>
#include <cstring>
#include <string>

namespace atomtf {

/// FNV-1a 64-bit, used for cache keys and payload checksums.
class Fnv64 {
  public:
    Fnv64& update(const void* data, std::size_t n) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < n; ++i) {
            state_ ^= p[i];
            state_ *= 0x100000001b3ull;
        }
        return *this;
    }
    Fnv64& update(const std::string& s) { return update(s.data(), s.size()); }
    Fnv64& update(double v) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, sizeof(bits));
        return update(&bits, sizeof(bits));
    }
    Fnv64& update(std::int64_t v) { return update(&v, sizeof(v)); }

    std::uint64_t value() const { return state_; }
    std::string hex() const;

  private:
    std::uint64_t state_ = 0xcbf29ce484222325ull;
};

}  // namespace atomtf
