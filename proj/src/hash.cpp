#include "atomtf/hash.hpp"

#include <cstdio>

namespace atomtf {

std::string Fnv64::hex() const {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(state_));
    return buf;
}

}  // namespace atomtf
