#include "atomtf/cache.hpp"

#include <cinttypes>
#include <cstdio>
#include <cstring>
#include <sstream>

#include "atomtf/hash.hpp"
#include "atomtf/io.hpp"

namespace atomtf {

namespace {

std::string hex_double(double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof(bits));
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016" PRIx64, bits);
    return buf;
}

double unhex_double(const std::string& s) {
    std::uint64_t bits = std::strtoull(s.c_str(), nullptr, 16);
    double v;
    std::memcpy(&v, &bits, sizeof(v));
    return v;
}

}  // namespace

std::optional<std::vector<double>> Cache::get(const std::string& key) const {
    if (!enabled()) return std::nullopt;
    const std::string name = Fnv64().update(key).hex() + ".rec";
    const auto path = dir_ / name;
    std::error_code ec;
    if (!std::filesystem::exists(path, ec)) {
        ++misses;
        return std::nullopt;
    }
    try {
        std::istringstream in(read_file(path));
        std::string magic, stored_key, count_line, payload, checksum;
        if (!std::getline(in, magic) || magic != "atomtf-cache 1") throw 1;
        if (!std::getline(in, stored_key) || stored_key != key) throw 1;
        if (!std::getline(in, count_line)) throw 1;
        const std::size_t n = std::stoul(count_line);
        std::vector<double> values(n);
        Fnv64 sum;
        sum.update(stored_key).update(count_line);
        for (std::size_t i = 0; i < n; ++i) {
            std::string h;
            if (!std::getline(in, h)) throw 1;
            values[i] = unhex_double(h);
            sum.update(h);
        }
        if (!std::getline(in, checksum) || checksum != sum.hex()) throw 1;
        ++hits;
        return values;
    } catch (...) {
        ++corrupt;
        return std::nullopt;
    }
}

void Cache::put(const std::string& key, const std::vector<double>& values) const {
    if (!enabled()) return;
    const std::string name = Fnv64().update(key).hex() + ".rec";
    std::ostringstream out;
    const std::string count_line = std::to_string(values.size());
    out << "atomtf-cache 1\n" << key << "\n" << count_line << "\n";
    Fnv64 sum;
    sum.update(key).update(count_line);
    for (double v : values) {
        const std::string h = hex_double(v);
        out << h << "\n";
        sum.update(h);
    }
    out << sum.hex() << "\n";
    atomic_write(dir_ / name, out.str());
}

}  // namespace atomtf
