#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace atomtf {

/// Doubles are printed with %.17g everywhere so that data files round-trip
/// bit-exactly and identical runs produce identical bytes.
std::string format_double(double v);
double parse_double(const std::string& s);

/// Write content to path atomically (temp file in the same directory + rename).
void atomic_write(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

/// Minimal CSV emitter: one header row, then %.17g data rows.
class CsvWriter {
  public:
    explicit CsvWriter(std::vector<std::string> header);
    void add_row(const std::vector<double>& values);
    void add_row_mixed(const std::vector<std::string>& values);
    std::string str() const { return body_; }
    void write(const std::filesystem::path& path) const;

  private:
    std::string body_;
    std::size_t columns_ = 0;
};

}  // namespace atomtf
