#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

namespace netdesign {

// CSV writer with the project's output conventions: UTF-8, '.' decimal
// separator, LF line endings, a leading "# manifest=<hash>" comment line,
// then a header row. Floating-point cells are printed with snprintf so the
// bytes do not depend on locale or stream state.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::string& manifest_ref,
              const std::vector<std::string>& header);
    ~CsvWriter();

    CsvWriter& cell(const std::string& value);
    CsvWriter& cell(const char* value);
    CsvWriter& cell(long long value);
    CsvWriter& cell(int value);
    CsvWriter& cell(std::size_t value);
    // Fixed 6-decimal format, matching the reported-table precision.
    CsvWriter& cell(double value);
    // Round-trip format for generator constants and raw draws.
    CsvWriter& cell_full(double value);
    void end_row();

    const std::string& path() const { return path_; }

private:
    void sep();
    std::ofstream out_;
    std::string path_;
    bool row_open_ = false;
};

std::string format_fixed(double value, int decimals = 6);
std::string format_full(double value);

// Minimal reader for the panel import path: skips '#' comment lines,
// returns rows of string cells. No quoting support; none of our files
// need it.
std::vector<std::vector<std::string>> read_csv(const std::string& path);

// FNV-1a 64-bit over a byte string; used for input/content hashes in run
// manifests and for determinism checks in tests.
std::uint64_t fnv1a64(const std::string& bytes);
std::string hash_hex(std::uint64_t h);

// Whole-file read; throws std::runtime_error when missing.
std::string read_file(const std::string& path);

}  // namespace netdesign
