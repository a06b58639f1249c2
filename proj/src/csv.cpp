#include "netdesign/csv.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace netdesign {

std::string format_fixed(double value, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
    return buf;
}

std::string format_full(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::string& manifest_ref,
                     const std::vector<std::string>& header)
    : out_(path, std::ios::binary), path_(path) {
    if (!out_) throw std::runtime_error("cannot open output file: " + path);
    out_ << "# manifest=" << manifest_ref << "\n";
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) out_ << ',';
        out_ << header[i];
    }
    out_ << '\n';
}

CsvWriter::~CsvWriter() {
    if (row_open_) out_ << '\n';
}

void CsvWriter::sep() {
    if (row_open_) out_ << ',';
    row_open_ = true;
}

CsvWriter& CsvWriter::cell(const std::string& value) {
    sep();
    out_ << value;
    return *this;
}

CsvWriter& CsvWriter::cell(const char* value) { return cell(std::string(value)); }

CsvWriter& CsvWriter::cell(long long value) {
    sep();
    out_ << value;
    return *this;
}

CsvWriter& CsvWriter::cell(int value) { return cell(static_cast<long long>(value)); }
CsvWriter& CsvWriter::cell(std::size_t value) { return cell(static_cast<long long>(value)); }

CsvWriter& CsvWriter::cell(double value) {
    sep();
    out_ << format_fixed(value);
    return *this;
}

CsvWriter& CsvWriter::cell_full(double value) {
    sep();
    out_ << format_full(value);
    return *this;
}

void CsvWriter::end_row() {
    out_ << '\n';
    row_open_ = false;
}

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open input file: " + path);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> row;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) row.push_back(cell);
        rows.push_back(std::move(row));
    }
    return rows;
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hash_hex(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace netdesign
