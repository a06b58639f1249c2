#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace netdesign {

// Bad user input: malformed config, inconsistent data, out-of-range
// arguments. The CLI maps this to exit code 2.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed raw data file; carries the byte offset of the failure point.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t byte_offset)
        : std::runtime_error(what + " (byte offset " + std::to_string(byte_offset) + ")"),
          byte_offset_(byte_offset) {}

    std::size_t byte_offset() const { return byte_offset_; }

private:
    std::size_t byte_offset_;
};

}  // namespace netdesign
