#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace amplipix {

// Base error for all library failures.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Incompatible image shapes (dimension or channel mismatch).
struct ShapeError : Error {
    explicit ShapeError(const std::string& msg) : Error(msg) {}
};

// File decode/encode failures.
struct IoError : Error {
    explicit IoError(const std::string& msg) : Error(msg) {}
};

// Method-expression syntax error; position is the 0-based offset of the
// offending character (or end of input).
struct ParseError : Error {
    ParseError(const std::string& msg, std::size_t position)
        : Error(msg + " (at position " + std::to_string(position) + ")"),
          position(position) {}

    std::size_t position;
};

}  // namespace amplipix
