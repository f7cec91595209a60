#pragma once

#include <stdexcept>
#include <string>

namespace favor {

// Base class for all library errors surfaced across the C API boundary.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input container (bad JSON, bad JSONL line). Carries a position.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, std::size_t byte = 0, std::size_t line = 0)
        : Error(msg), byte_pos(byte), line_pos(line) {}
    std::size_t byte_pos;
    std::size_t line_pos;
};

// Well-formed input that violates a documented invariant.
class ValidationError : public Error {
public:
    using Error::Error;
};

// Filesystem problems: missing files, unwritable outputs.
class IoError : public Error {
public:
    using Error::Error;
};

// Judge transport or reply-parsing failures.
class JudgeError : public Error {
public:
    using Error::Error;
};

}  // namespace favor
