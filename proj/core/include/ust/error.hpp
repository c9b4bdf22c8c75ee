#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ust {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A value that must be finite was NaN or infinite.
class InvalidValueError : public Error {
public:
    using Error::Error;
};

/// Arithmetic on finite inputs produced a non-finite result.
class NumericOverflowError : public Error {
public:
    using Error::Error;
};

class UnsupportedExponentError : public Error {
public:
    explicit UnsupportedExponentError(int exponent);
};

/// Two operands (vectors, windows, matrices) disagree on a length.
class DimensionError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

/// Malformed input text. `line` and `column` are 1-based; 0 means unknown.
class ParseError : public Error {
public:
    ParseError(std::string file, std::size_t line, std::size_t column, const std::string& what);

    const std::string& file() const noexcept { return file_; }
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::string file_;
    std::size_t line_;
    std::size_t column_;
};

/// File-system failure (open, write, flush) on `path`.
class IoError : public Error {
public:
    IoError(std::string path, const std::string& what);

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

}  // namespace ust
