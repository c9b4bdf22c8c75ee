#include "ust/error.hpp"

#include <utility>

namespace ust {

UnsupportedExponentError::UnsupportedExponentError(int exponent)
    : Error("unsupported exponent " + std::to_string(exponent) + " (only n >= 1 is defined)") {}

namespace {

std::string format_location(const std::string& file, std::size_t line, std::size_t column,
                            const std::string& what) {
    std::string out = file;
    if (line > 0) {
        out += ":" + std::to_string(line);
        if (column > 0) out += ":" + std::to_string(column);
    }
    return out + ": " + what;
}

}  // namespace

ParseError::ParseError(std::string file, std::size_t line, std::size_t column, const std::string& what)
    : Error(format_location(file, line, column, what)),
      file_(std::move(file)),
      line_(line),
      column_(column) {}

IoError::IoError(std::string path, const std::string& what)
    : Error(path + ": " + what), path_(std::move(path)) {}

}  // namespace ust
