#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace abl {

// Malformed input file. `line` is 1-based, 0 when not tied to a line.
class FormatError : public std::runtime_error {
public:
    FormatError(std::size_t line, const std::string& what)
        : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace abl
