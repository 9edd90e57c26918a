#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace binar {

/// File-content error whose message names the offending line.
class parse_error : public std::runtime_error {
public:
    parse_error(const std::string& message, std::size_t line)
        : std::runtime_error(message + " at line " + std::to_string(line)), line_(line) {}

    explicit parse_error(const std::string& message) : std::runtime_error(message), line_(0) {}

    /// 1-based line number, 0 when the error is not tied to a line.
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace binar
