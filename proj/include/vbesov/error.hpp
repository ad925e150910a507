#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace vbesov {

enum class ErrorKind {
    parameter,      // malformed or out-of-range argument
    admissibility,  // exponent or input outside the admissible class
    unsupported,    // feature not implemented for this input (e.g. q = infinity)
    construction,   // an object failed its own post-construction check
    hypothesis,     // a theorem hypothesis is violated by the request
    grid_mismatch,  // operands live on different grids or ladders
    parse,          // config or expression syntax error
    io,             // file read/write failure
};

[[nodiscard]] std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message);
    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

inline void require(bool condition, ErrorKind kind, const std::string& message) {
    if (!condition) fail(kind, message);
}

// Literal messages are only turned into strings on failure.
inline void require(bool condition, ErrorKind kind, const char* message) {
    if (!condition) fail(kind, message);
}

}  // namespace vbesov
