#include "vbesov/error.hpp"

namespace vbesov {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::parameter: return "parameter";
        case ErrorKind::admissibility: return "admissibility";
        case ErrorKind::unsupported: return "unsupported";
        case ErrorKind::construction: return "construction";
        case ErrorKind::hypothesis: return "hypothesis";
        case ErrorKind::grid_mismatch: return "grid_mismatch";
        case ErrorKind::parse: return "parse";
        case ErrorKind::io: return "io";
    }
    return "unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + " error: " + message), kind_(kind) {}

void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace vbesov
