#pragma once

#include <stdexcept>
#include <string>

namespace nforge {

// Resource-bound refusals (CLI exit code 2).
struct BoundExceeded : std::runtime_error {
    explicit BoundExceeded(const std::string& what) : std::runtime_error(what) {}
};

// Truncated engines refuse to multiply past the truncation degree instead of
// silently projecting.
struct DegreeOverflow : BoundExceeded {
    explicit DegreeOverflow(const std::string& what) : BoundExceeded(what) {}
};

// Something the theory guarantees failed to hold (CLI exit code 3).
struct InternalInconsistency : std::logic_error {
    explicit InternalInconsistency(const std::string& what) : std::logic_error(what) {}
};

// Malformed user input (CLI exit code 1).
struct InvalidInput : std::runtime_error {
    explicit InvalidInput(const std::string& what) : std::runtime_error(what) {}
};

} // namespace nforge
