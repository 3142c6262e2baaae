#pragma once

#include <stdexcept>
#include <string>

namespace vacrand {

// Error taxonomy; the CLI maps each class to a distinct exit code.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// malformed data (truncated sample file, bad bit-stream encoding, ...)
struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// parameter outside the mathematical domain of an operation
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace vacrand
