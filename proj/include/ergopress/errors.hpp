#pragma once

#include <stdexcept>
#include <string>

namespace ergopress {

// Two error families, matching the CLI exit-code contract:
// validation errors (bad inputs, exit 2) and domain errors (well-formed
// inputs that hit an empty/degenerate case at run time, exit 3).
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EmptyShiftError : ValidationError {
    EmptyShiftError() : ValidationError("shift is empty after trimming") {}
    explicit EmptyShiftError(const std::string& what) : ValidationError(what) {}
};
struct InadmissibleWordError : ValidationError {
    using ValidationError::ValidationError;
};
struct NotADistributionError : ValidationError {
    using ValidationError::ValidationError;
};
struct ReducibleError : ValidationError {
    using ValidationError::ValidationError;
};
struct OrderTooLargeError : ValidationError {
    using ValidationError::ValidationError;
};

struct EmptyFiberError : DomainError {
    using DomainError::DomainError;
};
struct InadmissiblePeriodError : DomainError {
    using DomainError::DomainError;
};
struct GenerationFailedError : DomainError {
    using DomainError::DomainError;
};

} // namespace ergopress
