#pragma once

#include <stdexcept>
#include <string>

namespace flatlab {

/// Bad arguments, malformed files, off-domain queries.  CLI exit code 2.
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// Input exceeds a documented capacity limit.  CLI exit code 2.
struct CapacityError : ValidationError {
    explicit CapacityError(const std::string& what) : ValidationError(what) {}
};

/// A construction could not be carried out for geometric reasons
/// (e.g. endpoint spacing impossible, profile length infeasible).  CLI exit code 3.
struct ConstructionError : std::runtime_error {
    explicit ConstructionError(const std::string& what) : std::runtime_error(what) {}
};

/// A quantity that the library guarantees failed its check.  CLI exit code 4.
struct InvariantViolation : std::runtime_error {
    explicit InvariantViolation(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace flatlab
