#pragma once

#include <stdexcept>
#include <string>

namespace chiral {

// Error categories map to CLI exit codes: validation = 2, capacity = 3,
// numeric = 4. Anything else is a plain runtime_error (exit code 1).

struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

struct CapacityError : std::runtime_error {
    explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace chiral
