#pragma once

#include <stdexcept>
#include <string>

namespace featgrid {

// Bad input: malformed files, violated preconditions, inconsistent sizes.
// The CLI maps it to exit status 2.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Unreadable or unwritable paths. The CLI maps it to exit status 1.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace featgrid
