#pragma once

#include <stdexcept>
#include <string>

namespace ordembed {

// Bad arguments, malformed files, violated preconditions. CLI maps this to exit code 2.
class validation_error : public std::invalid_argument {
public:
    explicit validation_error(const std::string& what) : std::invalid_argument(what) {}
};

// Overflow, failed convergence, non-finite gradients. CLI maps this to exit code 3.
class numeric_error : public std::runtime_error {
public:
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

// Problem size exceeds a hard guard (e.g. triplet universe enumeration).
class capacity_error : public std::runtime_error {
public:
    explicit capacity_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ordembed
