#pragma once

#include <stdexcept>
#include <string>

namespace qsl {

// Bad user input: schema violations, dimension mismatches, contract
// violations on arguments. The CLI maps this to exit code 2.
class invalid_input : public std::runtime_error {
public:
    explicit invalid_input(const std::string& what) : std::runtime_error(what) {}
};

// Numerical breakdown at runtime: overflow, non-finite intermediates,
// geometry violated by a too-coarse grid. The CLI maps this to exit code 3.
class numeric_failure : public std::runtime_error {
public:
    explicit numeric_failure(const std::string& what) : std::runtime_error(what) {}
};

} // namespace qsl
