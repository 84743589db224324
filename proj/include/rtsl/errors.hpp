#pragma once

#include <stdexcept>
#include <string>

namespace rtsl {

// Bad configuration or schema violation.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Root-finding or linear-algebra failure.
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace rtsl
