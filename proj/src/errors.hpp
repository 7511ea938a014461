#pragma once

#include <stdexcept>
#include <string>

namespace ratiolim {

// Malformed or inconsistent run configuration (unknown key, bad value,
// violated config invariant). Maps to process exit code 2.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// A requested computation exceeds the configured resource guards
// (box volume, vertex count, schedule overflow). Maps to exit code 3.
struct ResourceError : std::runtime_error {
    explicit ResourceError(const std::string& msg) : std::runtime_error(msg) {}
};

// Construction failure that indicates misuse rather than bad data,
// e.g. the origin not satisfying a membership predicate.
struct GraphBuildError : std::runtime_error {
    explicit GraphBuildError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace ratiolim
