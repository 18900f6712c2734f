#ifndef GRAPHON_ERRORS_HPP
#define GRAPHON_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace graphon {

// Bad user-supplied configuration (unknown kernel, M = 0, invalid parameter range).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Mismatched vector/matrix dimensions between caller and callee.
struct ShapeError : std::runtime_error {
    explicit ShapeError(const std::string& what) : std::runtime_error(what) {}
};

// Argument outside its mathematical domain (label outside [0,1], off-grid time, sigma = 0).
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// Non-finite state encountered during a rollout or an optimizer step.
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// Requested an analytic result that does not exist for the given configuration.
struct UnsupportedConfigError : std::runtime_error {
    explicit UnsupportedConfigError(const std::string& what) : std::runtime_error(what) {}
};

// File-level failures (missing checkpoint, malformed CSV).
struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace graphon

#endif
