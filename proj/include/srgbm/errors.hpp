#pragma once

#include <stdexcept>
#include <string>

namespace srgbm {

/// Invalid user input: model parameters, grid, or experiment configuration.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failure: quadrature non-convergence, root bracketing failure,
/// or a time step too coarse for the dynamics.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

/// Filesystem failure while emitting results.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace srgbm
