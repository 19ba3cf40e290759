#pragma once

#include <stdexcept>
#include <string>

namespace litkg {

/// Bad or inconsistent input data (malformed rows, missing files,
/// schema violations). Maps to CLI exit code 2.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A computation failed at runtime (non-finite loss, non-convergence).
/// Maps to CLI exit code 3.
class ComputeError : public std::runtime_error {
public:
    explicit ComputeError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace litkg
