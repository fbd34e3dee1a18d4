#pragma once

#include <stdexcept>
#include <string>

namespace bootcmp {

/// Bad user input: unreadable files, misaligned ids, unknown system names,
/// mixed value types. Maps to process exit code 2 in the CLI.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// A statistical guard tripped: too few replicates, exact enumeration over
/// too many instances, not enough data for an estimator. Exit code 3.
class GuardError : public std::runtime_error {
public:
    explicit GuardError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace bootcmp
