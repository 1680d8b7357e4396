#pragma once

#include <stdexcept>
#include <string>

namespace dqc {

/// Invalid configuration value (qubit count, depth, preset name, ...).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Caller passed arguments that violate an operation's precondition.
class ArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Non-finite value produced or encountered during computation.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent dataset/checkpoint file.
class LoadError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File could not be opened or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace dqc
