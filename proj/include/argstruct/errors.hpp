#pragma once

#include <stdexcept>
#include <string>

namespace argstruct {

/// Malformed input record (bad brat line, bad CSV row, bad JSON layer).
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A record references an id that does not exist.
class ReferenceError : public std::runtime_error {
public:
    explicit ReferenceError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Structurally invalid data (overlapping components, offsets out of bounds).
class ValidityError : public std::runtime_error {
public:
    explicit ValidityError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Bad configuration: missing models, inconsistent flags, bad hyperparameters.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Input data does not satisfy an operation's precondition (empty training
/// set, single-class data, degenerate agreement table).
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace argstruct
