#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rpq {

/// Base of every error the library raises. The CLI maps each subclass to a
/// distinct exit code.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed graph line, class file line or regular expression.
/// `position` is a 1-based line number for files and a 0-based column for
/// expressions.
class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t position)
        : Error(message), position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// Inconsistent or out-of-domain parameters (topology, replication, flags).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// An operation that would be legal but is refused because of its cost,
/// e.g. a wildcard query under top-down retrieval.
class RefusalError : public Error {
public:
    using Error::Error;
};

} // namespace rpq
