#pragma once

#include <stdexcept>
#include <string>

namespace wlf {

// Malformed input text; carries a 1-based source position.
class ParseError : public std::runtime_error {
public:
    ParseError(int line, int column, const std::string &message)
        : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
          line_(line), column_(column) {}

    int line() const {return line_;}
    int column() const {return column_;}

private:
    int line_;
    int column_;
};

// A PDDL requirement flag outside the supported fragment.
class UnsupportedRequirementError : public std::runtime_error {
public:
    explicit UnsupportedRequirementError(const std::string &flag)
        : std::runtime_error("unsupported requirement " + flag), flag_(flag) {}

    const std::string &flag() const {return flag_;}

private:
    std::string flag_;
};

// Inputs that parse but violate a contract (arity mismatch, unknown
// object, incompatible table mode, rejected configuration, ...).
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A configured resource cap was exceeded (grounding size, pair-state
// memory, training or oracle budget).
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace wlf
