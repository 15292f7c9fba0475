#pragma once

#include <stdexcept>
#include <string>

namespace genbound {

// Argument outside the stated domain of an operation.
struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Adjacent matrix dimensions do not compose.
struct ShapeMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Operation only defined for a subset of regularization kinds.
struct UnsupportedRegularization : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Finite-channel alphabet exceeds the brute-force search limit.
struct AlphabetTooLarge : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Target vector too close to zero to define a rotation stack.
struct DegenerateTarget : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Invalid experiment configuration; message names the offending field.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& field, const std::string& what)
        : std::runtime_error(field + ": " + what), field_(field) {}
    const std::string& field() const { return field_; }

  private:
    std::string field_;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace genbound
