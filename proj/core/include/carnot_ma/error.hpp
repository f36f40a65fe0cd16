#pragma once

#include <stdexcept>
#include <string>

namespace carnot_ma {

/// Malformed arguments: dimension mismatches, empty inputs, bad parameters.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Mathematically undefined evaluation (log of a non-PD matrix, a stencil
/// leaving the domain of the function, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A structural hypothesis (Carnot type, uniform convexity, growth) does not
/// hold, so a construction cannot be carried out.
class UnsupportedError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// No discrete subsolution could be produced to start the Perron iteration.
class PerronEmptyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Configuration parse or validation failure. `code` is a stable identifier
/// (for example "grid.h.nonpositive"); `line` is 1-based or 0 when unknown.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string code, const std::string& message, int line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
          code_(std::move(code)),
          line_(line) {}

    const std::string& code() const noexcept { return code_; }
    int line() const noexcept { return line_; }

private:
    std::string code_;
    int line_;
};

}  // namespace carnot_ma
