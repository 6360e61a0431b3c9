#pragma once

#include <stdexcept>
#include <string>

namespace shiftspec {

struct DivisionByZero : std::domain_error {
    explicit DivisionByZero(const std::string& what) : std::domain_error(what) {}
};

struct PreconditionViolation : std::invalid_argument {
    explicit PreconditionViolation(const std::string& what) : std::invalid_argument(what) {}
};

struct InvalidSpace : std::invalid_argument {
    explicit InvalidSpace(const std::string& what) : std::invalid_argument(what) {}
};

struct Divergent : std::domain_error {
    explicit Divergent(const std::string& what) : std::domain_error(what) {}
};

struct InconclusiveGap : std::runtime_error {
    explicit InconclusiveGap(const std::string& what) : std::runtime_error(what) {}
};

// Config parse/validation failure; `line` is 1-based, 0 when not tied to a line.
struct ConfigError : std::runtime_error {
    int line;
    ConfigError(int line_, const std::string& what)
        : std::runtime_error(line_ > 0 ? "line " + std::to_string(line_) + ": " + what : what),
          line(line_) {}
};

}  // namespace shiftspec
