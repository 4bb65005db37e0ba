#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gnnbench {

/// Base class for all engine errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed text input; carries the 1-based line number.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class IndexOutOfRange : public Error {
public:
    using Error::Error;
};

class FormatError : public Error {
public:
    using Error::Error;
};

class ValueError : public Error {
public:
    using Error::Error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

class EmptyGraphError : public Error {
public:
    using Error::Error;
};

/// Recoverable out-of-memory signal from the ledger. The failed allocation
/// leaves ledger state unchanged; callers record the run as "oom".
class BudgetExceeded : public Error {
public:
    BudgetExceeded(std::size_t requested, std::size_t current, std::size_t budget)
        : Error("allocation of " + std::to_string(requested) + " bytes exceeds budget ("
                + std::to_string(current) + " in use, budget " + std::to_string(budget) + ")"),
          requested_(requested), current_(current), budget_(budget) {}

    std::size_t requested_bytes() const noexcept { return requested_; }
    std::size_t current_bytes() const noexcept { return current_; }
    std::size_t budget_bytes() const noexcept { return budget_; }

private:
    std::size_t requested_;
    std::size_t current_;
    std::size_t budget_;
};

} // namespace gnnbench
