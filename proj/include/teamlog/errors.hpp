#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace teamlog {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed formula or team text. Line and column are 1-based.
class ParseError : public Error {
public:
    enum class Kind {
        Syntax,
        NonAtomicNegation,
        ArityMismatch,
        MixedAtomKinds,
        RowArity,
        NonBit,
        DuplicateRow,
    };

    ParseError(Kind kind, std::size_t line, std::size_t column, const std::string& what)
        : Error(what + " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")"),
          kind_(kind), line_(line), column_(column) {}

    [[nodiscard]] Kind kind() const noexcept { return kind_; }
    [[nodiscard]] std::size_t line() const noexcept { return line_; }
    [[nodiscard]] std::size_t column() const noexcept { return column_; }

private:
    Kind kind_;
    std::size_t line_;
    std::size_t column_;
};

/// Violation of a formula construction invariant (bad identifier, tuple arity, mixed atom kinds).
class FormulaError : public Error {
public:
    using Error::Error;
};

/// Team construction with inconsistent rows.
class TeamError : public Error {
public:
    using Error::Error;
};

class UnknownVariable : public Error {
public:
    explicit UnknownVariable(const std::string& name)
        : Error("unknown variable '" + name + "'"), name_(name) {}
    [[nodiscard]] const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

/// An exponential enumeration would exceed its configured cap.
class ResourceLimit : public Error {
public:
    using Error::Error;
};

}  // namespace teamlog
