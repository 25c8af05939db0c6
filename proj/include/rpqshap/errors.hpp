#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rpqshap {

enum class ErrorKind {
    MalformedGraph,
    InvalidPlayerSet,
    RegexSyntax,
    AlphabetMismatch,
    MalformedQuery,
    UnknownVertex,
    EnumerationOverflow,
    NoPlayers,
    NonDisjointStructure,
    InfiniteLanguage,
    BudgetExceeded,
    InvalidArgument,
};

const char* to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries one of the kinds above so
/// callers (the CLI in particular) can map it to a stable exit status.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

class RegexSyntaxError : public Error {
public:
    RegexSyntaxError(std::size_t position, const std::string& message)
        : Error(ErrorKind::RegexSyntax,
                "regex syntax error at offset " + std::to_string(position) + ": " + message),
          position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

}  // namespace rpqshap
