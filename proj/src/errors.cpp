#include "rpqshap/errors.hpp"

namespace rpqshap {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::MalformedGraph: return "MalformedGraph";
        case ErrorKind::InvalidPlayerSet: return "InvalidPlayerSet";
        case ErrorKind::RegexSyntax: return "RegexSyntax";
        case ErrorKind::AlphabetMismatch: return "AlphabetMismatch";
        case ErrorKind::MalformedQuery: return "MalformedQuery";
        case ErrorKind::UnknownVertex: return "UnknownVertex";
        case ErrorKind::EnumerationOverflow: return "EnumerationOverflow";
        case ErrorKind::NoPlayers: return "NoPlayers";
        case ErrorKind::NonDisjointStructure: return "NonDisjointStructure";
        case ErrorKind::InfiniteLanguage: return "InfiniteLanguage";
        case ErrorKind::BudgetExceeded: return "BudgetExceeded";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

}  // namespace rpqshap
