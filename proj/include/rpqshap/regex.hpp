#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rpqshap/graph.hpp"

namespace rpqshap {

using Word = std::vector<Label>;

/// Splits "abc" into {a, b, c} and "a1 b2" into {a1, b2}; the same
/// tokenization rule the regex parser applies to bare labels.
Word make_word(std::string_view text);

std::string to_string(const Word& word);

enum class RegexKind { EmptyLanguage, Epsilon, Symbol, AnySymbol, Union, Concat, Star };

/// Immutable regular-expression tree. Nodes are shared, so copies are cheap.
class RegexAst {
public:
    static RegexAst empty_language();
    static RegexAst epsilon();
    static RegexAst symbol(Label label);
    static RegexAst any_symbol();
    static RegexAst union_of(RegexAst left, RegexAst right);
    static RegexAst concat(RegexAst left, RegexAst right);
    static RegexAst star(RegexAst inner);

    RegexKind kind() const;
    const Label& label() const;
    const RegexAst& left() const;
    const RegexAst& right() const;
    const RegexAst& inner() const { return left(); }

    /// Labels used by Symbol nodes.
    std::set<Label> symbols() const;
    bool uses_any_symbol() const;

    /// Structural rendering, e.g. "Concat(a,Star(b))".
    std::string structure() const;

private:
    struct Node;
    explicit RegexAst(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

/// Grammar (star binds tighter than concatenation, which binds tighter than |):
///   expr := term ("|" term)* ; term := factor+ ; factor := base "*"*
///   base := LABEL | "." | "@" | "{}" | "(" expr ")"
/// A bare LABEL is one letter followed by optional digits, so adjacent letters
/// concatenate ("abc" = a b c). Multi-letter labels are quoted: 'knows'.
/// "." is any single symbol, "@" the empty word, "{}" the empty language.
RegexAst parse_regex(std::string_view text);

/// Complete DFA over a fixed alphabet. State `dead_state()` absorbs every
/// undefined move; `is_useful` marks states both reachable from the start
/// and able to reach an accepting state.
class Dfa {
public:
    std::size_t state_count() const noexcept { return accepting_.size(); }
    std::size_t start() const noexcept { return start_; }
    std::size_t dead_state() const noexcept { return dead_; }
    const std::vector<Label>& alphabet() const noexcept { return alphabet_; }

    std::optional<std::size_t> symbol_index(std::string_view label) const;
    std::size_t next(std::size_t state, std::size_t symbol) const {
        return transitions_[state * alphabet_.size() + symbol];
    }
    bool is_accepting(std::size_t state) const { return accepting_[state] != 0; }
    bool is_useful(std::size_t state) const { return useful_[state] != 0; }

    /// True when ε is in the language.
    bool accepts_empty_word() const { return is_accepting(start_); }

private:
    friend Dfa compile(const RegexAst& ast, const std::set<Label>& alphabet);

    std::vector<Label> alphabet_;
    std::vector<std::size_t> transitions_;
    std::vector<std::uint8_t> accepting_;
    std::vector<std::uint8_t> useful_;
    std::size_t start_ = 0;
    std::size_t dead_ = 0;
};

/// Thompson construction followed by subset construction. Throws
/// AlphabetMismatch when the expression names a symbol outside `alphabet`.
Dfa compile(const RegexAst& ast, const std::set<Label>& alphabet);

bool accepts(const Dfa& dfa, std::span<const Label> word);

struct LanguageProfile {
    bool is_empty = false;
    bool is_finite = false;
    /// Set only for nonempty finite languages.
    std::optional<std::size_t> max_word_length;
    /// Every word has length at most two.
    bool short2 = false;
};

LanguageProfile language_profile(const Dfa& dfa);

/// All accepted words of length <= max_length, ordered by length then
/// lexicographically. Throws EnumerationOverflow past `cap` words.
std::vector<Word> words_up_to(const Dfa& dfa, std::size_t max_length,
                              std::size_t cap = 1u << 20);

/// One-state DFA accepting everything (Σ*).
bool is_universal(const Dfa& dfa);

}  // namespace rpqshap
