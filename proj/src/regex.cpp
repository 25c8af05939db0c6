#include "rpqshap/regex.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>

#include "rpqshap/errors.hpp"

namespace rpqshap {

struct RegexAst::Node {
    RegexKind kind;
    Label label;
    std::vector<RegexAst> children;
};

namespace {

bool is_letter(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

}  // namespace

Word make_word(std::string_view text) {
    Word word;
    std::size_t i = 0;
    while (i < text.size()) {
        if (text[i] == ' ' || text[i] == '\t') {
            ++i;
            continue;
        }
        std::size_t j = i + 1;
        while (j < text.size() && is_digit(text[j])) ++j;
        word.emplace_back(text.substr(i, j - i));
        i = j;
    }
    return word;
}

std::string to_string(const Word& word) {
    std::string out;
    for (const auto& symbol : word) {
        if (!out.empty()) out += ' ';
        out += symbol;
    }
    return out.empty() ? "@" : out;
}

RegexAst RegexAst::empty_language() {
    return RegexAst(std::make_shared<const Node>(Node{RegexKind::EmptyLanguage, {}, {}}));
}
RegexAst RegexAst::epsilon() {
    return RegexAst(std::make_shared<const Node>(Node{RegexKind::Epsilon, {}, {}}));
}
RegexAst RegexAst::symbol(Label label) {
    return RegexAst(std::make_shared<const Node>(Node{RegexKind::Symbol, std::move(label), {}}));
}
RegexAst RegexAst::any_symbol() {
    return RegexAst(std::make_shared<const Node>(Node{RegexKind::AnySymbol, {}, {}}));
}
RegexAst RegexAst::union_of(RegexAst left, RegexAst right) {
    return RegexAst(std::make_shared<const Node>(
        Node{RegexKind::Union, {}, {std::move(left), std::move(right)}}));
}
RegexAst RegexAst::concat(RegexAst left, RegexAst right) {
    return RegexAst(std::make_shared<const Node>(
        Node{RegexKind::Concat, {}, {std::move(left), std::move(right)}}));
}
RegexAst RegexAst::star(RegexAst inner) {
    return RegexAst(std::make_shared<const Node>(Node{RegexKind::Star, {}, {std::move(inner)}}));
}

RegexKind RegexAst::kind() const { return node_->kind; }
const Label& RegexAst::label() const { return node_->label; }
const RegexAst& RegexAst::left() const { return node_->children.at(0); }
const RegexAst& RegexAst::right() const { return node_->children.at(1); }

std::set<Label> RegexAst::symbols() const {
    std::set<Label> out;
    if (kind() == RegexKind::Symbol) out.insert(label());
    for (const auto& child : node_->children) {
        auto sub = child.symbols();
        out.insert(sub.begin(), sub.end());
    }
    return out;
}

bool RegexAst::uses_any_symbol() const {
    if (kind() == RegexKind::AnySymbol) return true;
    return std::any_of(node_->children.begin(), node_->children.end(),
                       [](const RegexAst& c) { return c.uses_any_symbol(); });
}

std::string RegexAst::structure() const {
    switch (kind()) {
        case RegexKind::EmptyLanguage: return "{}";
        case RegexKind::Epsilon: return "@";
        case RegexKind::Symbol: return label();
        case RegexKind::AnySymbol: return ".";
        case RegexKind::Union: return "Union(" + left().structure() + "," + right().structure() + ")";
        case RegexKind::Concat: return "Concat(" + left().structure() + "," + right().structure() + ")";
        case RegexKind::Star: return "Star(" + inner().structure() + ")";
    }
    return {};
}

namespace {

class RegexParser {
public:
    explicit RegexParser(std::string_view text) : text_(text) {}

    RegexAst parse() {
        skip_space();
        if (at_end()) throw RegexSyntaxError(pos_, "empty expression");
        RegexAst result = parse_expr();
        skip_space();
        if (!at_end()) {
            throw RegexSyntaxError(pos_, std::string("unexpected '") + text_[pos_] + "'");
        }
        return result;
    }

private:
    bool at_end() const { return pos_ >= text_.size(); }

    void skip_space() {
        while (!at_end() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
    }

    bool starts_base() {
        skip_space();
        if (at_end()) return false;
        const char c = text_[pos_];
        return is_letter(c) || c == '\'' || c == '"' || c == '.' || c == '@' || c == '{' || c == '(';
    }

    RegexAst parse_expr() {
        RegexAst result = parse_term();
        skip_space();
        while (!at_end() && text_[pos_] == '|') {
            ++pos_;
            result = RegexAst::union_of(std::move(result), parse_term());
            skip_space();
        }
        return result;
    }

    RegexAst parse_term() {
        if (!starts_base()) {
            if (at_end()) throw RegexSyntaxError(pos_, "expected an expression, found end of input");
            throw RegexSyntaxError(pos_, std::string("expected an expression, found '") +
                                             text_[pos_] + "'");
        }
        RegexAst result = parse_factor();
        while (starts_base()) result = RegexAst::concat(std::move(result), parse_factor());
        return result;
    }

    RegexAst parse_factor() {
        RegexAst result = parse_base();
        skip_space();
        while (!at_end() && text_[pos_] == '*') {
            ++pos_;
            result = RegexAst::star(std::move(result));
            skip_space();
        }
        return result;
    }

    RegexAst parse_base() {
        const char c = text_[pos_];
        if (is_letter(c)) {
            const std::size_t start = pos_++;
            while (!at_end() && is_digit(text_[pos_])) ++pos_;
            return RegexAst::symbol(std::string(text_.substr(start, pos_ - start)));
        }
        if (c == '\'' || c == '"') {
            const std::size_t start = pos_;
            const std::size_t close = text_.find(c, pos_ + 1);
            if (close == std::string_view::npos) throw RegexSyntaxError(start, "unterminated quote");
            if (close == pos_ + 1) throw RegexSyntaxError(start, "empty quoted label");
            pos_ = close + 1;
            return RegexAst::symbol(std::string(text_.substr(start + 1, close - start - 1)));
        }
        if (c == '.') {
            ++pos_;
            return RegexAst::any_symbol();
        }
        if (c == '@') {
            ++pos_;
            return RegexAst::epsilon();
        }
        if (c == '{') {
            if (pos_ + 1 >= text_.size() || text_[pos_ + 1] != '}') {
                throw RegexSyntaxError(pos_, "expected '{}'");
            }
            pos_ += 2;
            return RegexAst::empty_language();
        }
        // '('
        const std::size_t open = pos_++;
        RegexAst inner = parse_expr();
        skip_space();
        if (at_end() || text_[pos_] != ')') throw RegexSyntaxError(at_end() ? open : pos_, "expected ')'");
        ++pos_;
        return inner;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

constexpr int kAnySymbol = -1;

struct Nfa {
    struct State {
        std::vector<int> epsilon;
        std::vector<std::pair<int, int>> moves;  // (symbol or kAnySymbol, target)
    };
    std::vector<State> states;

    int add() {
        states.emplace_back();
        return static_cast<int>(states.size()) - 1;
    }
};

struct Fragment {
    int start;
    int accept;
};

Fragment build_nfa(Nfa& nfa, const RegexAst& ast, const std::map<Label, int>& symbols) {
    switch (ast.kind()) {
        case RegexKind::EmptyLanguage: {
            const int s = nfa.add();
            return {s, nfa.add()};
        }
        case RegexKind::Epsilon: {
            const int s = nfa.add();
            const int a = nfa.add();
            nfa.states[s].epsilon.push_back(a);
            return {s, a};
        }
        case RegexKind::Symbol:
        case RegexKind::AnySymbol: {
            const int s = nfa.add();
            const int a = nfa.add();
            const int symbol = ast.kind() == RegexKind::AnySymbol ? kAnySymbol : symbols.at(ast.label());
            nfa.states[s].moves.emplace_back(symbol, a);
            return {s, a};
        }
        case RegexKind::Union: {
            const Fragment l = build_nfa(nfa, ast.left(), symbols);
            const Fragment r = build_nfa(nfa, ast.right(), symbols);
            const int s = nfa.add();
            const int a = nfa.add();
            nfa.states[s].epsilon = {l.start, r.start};
            nfa.states[l.accept].epsilon.push_back(a);
            nfa.states[r.accept].epsilon.push_back(a);
            return {s, a};
        }
        case RegexKind::Concat: {
            const Fragment l = build_nfa(nfa, ast.left(), symbols);
            const Fragment r = build_nfa(nfa, ast.right(), symbols);
            nfa.states[l.accept].epsilon.push_back(r.start);
            return {l.start, r.accept};
        }
        case RegexKind::Star: {
            const Fragment inner = build_nfa(nfa, ast.inner(), symbols);
            const int s = nfa.add();
            const int a = nfa.add();
            nfa.states[s].epsilon = {inner.start, a};
            nfa.states[inner.accept].epsilon.push_back(inner.start);
            nfa.states[inner.accept].epsilon.push_back(a);
            return {s, a};
        }
    }
    throw Error(ErrorKind::InvalidArgument, "unknown regex node");
}

std::vector<int> closure(const Nfa& nfa, std::vector<int> seeds) {
    std::vector<std::uint8_t> seen(nfa.states.size(), 0);
    std::vector<int> stack;
    for (int s : seeds) {
        if (!seen[s]) {
            seen[s] = 1;
            stack.push_back(s);
        }
    }
    std::vector<int> out;
    while (!stack.empty()) {
        const int s = stack.back();
        stack.pop_back();
        out.push_back(s);
        for (int t : nfa.states[s].epsilon) {
            if (!seen[t]) {
                seen[t] = 1;
                stack.push_back(t);
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

RegexAst parse_regex(std::string_view text) { return RegexParser(text).parse(); }

std::optional<std::size_t> Dfa::symbol_index(std::string_view label) const {
    auto it = std::lower_bound(alphabet_.begin(), alphabet_.end(), label,
                               [](const Label& a, std::string_view b) { return a < b; });
    if (it == alphabet_.end() || *it != label) return std::nullopt;
    return static_cast<std::size_t>(it - alphabet_.begin());
}

Dfa compile(const RegexAst& ast, const std::set<Label>& alphabet) {
    if (alphabet.empty()) throw Error(ErrorKind::AlphabetMismatch, "alphabet is empty");
    std::map<Label, int> symbols;
    for (const auto& label : alphabet) symbols.emplace(label, static_cast<int>(symbols.size()));
    for (const auto& label : ast.symbols()) {
        if (!symbols.count(label)) {
            throw Error(ErrorKind::AlphabetMismatch, "symbol '" + label + "' is not in the alphabet");
        }
    }

    Nfa nfa;
    const Fragment root = build_nfa(nfa, ast, symbols);
    const std::size_t sigma = alphabet.size();

    Dfa dfa;
    dfa.alphabet_.assign(alphabet.begin(), alphabet.end());

    std::map<std::vector<int>, std::size_t> ids;
    std::vector<std::vector<int>> sets;
    auto intern = [&](std::vector<int> set) {
        auto [it, inserted] = ids.emplace(set, sets.size());
        if (inserted) {
            sets.push_back(std::move(set));
            dfa.transitions_.resize(sets.size() * sigma, 0);
        }
        return it->second;
    };

    dfa.start_ = intern(closure(nfa, {root.start}));
    for (std::size_t current = 0; current < sets.size(); ++current) {
        for (std::size_t a = 0; a < sigma; ++a) {
            std::vector<int> targets;
            for (int s : sets[current]) {
                for (auto [symbol, t] : nfa.states[s].moves) {
                    if (symbol == kAnySymbol || symbol == static_cast<int>(a)) targets.push_back(t);
                }
            }
            const std::size_t next = intern(closure(nfa, std::move(targets)));
            dfa.transitions_[current * sigma + a] = next;
        }
    }
    // The empty subset is the dead state; make sure it exists even when no
    // move ever fails.
    dfa.dead_ = intern({});
    for (std::size_t a = 0; a < sigma; ++a) dfa.transitions_[dfa.dead_ * sigma + a] = dfa.dead_;

    const std::size_t n = sets.size();
    dfa.accepting_.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        dfa.accepting_[i] = std::binary_search(sets[i].begin(), sets[i].end(), root.accept);
    }

    std::vector<std::uint8_t> reachable(n, 0);
    std::vector<std::size_t> stack{dfa.start_};
    reachable[dfa.start_] = 1;
    while (!stack.empty()) {
        const std::size_t s = stack.back();
        stack.pop_back();
        for (std::size_t a = 0; a < sigma; ++a) {
            const std::size_t t = dfa.next(s, a);
            if (!reachable[t]) {
                reachable[t] = 1;
                stack.push_back(t);
            }
        }
    }
    std::vector<std::vector<std::size_t>> reverse(n);
    for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t a = 0; a < sigma; ++a) reverse[dfa.next(s, a)].push_back(s);
    }
    std::vector<std::uint8_t> coreachable(n, 0);
    for (std::size_t s = 0; s < n; ++s) {
        if (dfa.accepting_[s]) {
            coreachable[s] = 1;
            stack.push_back(s);
        }
    }
    while (!stack.empty()) {
        const std::size_t s = stack.back();
        stack.pop_back();
        for (std::size_t p : reverse[s]) {
            if (!coreachable[p]) {
                coreachable[p] = 1;
                stack.push_back(p);
            }
        }
    }
    dfa.useful_.assign(n, 0);
    for (std::size_t s = 0; s < n; ++s) dfa.useful_[s] = reachable[s] && coreachable[s];
    return dfa;
}

bool accepts(const Dfa& dfa, std::span<const Label> word) {
    std::size_t state = dfa.start();
    for (const auto& symbol : word) {
        const auto index = dfa.symbol_index(symbol);
        if (!index) return false;
        state = dfa.next(state, *index);
    }
    return dfa.is_accepting(state);
}

LanguageProfile language_profile(const Dfa& dfa) {
    LanguageProfile profile;
    if (!dfa.is_useful(dfa.start())) {
        profile.is_empty = true;
        profile.is_finite = true;
        profile.short2 = true;
        return profile;
    }
    const std::size_t n = dfa.state_count();
    const std::size_t sigma = dfa.alphabet().size();

    // Longest accepted suffix length from each useful state; a back edge
    // within the useful part means the language is infinite.
    enum : std::uint8_t { kWhite, kGrey, kBlack };
    std::vector<std::uint8_t> color(n, kWhite);
    std::vector<std::size_t> longest(n, 0);
    bool cyclic = false;
    std::function<void(std::size_t)> visit = [&](std::size_t s) {
        color[s] = kGrey;
        std::size_t best = 0;
        for (std::size_t a = 0; a < sigma && !cyclic; ++a) {
            const std::size_t t = dfa.next(s, a);
            if (!dfa.is_useful(t)) continue;
            if (color[t] == kGrey) {
                cyclic = true;
                return;
            }
            if (color[t] == kWhite) visit(t);
            best = std::max(best, longest[t] + 1);
        }
        longest[s] = best;
        color[s] = kBlack;
    };
    visit(dfa.start());
    if (cyclic) return profile;
    profile.is_finite = true;
    profile.max_word_length = longest[dfa.start()];
    profile.short2 = *profile.max_word_length <= 2;
    return profile;
}

std::vector<Word> words_up_to(const Dfa& dfa, std::size_t max_length, std::size_t cap) {
    std::vector<Word> out;
    if (!dfa.is_useful(dfa.start())) return out;
    std::vector<std::pair<Word, std::size_t>> frontier{{Word{}, dfa.start()}};
    for (std::size_t length = 0;; ++length) {
        for (const auto& [word, state] : frontier) {
            if (dfa.is_accepting(state)) {
                if (out.size() >= cap) {
                    throw Error(ErrorKind::EnumerationOverflow,
                                "more than " + std::to_string(cap) + " words");
                }
                out.push_back(word);
            }
        }
        if (length == max_length) break;
        std::vector<std::pair<Word, std::size_t>> next;
        for (const auto& [word, state] : frontier) {
            for (std::size_t a = 0; a < dfa.alphabet().size(); ++a) {
                const std::size_t t = dfa.next(state, a);
                if (!dfa.is_useful(t)) continue;
                if (next.size() >= cap) {
                    throw Error(ErrorKind::EnumerationOverflow,
                                "word search frontier exceeds " + std::to_string(cap));
                }
                Word extended = word;
                extended.push_back(dfa.alphabet()[a]);
                next.emplace_back(std::move(extended), t);
            }
        }
        if (next.empty()) break;
        frontier = std::move(next);
    }
    return out;
}

bool is_universal(const Dfa& dfa) {
    std::vector<std::uint8_t> seen(dfa.state_count(), 0);
    std::vector<std::size_t> stack{dfa.start()};
    seen[dfa.start()] = 1;
    while (!stack.empty()) {
        const std::size_t s = stack.back();
        stack.pop_back();
        if (!dfa.is_accepting(s)) return false;
        for (std::size_t a = 0; a < dfa.alphabet().size(); ++a) {
            const std::size_t t = dfa.next(s, a);
            if (!seen[t]) {
                seen[t] = 1;
                stack.push_back(t);
            }
        }
    }
    return true;
}

}  // namespace rpqshap
