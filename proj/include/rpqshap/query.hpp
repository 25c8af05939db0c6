#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rpqshap/graph.hpp"
#include "rpqshap/regex.hpp"

namespace rpqshap {

/// Whether the empty path from u to u answers an atom whose language
/// contains ε. Every evaluator in the library consults this one predicate.
constexpr bool empty_path_matches() { return true; }

struct RpqAtom {
    std::string source_var;
    std::string expression;
    Dfa dfa;
    std::string target_var;
    LanguageProfile profile;
};

/// Conjunction of atoms over named variables. Variables are listed in
/// order of first appearance.
class Crpq {
public:
    /// Throws MalformedQuery when there are no atoms, when a variable is
    /// listed twice, or when a listed variable is unused / an atom variable
    /// is unlisted.
    Crpq(std::vector<std::string> variables, std::vector<RpqAtom> atoms);

    const std::vector<std::string>& variables() const noexcept { return variables_; }
    const std::vector<RpqAtom>& atoms() const noexcept { return atoms_; }

    bool all_finite() const;
    bool is_single_short2_atom() const;
    bool has_empty_atom() const;

private:
    std::vector<std::string> variables_;
    std::vector<RpqAtom> atoms_;
};

struct ParsedAtom {
    std::string source_var;
    std::string expression;
    RegexAst regex;
    std::string target_var;
};

/// `(x, a*, y) & (y, b*, z)`. A bare expression without parentheses and
/// commas is read as the single atom (x, expression, y).
std::vector<ParsedAtom> parse_crpq_atoms(std::string_view text);

/// Compiles every atom over the union of `graph_labels` and the query's
/// own symbols.
Crpq compile_crpq(const std::vector<ParsedAtom>& atoms, const std::set<Label>& graph_labels);

Crpq parse_crpq(std::string_view text, const LabeledGraph& graph);

/// Variable name to vertex id (μ).
using Assignment = std::map<std::string, VertexId>;

/// `x=v1,y=v2`.
Assignment parse_assignment(std::string_view text);

/// Vertex indices for the query's variables, in variable order. Throws
/// MalformedQuery for missing or extra variables and UnknownVertex for
/// ids absent from the graph.
std::vector<std::size_t> resolve_assignment(const LabeledGraph& graph, const Crpq& query,
                                            const Assignment& binding);

/// Product-graph reachability for one DFA over one graph, optionally
/// restricted to a subgraph by liveness masks. Holds references to both
/// inputs; const member functions are safe to call concurrently.
class RpqEvaluator {
public:
    RpqEvaluator(const LabeledGraph& graph, const Dfa& dfa);

    /// Is there a path source -> target whose label word is accepted?
    /// A null mask means "everything alive". A dead endpoint never matches.
    bool holds(std::size_t source, std::size_t target, const Mask* edges = nullptr,
               const Mask* vertices = nullptr) const;

    /// All targets reachable from `source` by an accepted word (flag per vertex).
    std::vector<std::uint8_t> targets(std::size_t source, const Mask* edges = nullptr,
                                      const Mask* vertices = nullptr) const;

    /// Product states (vertex * state_count + dfa state) from which some
    /// accepting state at `target` is reachable.
    std::vector<std::uint8_t> coreachable(std::size_t target, const Mask* edges = nullptr,
                                          const Mask* vertices = nullptr) const;

    /// DFA symbol index of each edge label, or -1 when outside the alphabet.
    int edge_symbol(std::size_t edge) const { return edge_symbol_[edge]; }

    const LabeledGraph& graph() const noexcept { return *graph_; }
    const Dfa& dfa() const noexcept { return *dfa_; }

private:
    bool edge_alive(std::size_t e, const Mask* edges, const Mask* vertices) const;
    std::vector<std::uint8_t> sweep(std::size_t source, const Mask* edges,
                                    const Mask* vertices) const;

    const LabeledGraph* graph_;
    const Dfa* dfa_;
    std::vector<int> edge_symbol_;
};

bool eval_rpq(const LabeledGraph& graph, std::string_view source, std::string_view target,
              const Dfa& dfa);

bool eval_crpq_bound(const LabeledGraph& graph, const Crpq& query, const Assignment& binding);

std::set<std::pair<VertexId, VertexId>> atom_relation(const LabeledGraph& graph, const Dfa& dfa);

/// All satisfying assignments, one tuple per answer in variable order,
/// sorted lexicographically. Throws EnumerationOverflow once an
/// intermediate or final result exceeds `cap` tuples.
std::vector<std::vector<VertexId>> enumerate_answers(const LabeledGraph& graph, const Crpq& query,
                                                     std::size_t cap = 1'000'000);

}  // namespace rpqshap
